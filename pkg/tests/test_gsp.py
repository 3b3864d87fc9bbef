import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from ggsp.graphon import StepGraphon, TorusCayleyGraphon, cayley_to_step, s3_example_gamma, torus_spectrum
from ggsp.gsp import (
    DEFAULT_MASTER_SEED,
    FourierCoefficients,
    gft,
    igft,
    run_s3_experiment,
    run_ws_experiment,
    s3_reference,
    scatter_svg,
    torus_discretization_check,
    worker_count,
)
from ggsp.rng import derive_seed
from ggsp.sampler import block_signal, sample
from ggsp.spectral import cluster_eigenvalues, eig_sym, graph_spectrum, step_spectrum

R_STAR = 1 / math.sqrt(18)


@pytest.fixture(scope="module")
def default_run():
    return run_s3_experiment()


def random_spectrum(seed, n=8):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, n))
    return eig_sym((X + X.T) / 2, rng.uniform(0.1, 1, n)), rng


@pytest.mark.parametrize("seed", range(10))
def test_parseval(seed):
    s, rng = random_spectrum(seed)
    f = rng.standard_normal(s.size)
    c = gft(s, f, cluster_eigenvalues(s))
    energy = s.inner(f, f)
    assert abs(np.sum(c.coefficients ** 2) - energy) <= 1e-8
    assert abs(np.sum(c.projection_norms ** 2) - energy) <= 1e-8


def test_roundtrip_and_units():
    s, rng = random_spectrum(1)
    f = rng.standard_normal(s.size)
    assert np.allclose(igft(s, gft(s, f)).values, f, atol=1e-8)
    assert np.allclose(igft(s, np.zeros(s.size)).values, 0)
    assert np.allclose(gft(s, np.zeros(s.size)).coefficients, 0)
    for i in (0, 3):
        e = np.zeros(s.size)
        e[i] = 1
        assert np.allclose(igft(s, e).values, s.eigenvectors[:, i])
        assert np.allclose(gft(s, s.eigenvectors[:, i]).coefficients, e, atol=1e-12)
    with pytest.raises(ValueError):
        igft(s, np.zeros(s.size + 1))
    with pytest.raises(ValueError):
        gft(s, np.zeros(s.size + 1))


def test_gft_without_clusters_has_no_projections():
    s, _ = random_spectrum(2)
    c = gft(s, np.ones(s.size))
    assert isinstance(c, FourierCoefficients) and c.projection_norms is None


def test_reference_two_ways():
    ref = s3_reference()
    assert abs(ref.radius - ref.projection_radius) <= 1e-10
    assert abs(ref.radius - R_STAR) <= 1e-12
    # independent route: orthogonal projector onto the lambda_2 eigenspace via numpy
    P = cayley_to_step(s3_example_gamma()).P / 6
    vals, U = np.linalg.eigh(P)
    lam2 = (0.6 + math.sqrt(0.07)) / 6
    E = U[:, np.abs(vals - lam2) < 1e-9]
    assert E.shape[1] == 2
    f = np.zeros(6)
    f[0] = 1.0
    # weight 1/6: phi = sqrt(6) u, coefficient <f, phi> = u . f / sqrt(6)
    assert math.hypot(*(E.T @ f / math.sqrt(6))) == pytest.approx(ref.radius, abs=1e-12)


def test_default_experiment_radii(default_run):
    assert len(default_run.points) == 10
    assert default_run.max_relative_deviation <= 0.10
    assert default_run.c2_relative_spread > 0.5


def test_points_do_not_cluster(default_run):
    pts = np.array([(p.c3, p.c2) for p in default_run.points])
    for center in pts:
        dist = np.linalg.norm(pts - center, axis=1)
        assert np.any(dist > 0.10 * np.linalg.norm(center))


def test_eigenvalues_converge(default_run):
    ref = np.array(default_run.reference.eigenvalues)
    for p in default_run.points:
        assert np.max(np.abs(np.array(p.top_eigenvalues) - ref)) <= 0.02
        assert p.next_magnitude < 0.05


def test_sample_seeds_follow_master(default_run):
    assert [p.seed for p in default_run.points] == [derive_seed(DEFAULT_MASTER_SEED, i) for i in range(10)]


def test_experiment_determinism_across_threads():
    a = run_s3_experiment(n=200, num_samples=4, master_seed=5, threads=1)
    b = run_s3_experiment(n=200, num_samples=4, master_seed=5, threads=4)
    assert a == b
    assert a.to_csv() == b.to_csv()


def test_deviation_shrinks_with_n(default_run):
    small = run_s3_experiment(n=120, num_samples=10)
    assert np.mean(small.relative_deviations) > np.mean(default_run.relative_deviations)


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_iid_latents_match_empirical_graphon(seed):
    model = cayley_to_step(s3_example_gamma())
    g = sample(model, 1000, seed)
    spec = graph_spectrum(g)
    c = spec.coefficients(block_signal(g, 0))
    counts = np.bincount(g.latents, minlength=6)
    emp = step_spectrum(StepGraphon(model.P, counts / counts.sum()))
    e0 = np.zeros(6)
    e0[0] = 1
    ce = emp.coefficients(e0)
    r_sample, r_emp = math.hypot(c[1], c[2]), math.hypot(ce[1], ce[2])
    assert abs(r_sample - r_emp) / r_emp < 0.05


def test_experiment_argument_checks():
    with pytest.raises(ValueError):
        run_s3_experiment(n=5)
    with pytest.raises(ValueError):
        run_s3_experiment(num_samples=0)


def test_csv_format():
    res = run_s3_experiment(n=60, num_samples=3, master_seed=1)
    lines = res.to_csv().splitlines()
    assert lines[0] == "sample_id,c3,c2,radius"
    assert [l.split(",")[0] for l in lines[1:]] == ["0", "1", "2", "ref"]
    for line in lines[1:]:
        c3, c2, r = map(float, line.split(",")[1:])
        assert r == pytest.approx(math.hypot(c3, c2), rel=1e-12, abs=1e-300)


def test_svg_wellformed():
    res = run_s3_experiment(n=60, num_samples=3, master_seed=1)
    root = ET.fromstring(res.to_svg())
    ns = "{http://www.w3.org/2000/svg}"
    dots = [c for c in root.iter(ns + "circle") if c.get("fill") == "blue"]
    assert len(dots) == 3
    assert len([p for p in root.iter(ns + "polygon") if p.get("fill") == "red"]) == 1
    assert scatter_svg([], (0.0, 0.0), 0.0).startswith("<svg")


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("GGSP_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("GGSP_THREADS", "zero")
    with pytest.raises(ValueError):
        worker_count()
    monkeypatch.delenv("GGSP_THREADS")
    assert worker_count() >= 1


@pytest.mark.slow
def test_ws_default():
    rep = run_ws_experiment()
    assert len(rep.rows) == 5
    assert rep.rows[0].frequency == 0
    assert abs(rep.rows[0].sample - 0.416) <= 0.05
    assert rep.max_abs_error <= 0.05
    assert rep.to_csv().splitlines()[0] == "rank,frequency,analytic,sample,abs_error"
    assert "max abs error" in rep.table()


def test_ws_zero_frequency_small():
    # d = 0.25: even frequencies vanish in closed form; the sample operator's
    # Rayleigh quotient on the frequency-k eigenfunction should track it
    w = TorusCayleyGraphon(0.25, 0.1)
    g = sample(w, 800, seed=3)
    A = g.adjacency().astype(float) / g.n
    lam = dict(torus_spectrum(w, 3))
    assert lam[2] == pytest.approx(0, abs=1e-15)
    for k in (1, 2, 3):
        for trig in (np.cos, np.sin):
            v = trig(2 * np.pi * k * g.latents)
            rq = v @ A @ v / (v @ v)
            assert abs(rq - lam[k]) < 0.02


def test_ws_tiny_n_completes():
    rep = run_ws_experiment(n=10, seed=1)
    assert len(rep.rows) == 5 and math.isfinite(rep.max_abs_error)


def test_discretization_check():
    rows = torus_discretization_check(TorusCayleyGraphon(0.2, 0.08), m=2000)
    assert len(rows) == 5
    assert max(abs(a - b) for _, a, b in rows) < 0.01
