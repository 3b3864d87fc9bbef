"""Graph and graphon Fourier transforms, eigenspace projections, and the S3 and
Watts-Strogatz convergence experiments."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .graphon import (
    Signal,
    TorusCayleyGraphon,
    cayley_to_step,
    s3_example_gamma,
    torus_spectrum,
)
from .rng import derive_seed
from .sampler import block_signal, sample
from .spectral import (
    DEFAULT_CLUSTER_TOL,
    EigenCluster,
    Spectrum,
    cluster_eigenvalues,
    discretize_torus,
    graph_spectrum,
    project,
    select_top,
    step_spectrum,
    weighted_norm,
)

DEFAULT_MASTER_SEED = 20230917
S3_NUM_NONZERO = 6


@dataclass(frozen=True, eq=False)
class FourierCoefficients:
    coefficients: np.ndarray
    clusters: Optional[list] = None
    projections: Optional[list] = None

    @property
    def projection_norms(self) -> Optional[np.ndarray]:
        if self.projections is None:
            return None
        return np.array([p_norm for _, p_norm in self.projections])


def gft(s: Spectrum, f, clusters: Optional[Sequence[EigenCluster]] = None) -> FourierCoefficients:
    """Scalar coefficients <f, phi_i>, plus projections onto each cluster when given."""
    coeffs = s.coefficients(f)
    projections = None
    if clusters is not None:
        projections = []
        for c in clusters:
            proj = project(s, c, f)
            projections.append((proj, weighted_norm(s, proj.values)))
    return FourierCoefficients(coeffs, list(clusters) if clusters is not None else None, projections)


def igft(s: Spectrum, coeffs) -> Signal:
    c = coeffs.coefficients if isinstance(coeffs, FourierCoefficients) else np.asarray(coeffs, dtype=float)
    if c.shape != (s.size,):
        raise ValueError(f"expected {s.size} coefficients, got shape {c.shape}")
    return Signal(s.eigenvectors @ c, s.space)


def worker_count() -> int:
    env = os.environ.get("GGSP_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"GGSP_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def _ordered_map(fn, items, threads: Optional[int]):
    threads = worker_count() if threads is None else threads
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# --- S3 experiment ----------------------------------------------------------


@dataclass(frozen=True)
class ScatterPoint:
    sample_id: int
    seed: int
    n: int
    c3: float
    c2: float
    radius: float
    top_eigenvalues: tuple  # the S3_NUM_NONZERO selected eigenvalues
    next_magnitude: float  # |7th largest-magnitude eigenvalue|


@dataclass(frozen=True)
class S3Reference:
    eigenvalues: tuple
    c3: float
    c2: float
    radius: float
    projection_radius: float  # same quantity via the cluster projection norm


@dataclass(frozen=True)
class ScatterResult:
    points: tuple
    reference: S3Reference
    n: int
    master_seed: int
    latent_scheme: str

    @property
    def radii(self) -> np.ndarray:
        return np.array([p.radius for p in self.points])

    @property
    def relative_deviations(self) -> np.ndarray:
        return np.abs(self.radii - self.reference.radius) / self.reference.radius

    @property
    def max_relative_deviation(self) -> float:
        return float(self.relative_deviations.max())

    @property
    def radius_relative_std(self) -> float:
        r = self.radii
        return float(r.std() / r.mean()) if len(r) > 1 else 0.0

    @property
    def c2_relative_spread(self) -> float:
        """(max c2 - min c2) / reference radius."""
        c2 = np.array([p.c2 for p in self.points])
        return float((c2.max() - c2.min()) / self.reference.radius)

    def to_csv(self) -> str:
        lines = ["sample_id,c3,c2,radius"]
        for p in self.points:
            lines.append(f"{p.sample_id},{_num(p.c3)},{_num(p.c2)},{_num(p.radius)}")
        ref = self.reference
        lines.append(f"ref,{_num(ref.c3)},{_num(ref.c2)},{_num(ref.radius)}")
        return "\n".join(lines) + "\n"

    def to_svg(self) -> str:
        return scatter_svg([(p.c3, p.c2) for p in self.points], (self.reference.c3, self.reference.c2), self.reference.radius)


def _num(x: float) -> str:
    return format(float(x), ".17g")


def s3_reference(tol: float = DEFAULT_CLUSTER_TOL) -> S3Reference:
    """Red-diamond reference from the 6-block S3 graphon and the block-0 indicator."""
    step = cayley_to_step(s3_example_gamma())
    spec = step_spectrum(step)
    f = np.zeros(step.k)
    f[0] = 1.0
    coeffs = spec.coefficients(f)
    cluster = next(c for c in cluster_eigenvalues(spec, tol) if c.start <= 1 < c.stop)
    proj = project(spec, cluster, f)
    return S3Reference(
        tuple(float(v) for v in spec.eigenvalues),
        float(coeffs[2]),
        float(coeffs[1]),
        math.hypot(coeffs[1], coeffs[2]),
        weighted_norm(spec, proj.values),
    )


def _s3_sample(args) -> ScatterPoint:
    i, seed, n, latents, model = args
    g = sample(model, n, seed, latents=latents)
    spec = graph_spectrum(g)
    f = block_signal(g, 0)
    coeffs = spec.coefficients(f)
    vals = spec.eigenvalues
    top = select_top(vals, S3_NUM_NONZERO)
    by_mag = np.argsort(-np.abs(vals), kind="stable")
    nxt = float(abs(vals[by_mag[S3_NUM_NONZERO]])) if n > S3_NUM_NONZERO else 0.0
    c2, c3 = float(coeffs[1]), float(coeffs[2])
    return ScatterPoint(i, seed, n, c3, c2, math.hypot(c2, c3), tuple(float(v) for v in vals[top]), nxt)


def run_s3_experiment(
    n: int = 1000,
    num_samples: int = 10,
    master_seed: int = DEFAULT_MASTER_SEED,
    latents: str = "balanced",
    threads: Optional[int] = None,
) -> ScatterResult:
    """Sample the S3 Cayley graphon ``num_samples`` times and record the 2nd/3rd
    graph Fourier coefficients of the block-0 indicator for each sample.

    Sample ``i`` uses seed ``derive_seed(master_seed, i)``.
    """
    if n < 10:
        raise ValueError("n must be >= 10")
    if num_samples < 1:
        raise ValueError("num_samples must be >= 1")
    model = cayley_to_step(s3_example_gamma())
    jobs = [(i, derive_seed(master_seed, i), n, latents, model) for i in range(num_samples)]
    points = _ordered_map(_s3_sample, jobs, threads)
    return ScatterResult(tuple(points), s3_reference(), n, master_seed, latents)


# --- Watts-Strogatz experiment ------------------------------------------------


@dataclass(frozen=True)
class WSRow:
    rank: int
    frequency: int
    analytic: float
    sample: float

    @property
    def error(self) -> float:
        return abs(self.sample - self.analytic)


@dataclass(frozen=True)
class WSReport:
    n: int
    d: float
    p: float
    seed: int
    k_max: int
    rows: tuple

    @property
    def max_abs_error(self) -> float:
        return max((r.error for r in self.rows), default=0.0)

    def table(self) -> str:
        lines = [f"Watts-Strogatz d={self.d} p={self.p} n={self.n} seed={self.seed}",
                 f"{'rank':>4} {'freq':>4} {'analytic':>12} {'sample':>12} {'abs err':>10}"]
        for r in self.rows:
            lines.append(f"{r.rank:>4} {r.frequency:>4} {r.analytic:>12.6f} {r.sample:>12.6f} {r.error:>10.2e}")
        lines.append(f"max abs error: {self.max_abs_error:.3e}")
        return "\n".join(lines)

    def to_csv(self) -> str:
        lines = ["rank,frequency,analytic,sample,abs_error"]
        for r in self.rows:
            lines.append(f"{r.rank},{r.frequency},{_num(r.analytic)},{_num(r.sample)},{_num(r.error)}")
        return "\n".join(lines) + "\n"


def _match_by_magnitude(analytic: Sequence[tuple], sample_vals: np.ndarray, count: int):
    """Pair the ``count`` largest-magnitude analytic and sample eigenvalues, each
    list ordered by signed value descending."""
    freqs = np.array([k for k, _ in analytic])
    vals = np.array([v for _, v in analytic])
    a_idx = select_top(vals, count)
    s_idx = select_top(sample_vals, count)
    return [(int(freqs[a]), float(vals[a]), float(sample_vals[s])) for a, s in zip(a_idx, s_idx)]


def run_ws_experiment(n: int = 2000, d: float = 0.2, p: float = 0.08, seed: int = DEFAULT_MASTER_SEED,
                      k_max: int = 2) -> WSReport:
    """Compare the top 2*k_max + 1 sample shift eigenvalues with the analytic torus spectrum."""
    w = TorusCayleyGraphon(d, p)
    g = sample(w, n, seed)
    spec = graph_spectrum(g)
    count = min(2 * k_max + 1, n)
    analytic = torus_spectrum(w, k_max)
    rows = tuple(
        WSRow(i, k, a, s) for i, (k, a, s) in enumerate(_match_by_magnitude(analytic, spec.eigenvalues, count))
    )
    return WSReport(n, d, p, int(seed), k_max, rows)


def torus_discretization_check(w: TorusCayleyGraphon, m: int = 2000, k_max: int = 2) -> list:
    """(frequency, analytic, discretized) for the top 2*k_max + 1 eigenvalues of the m-point discretization."""
    vals = np.linalg.eigvalsh(discretize_torus(w, m))
    return _match_by_magnitude(torus_spectrum(w, k_max), vals, 2 * k_max + 1)


# --- SVG ----------------------------------------------------------------------

SVG_SIZE = 600
_MARGIN = 60


def scatter_svg(points, ref_point, ref_radius: float) -> str:
    """Blue sample dots, red reference diamond and the reference circle, on a fixed 600x600 canvas."""
    coords = [abs(v) for pt in list(points) + [ref_point] for v in pt]
    half = 1.3 * ref_radius
    if coords and max(coords) > half:
        half = 1.05 * max(coords)
    if half <= 0:
        half = 1.0
    span = SVG_SIZE - 2 * _MARGIN
    scale = span / (2 * half)
    cx = cy = SVG_SIZE / 2

    def px(x, y):
        return cx + x * scale, cy - y * scale

    f = lambda v: f"{v:.3f}"
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">',
        f'<rect width="{SVG_SIZE}" height="{SVG_SIZE}" fill="white"/>',
        f'<line x1="{_MARGIN}" y1="{f(cy)}" x2="{SVG_SIZE - _MARGIN}" y2="{f(cy)}" stroke="black" stroke-width="1"/>',
        f'<line x1="{f(cx)}" y1="{_MARGIN}" x2="{f(cx)}" y2="{SVG_SIZE - _MARGIN}" stroke="black" stroke-width="1"/>',
        f'<text x="{SVG_SIZE - _MARGIN}" y="{f(cy + 24)}" font-size="16" text-anchor="end">f̂(φ₃)</text>',
        f'<text x="{f(cx + 8)}" y="{_MARGIN - 12}" font-size="16">f̂(φ₂)</text>',
        f'<circle cx="{f(cx)}" cy="{f(cy)}" r="{f(ref_radius * scale)}" fill="none" stroke="gray" stroke-dasharray="4 3"/>',
    ]
    for x, y in points:
        X, Y = px(x, y)
        out.append(f'<circle cx="{f(X)}" cy="{f(Y)}" r="5" fill="blue"/>')
    X, Y = px(*ref_point)
    r = 8
    out.append(
        f'<polygon points="{f(X)},{f(Y - r)} {f(X + r)},{f(Y)} {f(X)},{f(Y + r)} {f(X - r)},{f(Y)}" fill="red"/>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"
