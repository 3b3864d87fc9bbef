"""Command-line interface.

    ggsp sample --model '{"type":"step","P":[[0.5]],"measures":[1.0]}' --n 100 --seed 1 --out g.json
    ggsp spectrum --graph g.json
    ggsp gft --graph g.json --block 0
    ggsp experiment s3 --out-dir out/
    ggsp experiment ws --n 2000
    ggsp frames s4 --out frames.json

Exit codes: 0 success, 1 runtime or verification failure, 2 usage/config error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import gsp
from .graphon import TorusCayleyGraphon, as_step, model_from_json, torus_spectrum
from .reps import verify_frames
from .sampler import LATENT_SCHEMES, SampledGraph, block_signal, sample
from .spectral import DEFAULT_CLUSTER_TOL, cluster_eigenvalues, graph_spectrum, step_spectrum


class ConfigError(Exception):
    """Bad flags or config contents (exit code 2)."""


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _load_json_arg(text: str, what: str):
    """Inline JSON (starting with '{' or '[') or a path to a JSON file."""
    stripped = text.lstrip()
    try:
        if stripped.startswith(("{", "[")):
            return json.loads(text)
        try:
            raw = Path(text).read_text()
        except OSError as e:
            raise ConfigError(f"cannot read {what} file {text!r}: {e.strerror}") from None
        return json.loads(raw)
    except json.JSONDecodeError as e:
        raise ConfigError(f"malformed {what} JSON: {e.msg} at line {e.lineno} column {e.colno}") from None


def _load_model(text: str):
    spec = _load_json_arg(text, "model")
    try:
        return model_from_json(spec)
    except (ValueError, TypeError) as e:
        raise ConfigError(f"invalid model: {e}") from None


def _load_graph(path: str) -> SampledGraph:
    obj = _load_json_arg(path, "graph")
    try:
        return SampledGraph.from_json(obj)
    except (KeyError, ValueError, TypeError) as e:
        raise ConfigError(f"invalid graph file: {e}") from None


def _write(path, text: str):
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def _num(x) -> str:
    return format(float(x), ".17g")


# --- commands -----------------------------------------------------------------


def cmd_sample(args) -> int:
    model = _load_model(args.model)
    if args.n < 1:
        raise ConfigError("--n must be >= 1")
    try:
        g = sample(model, args.n, args.seed, latents=args.latents)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    _write(args.out, json.dumps(g.to_json(), separators=(",", ":")) + "\n")
    print(f"edges: {g.num_edges}", file=sys.stderr if args.out in (None, "-") else sys.stdout)
    print(f"density: {g.density:.6f}", file=sys.stderr if args.out in (None, "-") else sys.stdout)
    return 0


def _spectrum_from_args(args):
    """Return ``(spectrum, model)``; spectrum is None for torus models."""
    if args.graph:
        return graph_spectrum(_load_graph(args.graph)), None
    model = _load_model(args.model)
    if isinstance(model, TorusCayleyGraphon):
        return None, model
    return step_spectrum(as_step(model)), model


def cmd_spectrum(args) -> int:
    spec, model = _spectrum_from_args(args)
    if spec is None:
        lines = ["rank,frequency,eigenvalue"]
        for rank, (k, lam) in enumerate(torus_spectrum(model, args.k_max)):
            lines.append(f"{rank},{k},{_num(lam)}")
        _write(args.out, "\n".join(lines) + "\n")
        return 0
    lines = ["rank,eigenvalue"] + [f"{i},{_num(v)}" for i, v in enumerate(spec.eigenvalues)]
    _write(args.out, "\n".join(lines) + "\n")
    if args.vectors:
        _write(args.vectors, json.dumps(spec.eigenvectors.tolist()) + "\n")
    return 0


def _read_signal(text: str, length: int) -> np.ndarray:
    vals = _load_json_arg(text, "signal")
    try:
        f = np.asarray(vals, dtype=float)
    except (TypeError, ValueError):
        raise ConfigError("signal must be a JSON list of numbers") from None
    if f.shape != (length,):
        raise ConfigError(f"signal has length {f.size}, expected {length}")
    return f


def cmd_gft(args) -> int:
    spec, _ = _spectrum_from_args(args)
    if spec is None:
        raise ConfigError("gft needs a graph or a step/cayley model")
    n = spec.eigenvectors.shape[0]
    if args.block is not None and args.signal is not None:
        raise ConfigError("give at most one of --block and --signal")
    if args.signal is not None:
        f = _read_signal(args.signal, n)
    else:
        block = 0 if args.block is None else args.block
        if args.graph:
            try:
                f = block_signal(_load_graph(args.graph), block).values
            except (TypeError, ValueError) as e:
                raise ConfigError(str(e)) from None
        else:
            if not 0 <= block < n:
                raise ConfigError(f"block {block} out of range")
            f = np.zeros(n)
            f[block] = 1.0
    clusters = cluster_eigenvalues(spec, args.tol) if args.model else None
    coeffs = gsp.gft(spec, f, clusters)
    lines = ["index,eigenvalue,coefficient"]
    for i, (lam, c) in enumerate(zip(spec.eigenvalues, coeffs.coefficients)):
        lines.append(f"{i},{_num(lam)},{_num(c)}")
    if clusters is not None:
        lines.append("")
        lines.append("cluster_start,cluster_stop,eigenvalue,projection_norm")
        for c, (_, norm) in zip(clusters, coeffs.projections):
            lines.append(f"{c.start},{c.stop},{_num(c.representative)},{_num(norm)}")
    _write(args.out, "\n".join(lines) + "\n")
    return 0


def _experiment_config(args) -> dict:
    cfg = {"n": 1000, "samples": 10, "seed": gsp.DEFAULT_MASTER_SEED, "out_dir": ".",
           "latents": "balanced", "radius_tol": 0.1}
    if args.config:
        loaded = _load_json_arg(args.config, "config")
        if not isinstance(loaded, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(loaded) - set(cfg)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        cfg.update(loaded)
    for key in cfg:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    if not isinstance(cfg["seed"], int) or not 0 <= cfg["seed"] < 2**64:
        raise ConfigError("seed must be an unsigned 64-bit integer")
    if cfg["latents"] not in LATENT_SCHEMES:
        raise ConfigError(f"latents must be one of {LATENT_SCHEMES}")
    if int(cfg["n"]) < 10 or int(cfg["samples"]) < 1:
        raise ConfigError("need n >= 10 and samples >= 1")
    return cfg


def cmd_experiment_s3(args) -> int:
    cfg = _experiment_config(args)
    result = gsp.run_s3_experiment(int(cfg["n"]), int(cfg["samples"]), cfg["seed"], latents=cfg["latents"])
    out = Path(cfg["out_dir"])
    _write(out / "scatter.csv", result.to_csv())
    _write(out / "scatter.svg", result.to_svg())
    ref = result.reference
    print(f"n={result.n} samples={len(result.points)} master_seed={result.master_seed} latents={result.latent_scheme}")
    print(f"reference point (c3, c2) = ({ref.c3:.6f}, {ref.c2:.6f}), reference radius r* = {ref.radius:.6f}")
    for p in result.points:
        print(f"  sample {p.sample_id}: c3={p.c3:+.6f} c2={p.c2:+.6f} radius={p.radius:.6f}")
    within = result.max_relative_deviation <= cfg["radius_tol"]
    print(f"max relative radius deviation: {result.max_relative_deviation:.4f} "
          f"({'within' if within else 'outside'} {cfg['radius_tol']:.0%})")
    print(f"c2 spread / r*: {result.c2_relative_spread:.4f}")
    return 0


def cmd_experiment_ws(args) -> int:
    try:
        report = gsp.run_ws_experiment(args.n, args.d, args.p, args.seed, args.k_max)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    print(report.table())
    if args.out_dir:
        _write(Path(args.out_dir) / "ws.csv", report.to_csv())
    return 0


def cmd_frames_s4(args) -> int:
    report = verify_frames(4)
    print(report.text())
    if args.out:
        _write(args.out, json.dumps(report.to_json()) + "\n")
    if not report.ok:
        print("verification FAILED", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ggsp", description="Graphon signal processing with group symmetries.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample a graph G(n, w) and write it as JSON")
    p.add_argument("--model", required=True, help="graphon spec: inline JSON or a JSON file path")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--latents", choices=LATENT_SCHEMES, default="iid")
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_sample)

    for name, func, help_text in (("spectrum", cmd_spectrum, "eigenvalues of a graph shift or graphon operator"),
                                  ("gft", cmd_gft, "Fourier coefficients of a signal")):
        p = sub.add_parser(name, help=help_text)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--graph", help="graph JSON written by 'sample'")
        src.add_argument("--model", help="graphon spec: inline JSON or a JSON file path")
        p.add_argument("--out", help="CSV output file (default: stdout)")
        p.set_defaults(func=func)
        if name == "spectrum":
            p.add_argument("--vectors", help="also write eigenvectors as a JSON matrix to this file")
            p.add_argument("--k-max", type=int, default=5, help="frequencies to report for torus models")
        else:
            p.add_argument("--block", type=int, help="use the indicator of this latent block as the signal")
            p.add_argument("--signal", help="signal values: inline JSON list or JSON file")
            p.add_argument("--tol", type=float, default=DEFAULT_CLUSTER_TOL, help="eigenvalue clustering tolerance (models only)")

    exp = sub.add_parser("experiment", help="convergence experiments").add_subparsers(dest="experiment", required=True)
    p = exp.add_parser("s3", help="S3 Cayley graphon scatter of Fourier coefficients 2 and 3")
    p.add_argument("--config", help="JSON config with keys n, samples, seed, out_dir, latents, radius_tol")
    p.add_argument("--n", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=_seed)
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--latents", choices=LATENT_SCHEMES)
    p.add_argument("--radius-tol", dest="radius_tol", type=float)
    p.set_defaults(func=cmd_experiment_s3)

    p = exp.add_parser("ws", help="Watts-Strogatz torus graphon spectrum check")
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--d", type=float, default=0.2)
    p.add_argument("--p", type=float, default=0.08)
    p.add_argument("--seed", type=_seed, default=gsp.DEFAULT_MASTER_SEED)
    p.add_argument("--k-max", type=int, default=2)
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_experiment_ws)

    frames = sub.add_parser("frames", help="frame construction").add_subparsers(dest="group", required=True)
    p = frames.add_parser("s4", help="Parseval frame for the ranking Cayley graph of S4")
    p.add_argument("--out", help="frames JSON output file")
    p.set_defaults(func=cmd_frames_s4)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
