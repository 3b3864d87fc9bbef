"""Random graphs G(n, w) from graphon models with replayable seeding.

Stream layout for ``sample(model, n, seed)``:

* latents come from ``Xoshiro256(derive_seed(seed, 0))``, one uniform per vertex
  (``latents="iid"``), or, for ``latents="balanced"``, the same uniforms are
  used as sort keys that shuffle a fixed, as-equal-as-possible block pattern;
* row ``i`` of the upper triangle uses its own stream
  ``Xoshiro256(derive_seed(derive_seed(seed, 1), i))``; its ``j``-th draw decides
  edge ``{i, j}`` for ``j > i`` (draws with ``j <= i`` are discarded).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .graphon import (
    CayleyFunction,
    GraphonModel,
    Signal,
    StepGraphon,
    TorusCayleyGraphon,
    as_step,
    model_from_json,
)
from .rng import MASK64, VectorXoshiro256, Xoshiro256, derive_seed

DENSE_LIMIT = 4096
LATENT_SCHEMES = ("iid", "balanced")


@dataclass(frozen=True, eq=False)
class SampledGraph:
    """A sampled graph with its latent positions.

    ``latents`` holds block indices (int) for step and Cayley models and
    positions in [0, 1) for the torus model. Graphs with ``n <= DENSE_LIMIT``
    keep a dense boolean adjacency matrix; larger ones keep only the sorted edge
    list.
    """

    n: int
    latents: np.ndarray
    seed: int
    model: GraphonModel
    latent_scheme: str = "iid"
    dense: Optional[np.ndarray] = field(default=None, repr=False)
    edge_array: Optional[np.ndarray] = field(default=None, repr=False)

    def adjacency(self) -> np.ndarray:
        if self.dense is not None:
            return self.dense
        A = np.zeros((self.n, self.n), dtype=bool)
        e = self.edge_array
        A[e[:, 0], e[:, 1]] = True
        A[e[:, 1], e[:, 0]] = True
        return A

    def edges(self) -> np.ndarray:
        """Edges as an (m, 2) array with i < j, sorted lexicographically."""
        if self.edge_array is not None:
            return self.edge_array
        i, j = np.nonzero(np.triu(self.dense, k=1))
        return np.stack([i, j], axis=1)

    @property
    def num_edges(self) -> int:
        if self.edge_array is not None:
            return int(self.edge_array.shape[0])
        return int(np.count_nonzero(self.dense)) // 2

    @property
    def density(self) -> float:
        pairs = self.n * (self.n - 1) // 2
        return self.num_edges / pairs if pairs else 0.0

    def to_json(self) -> dict:
        if isinstance(self.model, TorusCayleyGraphon):
            latents = [float(x) for x in self.latents]
        else:
            latents = [int(x) for x in self.latents]
        out = {
            "n": self.n,
            "seed": self.seed,
            "model": self.model.to_json(),
            "latents": latents,
            "edges": self.edges().tolist(),
        }
        if self.latent_scheme != "iid":
            out["latent_scheme"] = self.latent_scheme
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "SampledGraph":
        model = model_from_json(obj["model"])
        n = int(obj["n"])
        if isinstance(model, TorusCayleyGraphon):
            latents = np.array(obj["latents"], dtype=float)
        else:
            latents = np.array(obj["latents"], dtype=np.int64)
        if latents.shape != (n,):
            raise ValueError("latents length must equal n")
        scheme = obj.get("latent_scheme", "iid")
        edges = np.array(obj["edges"], dtype=np.int64).reshape(-1, 2)
        if edges.size and (edges.min() < 0 or edges.max() >= n or np.any(edges[:, 0] >= edges[:, 1])):
            raise ValueError("edges must satisfy 0 <= i < j < n")
        if n <= DENSE_LIMIT:
            A = np.zeros((n, n), dtype=bool)
            A[edges[:, 0], edges[:, 1]] = True
            A[edges[:, 1], edges[:, 0]] = True
            return cls(n, latents, int(obj["seed"]), model, scheme, dense=A)
        order = np.lexsort((edges[:, 1], edges[:, 0]))
        return cls(n, latents, int(obj["seed"]), model, scheme, edge_array=edges[order])


def balanced_counts(measures, n: int) -> np.ndarray:
    """Block sizes summing to n, by largest-remainder rounding of n * measures."""
    target = n * np.asarray(measures, dtype=float)
    counts = np.floor(target).astype(np.int64)
    short = n - int(counts.sum())
    if short > 0:
        counts[np.argsort(-(target - counts), kind="stable")[:short]] += 1
    return counts


def _draw_latents(model: GraphonModel, n: int, seed: int, scheme: str) -> np.ndarray:
    u = Xoshiro256(derive_seed(seed, 0)).randoms(n)
    if isinstance(model, TorusCayleyGraphon):
        if scheme != "iid":
            raise ValueError("balanced latents are only defined for step and Cayley graphons")
        return u
    step = as_step(model)
    if scheme == "balanced":
        pattern = np.repeat(np.arange(step.k), balanced_counts(step.block_measures, n))
        latents = np.empty(n, dtype=np.int64)
        latents[np.argsort(u, kind="stable")] = pattern
        return latents
    cum = np.cumsum(step.block_measures)
    return np.minimum(np.searchsorted(cum, u, side="right"), step.k - 1).astype(np.int64)


def _column_probs(model, latents, t):
    if isinstance(model, TorusCayleyGraphon):
        return model(latents[:t], latents[t])
    return model.P[latents[:t], latents[t]]


def sample(model, n: int, seed: int, latents: str = "iid") -> SampledGraph:
    """Draw G(n, w): latents, then each pair {i, j} independently with probability w(x_i, x_j).

    ``latents="iid"`` draws every latent uniformly from the model's space.
    ``latents="balanced"`` (step and Cayley models only) fixes the block sizes
    to the rounded expected sizes and assigns vertices to blocks in random order.
    """
    if not isinstance(model, (StepGraphon, CayleyFunction, TorusCayleyGraphon)):
        model = model_from_json(model)
    n = int(n)
    if n < 1:
        raise ValueError("n must be >= 1")
    if latents not in LATENT_SCHEMES:
        raise ValueError(f"unknown latent scheme {latents!r}; expected one of {LATENT_SCHEMES}")
    scheme = latents
    seed = int(seed) & MASK64
    latents = _draw_latents(model, n, seed, scheme)
    prob_model = model if isinstance(model, TorusCayleyGraphon) else as_step(model)

    edge_root = derive_seed(seed, 1)
    gen = VectorXoshiro256([derive_seed(edge_root, i) for i in range(n)])
    dense = np.zeros((n, n), dtype=bool) if n <= DENSE_LIMIT else None
    chunks = []
    for t in range(n):
        u = gen.random()
        if t == 0:
            continue
        hit = u[:t] < _column_probs(prob_model, latents, t)
        if dense is not None:
            dense[:t, t] = hit
        else:
            rows = np.nonzero(hit)[0]
            chunks.append(np.stack([rows, np.full(rows.shape, t)], axis=1))
    if dense is not None:
        dense |= dense.T
        return SampledGraph(n, latents, seed, model, scheme, dense=dense)
    edges = np.concatenate(chunks) if chunks else np.zeros((0, 2), dtype=np.int64)
    order = np.lexsort((edges[:, 1], edges[:, 0]))
    return SampledGraph(n, latents, seed, model, scheme, edge_array=edges[order].astype(np.int64))


def block_signal(g: SampledGraph, block: int) -> Signal:
    """Indicator of the vertices whose latent block is ``block``."""
    if isinstance(g.model, TorusCayleyGraphon):
        raise TypeError("block_signal needs a graph sampled from a step or Cayley graphon")
    k = as_step(g.model).k
    if not 0 <= block < k:
        raise ValueError(f"block {block} out of range 0..{k - 1}")
    return Signal((g.latents == block).astype(float), "vertices")

