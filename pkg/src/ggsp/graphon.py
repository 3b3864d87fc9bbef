"""Graphon models: step graphons (SBMs), Cayley graphons on finite groups, and the
Watts-Strogatz graphon on the circle, plus their JSON model specs."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .groups import FiniteGroup, TorusPoint, circular_distance, parse_cycles, parse_group_name

SPACES = ("vertices", "blocks", "group")


@dataclass(frozen=True, eq=False)
class StepGraphon:
    P: np.ndarray
    block_measures: np.ndarray

    def __post_init__(self):
        P = np.array(self.P, dtype=float)
        mu = np.array(self.block_measures, dtype=float)
        if P.ndim != 2 or P.shape[0] != P.shape[1] or P.shape[0] == 0:
            raise ValueError(f"P must be a nonempty square matrix, got shape {P.shape}")
        if mu.shape != (P.shape[0],):
            raise ValueError("block_measures length must match P")
        if not np.all(np.isfinite(P)) or P.min() < 0 or P.max() > 1:
            raise ValueError("P entries must lie in [0, 1]")
        if not np.array_equal(P, P.T):
            raise ValueError("P must be symmetric")
        if np.any(mu <= 0) or abs(math.fsum(mu) - 1.0) > 1e-12:
            raise ValueError("block_measures must be positive and sum to 1")
        P.setflags(write=False)
        mu.setflags(write=False)
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "block_measures", mu)

    @classmethod
    def uniform(cls, P) -> "StepGraphon":
        k = np.asarray(P).shape[0]
        return cls(P, np.full(k, 1.0 / k))

    @property
    def k(self) -> int:
        return self.P.shape[0]

    def __call__(self, a, b):
        return self.P[a, b]

    def to_json(self) -> dict:
        return {"type": "step", "P": self.P.tolist(), "measures": self.block_measures.tolist()}


@dataclass(frozen=True, eq=False)
class CayleyFunction:
    """Cayley function gamma on a finite group; values indexed like ``group.elements``."""

    group: FiniteGroup
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.shape != (self.group.order,):
            raise ValueError(f"need {self.group.order} values, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)) or vals.min() < 0 or vals.max() > 1:
            raise ValueError("Cayley function values must lie in [0, 1]")
        if not np.array_equal(vals, vals[self.group.inv_table]):
            raise ValueError("Cayley function must satisfy gamma(x) == gamma(x^-1)")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_cycle_map(cls, group: FiniteGroup, mapping: dict) -> "CayleyFunction":
        """Build gamma from ``{"(1 2)": 0.3, ...}``; unlisted elements get 0."""
        n = group.elements[0].degree
        vals = np.zeros(group.order)
        for key, v in mapping.items():
            idx = group.index(parse_cycles(n, key))
            vals[idx] = float(v)
        return cls(group, vals)

    def __call__(self, x: int, y: int) -> float:
        return float(self.values[self.group.mul(x, self.group.inv(y))])

    def to_json(self) -> dict:
        gamma = {
            self.group.elements[i].cycle_string(): float(v)
            for i, v in enumerate(self.values)
            if v != 0
        }
        return {"type": "cayley", "group": self.group.name, "gamma": gamma}


@dataclass(frozen=True)
class TorusCayleyGraphon:
    """Watts-Strogatz graphon: 1 - p within circular distance d, p elsewhere."""

    d: float
    p: float

    def __post_init__(self):
        if not 0 < self.d < 0.5:
            raise ValueError(f"d must lie in (0, 1/2), got {self.d}")
        if not 0 < self.p < 0.5:
            raise ValueError(f"p must lie in (0, 1/2), got {self.p}")

    def gamma(self, t):
        """Cayley function on the circle; elementwise on arrays."""
        t = np.asarray(t, dtype=float) % 1.0
        return np.where(np.minimum(t, 1.0 - t) <= self.d, 1.0 - self.p, self.p)

    def __call__(self, x, y):
        dist = circular_distance(x, y)
        return np.where(dist <= self.d, 1.0 - self.p, self.p)

    def to_json(self) -> dict:
        return {"type": "torus", "d": self.d, "p": self.p}


GraphonModel = Union[StepGraphon, CayleyFunction, TorusCayleyGraphon]


@dataclass(frozen=True, eq=False)
class Signal:
    values: np.ndarray
    space: str = "vertices"

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.ndim != 1:
            raise ValueError("signal values must be one-dimensional")
        if not np.all(np.isfinite(vals)):
            raise ValueError("signal values must be finite")
        if self.space not in SPACES:
            raise ValueError(f"unknown signal space {self.space!r}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return self.values.shape[0]


def eval_torus(w: TorusCayleyGraphon, x: TorusPoint, y: TorusPoint) -> float:
    return float(w(x.value, y.value))


def cayley_to_step(gamma: CayleyFunction) -> StepGraphon:
    """Block matrix P[i, j] = gamma(g_i g_j^-1) with equal block measures."""
    G = gamma.group
    # column j of mul_table[:, inv[j]] is the index of g_i o g_j^-1
    idx = G.mul_table[:, G.inv_table]
    P = gamma.values[idx]
    return StepGraphon(P, np.full(G.order, 1.0 / G.order))


def step_operator_matrix(w: StepGraphon) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(M, S)`` with ``M = P D`` and ``S = D^1/2 P D^1/2``, ``D = diag(measures)``.

    ``M`` is the integral operator restricted to block-constant functions; ``S``
    is its symmetric similarity transform. An eigenvector ``v`` of ``S`` gives
    the eigenfunction ``D^-1/2 v`` with value ``(D^-1/2 v)[i]`` on block ``i``.
    """
    mu = w.block_measures
    M = w.P * mu[None, :]
    r = np.sqrt(mu)
    S = r[:, None] * w.P * r[None, :]
    S = 0.5 * (S + S.T)  # exact symmetry despite rounding in the products
    return M, S


def torus_spectrum(w: TorusCayleyGraphon, k_max: int) -> list[tuple[int, float]]:
    """Analytic eigenvalues of the convolution operator, frequency by frequency.

    Frequency 0 appears once; each ``k >= 1`` appears twice (cosine and sine
    eigenfunctions).
    """
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    d, p = w.d, w.p
    out = [(0, 2 * d * (1 - p) + (1 - 2 * d) * p)]
    for k in range(1, k_max + 1):
        lam = (1 - 2 * p) * math.sin(2 * math.pi * k * d) / (math.pi * k)
        out.extend([(k, lam), (k, lam)])
    return out


# canonical S3 Cayley function: identity, (1 2), (1 3)
S3_GAMMA = {"(1)": 0.6, "(1 2)": 0.3, "(1 3)": 0.1}


def s3_example_gamma() -> CayleyFunction:
    return CayleyFunction.from_cycle_map(parse_group_name("S3"), S3_GAMMA)


def model_from_json(spec: Union[str, dict]) -> GraphonModel:
    """Parse a graphon spec (dict or JSON text) into a model object."""
    if isinstance(spec, str):
        spec = json.loads(spec)
    if not isinstance(spec, dict) or "type" not in spec:
        raise ValueError("graphon spec must be an object with a 'type' field")
    kind = spec["type"]
    try:
        if kind == "step":
            P = spec["P"]
            measures = spec.get("measures")
            if measures is None:
                return StepGraphon.uniform(P)
            return StepGraphon(P, measures)
        if kind == "cayley":
            group = parse_group_name(spec["group"])
            return CayleyFunction.from_cycle_map(group, spec["gamma"])
        if kind == "torus":
            return TorusCayleyGraphon(float(spec["d"]), float(spec["p"]))
    except KeyError as e:
        raise ValueError(f"graphon spec of type {kind!r} is missing field {e}") from None
    raise ValueError(f"unknown graphon type {kind!r}")


def as_step(model: GraphonModel) -> StepGraphon:
    if isinstance(model, StepGraphon):
        return model
    if isinstance(model, CayleyFunction):
        return cayley_to_step(model)
    raise TypeError(f"{type(model).__name__} is not a step graphon")
