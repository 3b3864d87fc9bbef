"""Symmetric eigendecomposition, eigenvalue clustering and eigenspace projections.

Eigenvectors are returned orthonormal under a weighted inner product
``<f, g> = sum_i w_i f_i g_i``: ``w = 1/n`` for graphs, block measures for step
graphons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .graphon import Signal, TorusCayleyGraphon

JACOBI_MAX_SWEEPS = 100
AUTO_JACOBI_LIMIT = 64
DEFAULT_CLUSTER_TOL = 1e-9


class EigenSolverError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns, orthonormal under `weight`
    weight: np.ndarray
    space: str = "vertices"

    @property
    def size(self) -> int:
        return self.eigenvalues.shape[0]

    def inner(self, f, g) -> float:
        return float(np.sum(self.weight * np.asarray(f) * np.asarray(g)))

    def coefficients(self, f) -> np.ndarray:
        """<f, phi_i> for every eigenvector."""
        f = _values(f)
        if f.shape[0] != self.eigenvectors.shape[0]:
            raise ValueError(f"signal length {f.shape[0]} does not match spectrum dimension {self.eigenvectors.shape[0]}")
        return self.eigenvectors.T @ (self.weight * f)

    def gram(self) -> np.ndarray:
        V = self.eigenvectors
        return V.T @ (self.weight[:, None] * V)


@dataclass(frozen=True)
class EigenCluster:
    start: int
    stop: int
    representative: float
    tolerance: float

    @property
    def indices(self) -> range:
        return range(self.start, self.stop)

    def __len__(self):
        return self.stop - self.start


def _values(f) -> np.ndarray:
    if isinstance(f, Signal):
        return f.values
    return np.asarray(f, dtype=float)


def _weight_vector(weight, n: int) -> np.ndarray:
    w = np.asarray(weight, dtype=float)
    if w.ndim == 0:
        w = np.full(n, float(w))
    if w.shape != (n,) or np.any(w <= 0) or not np.all(np.isfinite(w)):
        raise ValueError("inner-product weight must be a positive scalar or length-n vector")
    return w


def _off_norm(A: np.ndarray) -> float:
    off = A - np.diag(np.diag(A))
    return float(np.linalg.norm(off))


def jacobi_eigh(M: np.ndarray, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Cyclic Jacobi eigenvalue iteration for a real symmetric matrix.

    Returns ``(eigenvalues, V)`` unsorted, with ``M @ V ~= V * eigenvalues``.
    Raises ``EigenSolverError`` if the off-diagonal mass does not fall below
    ``1e-12 * ||M||_F`` within ``max_sweeps`` sweeps.
    """
    A = np.array(M, dtype=float)
    n = A.shape[0]
    V = np.eye(n)
    scale = np.linalg.norm(A)
    threshold = 1e-12 * scale
    for _ in range(max_sweeps):
        off = _off_norm(A)
        if off <= threshold:
            return np.diag(A).copy(), V
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                cp, cq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
                rp, rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                A[p, q] = A[q, p] = 0.0
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    off = _off_norm(A)
    if off <= threshold:
        return np.diag(A).copy(), V
    raise EigenSolverError(f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal norm {off:.3e})")


def fix_signs(U: np.ndarray) -> np.ndarray:
    """Flip columns so the largest-magnitude entry is positive (lowest index wins ties)."""
    U = U.copy()
    mags = np.abs(U)
    for col in range(U.shape[1]):
        m = mags[:, col]
        # entries within rounding of the maximum count as tied
        top = np.nonzero(m >= m.max() * (1 - 1e-9))[0][0]
        if U[top, col] < 0:
            U[:, col] = -U[:, col]
    return U


def eig_sym(M, weight=1.0, method: str = "auto", space: str = "vertices") -> Spectrum:
    """Full eigendecomposition of a symmetric matrix, eigenvalues descending.

    ``method`` is ``"jacobi"``, ``"lapack"`` or ``"auto"`` (Jacobi up to
    ``AUTO_JACOBI_LIMIT`` rows). Eigenvectors ``phi`` are returned orthonormal
    under ``weight``: ``phi = u / sqrt(weight)`` for unit eigenvectors ``u``
    of ``M``.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    n = M.shape[0]
    norm = float(np.max(np.abs(M))) if n else 0.0
    if np.max(np.abs(M - M.T), initial=0.0) > 1e-12 * max(norm, 1.0):
        raise ValueError("matrix is not symmetric")
    w = _weight_vector(weight, n)
    if method == "auto":
        method = "jacobi" if n <= AUTO_JACOBI_LIMIT else "lapack"
    if method == "jacobi":
        vals, U = jacobi_eigh(M)
    elif method == "lapack":
        vals, U = np.linalg.eigh(M)
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    order = np.argsort(-vals, kind="stable")
    vals = vals[order]
    U = fix_signs(U[:, order])

    spec_norm = float(np.max(np.abs(vals), initial=0.0))
    resid = np.linalg.norm(M @ U - U * vals, axis=0)
    limit = 1e-9 * max(spec_norm, np.finfo(float).tiny)
    if np.any(resid > limit):
        raise EigenSolverError(f"eigenpair residual {resid.max():.3e} exceeds {limit:.3e}")
    phi = U / np.sqrt(w)[:, None]
    return Spectrum(vals, phi, w, space)


def shift_operator(g) -> np.ndarray:
    """Normalized adjacency A / n."""
    return g.adjacency().astype(float) / g.n


def graph_spectrum(g, method: str = "auto") -> Spectrum:
    return eig_sym(shift_operator(g), 1.0 / g.n, method=method, space="vertices")


def step_spectrum(w, method: str = "auto") -> Spectrum:
    """Spectrum of a step graphon operator on block-constant functions."""
    from .graphon import step_operator_matrix

    _, S = step_operator_matrix(w)
    return eig_sym(S, w.block_measures, method=method, space="blocks")


def cluster_eigenvalues(s: Union[Spectrum, Sequence[float]], tol: float = DEFAULT_CLUSTER_TOL) -> list[EigenCluster]:
    """Greedy left-to-right grouping of descending eigenvalues.

    A value joins the current cluster iff it lies within ``tol`` of the
    cluster's current minimum (its last member).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    vals = np.asarray(s.eigenvalues if isinstance(s, Spectrum) else s, dtype=float)
    clusters = []
    start = 0
    for i in range(1, vals.shape[0] + 1):
        if i == vals.shape[0] or vals[i - 1] - vals[i] > tol:
            clusters.append(EigenCluster(start, i, float(np.mean(vals[start:i])), tol))
            start = i
    return clusters


def project(s: Spectrum, c: EigenCluster, f) -> Signal:
    """Projection sum_{i in c} <f, phi_i> phi_i onto the cluster's eigenspace."""
    coeffs = s.coefficients(f)
    idx = np.arange(c.start, c.stop)
    out = s.eigenvectors[:, idx] @ coeffs[idx]
    return Signal(out, s.space)


def weighted_norm(s: Spectrum, f) -> float:
    f = _values(f)
    return math.sqrt(s.inner(f, f))


def select_top(eigenvalues, k: int) -> np.ndarray:
    """Indices of the ``k`` largest-magnitude eigenvalues, ordered by signed value descending."""
    vals = np.asarray(eigenvalues, dtype=float)
    by_mag = np.argsort(-np.abs(vals), kind="stable")[:k]
    return by_mag[np.argsort(-vals[by_mag], kind="stable")]


def discretize_torus(w: TorusCayleyGraphon, m: int) -> np.ndarray:
    """m x m matrix of w(i/m, j/m) / m."""
    if m < 2:
        raise ValueError("m must be >= 2")
    x = np.arange(m) / m
    return w(x[:, None], x[None, :]) / m
