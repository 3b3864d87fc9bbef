"""Irreducible representations of S_n in Young's orthogonal form, and frames for
Cayley graphs built from the spectral decomposition of pi(S) = sum_{s in S} pi(s).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .groups import FiniteGroup, Permutation, inverse, parse_cycles, symmetric_group
from .spectral import cluster_eigenvalues, eig_sym

RANKING_GENERATORS = ("(1 2)", "(2 3)", "(3 4)", "(1 2)(3 4)")


def partitions(n: int) -> list[tuple[int, ...]]:
    """Integer partitions of n, largest parts first, in reverse lexicographic order."""
    out = []

    def rec(remaining, max_part, prefix):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for part in range(min(remaining, max_part), 0, -1):
            rec(remaining - part, part, prefix + [part])

    rec(n, n, [])
    return out


def standard_tableaux(shape: Sequence[int]) -> list[tuple[tuple[int, ...], ...]]:
    """All standard Young tableaux of ``shape`` (entries 1..n), in a fixed order."""
    n = sum(shape)
    results = []
    rows = [[] for _ in shape]

    def rec(k):
        if k > n:
            results.append(tuple(tuple(r) for r in rows))
            return
        for i, length in enumerate(shape):
            if len(rows[i]) < length and (i == 0 or len(rows[i - 1]) > len(rows[i])):
                rows[i].append(k)
                rec(k + 1)
                rows[i].pop()

    rec(1)
    return results


def hook_length_dim(shape: Sequence[int]) -> int:
    n = sum(shape)
    conj = [sum(1 for r in shape if r > c) for c in range(shape[0])] if shape else []
    prod = 1
    for i, r in enumerate(shape):
        for j in range(r):
            prod *= (r - j - 1) + (conj[j] - i - 1) + 1
    return math.factorial(n) // prod


def _positions(tab) -> dict[int, tuple[int, int]]:
    return {v: (i, j) for i, row in enumerate(tab) for j, v in enumerate(row)}


def _swap(tab, a: int, b: int):
    def sub(v):
        return b if v == a else a if v == b else v

    return tuple(tuple(sub(v) for v in row) for row in tab)


def adjacent_transposition_matrix(shape: Sequence[int], i: int, tableaux=None) -> np.ndarray:
    """Young orthogonal matrix of the transposition swapping 0-based points i and i + 1."""
    tabs = tableaux if tableaux is not None else standard_tableaux(shape)
    index = {t: k for k, t in enumerate(tabs)}
    d = len(tabs)
    a, b = i + 1, i + 2  # tableau entries are 1-based
    M = np.zeros((d, d))
    for k, t in enumerate(tabs):
        pos = _positions(t)
        (ra, ca), (rb, cb) = pos[a], pos[b]
        axial = (cb - rb) - (ca - ra)
        M[k, k] = 1.0 / axial
        if abs(axial) > 1:
            M[index[_swap(t, a, b)], k] = math.sqrt(1.0 - 1.0 / axial**2)
    return M


def bubble_factorization(g: Permutation) -> list[int]:
    """Adjacent swaps b_1..b_k with g o s_{b_1} o ... o s_{b_k} = identity.

    Hence g = s_{b_k} o ... o s_{b_1}.
    """
    arr = list(g.images)
    swaps = []
    changed = True
    while changed:
        changed = False
        for j in range(len(arr) - 1):
            if arr[j] > arr[j + 1]:
                arr[j], arr[j + 1] = arr[j + 1], arr[j]
                swaps.append(j)
                changed = True
    return swaps


@dataclass(frozen=True, eq=False)
class Irrep:
    partition: tuple[int, ...]
    group: FiniteGroup = field(repr=False)
    matrices: np.ndarray = field(repr=False)  # (|G|, d, d), indexed like group.elements

    @property
    def dim(self) -> int:
        return self.matrices.shape[1]

    def __call__(self, g: Permutation) -> np.ndarray:
        return self.matrices[self.group.index(g)]

    @property
    def label(self) -> str:
        return "[" + ",".join(map(str, self.partition)) + "]"


def young_orthogonal_irreps(n: int, group: Optional[FiniteGroup] = None) -> list[Irrep]:
    """One real orthogonal irrep per partition of n (2 <= n <= 5)."""
    if not 2 <= n <= 5:
        raise ValueError(f"young_orthogonal_irreps supports 2 <= n <= 5, got {n}")
    G = group if group is not None else symmetric_group(n)
    irreps = []
    for shape in partitions(n):
        tabs = standard_tableaux(shape)
        gens = [adjacent_transposition_matrix(shape, i, tabs) for i in range(n - 1)]
        d = len(tabs)
        mats = np.empty((G.order, d, d))
        for idx, g in enumerate(G.elements):
            M = np.eye(d)
            for b in bubble_factorization(g):
                M = gens[b] @ M
            mats[idx] = M
        mats.setflags(write=False)
        irreps.append(Irrep(tuple(shape), G, mats))
    return irreps


@dataclass(frozen=True)
class GeneratingSet:
    elements: tuple[Permutation, ...]

    def __post_init__(self):
        elems = tuple(self.elements)
        if not elems:
            raise ValueError("generating set is empty")
        keys = {s.images for s in elems}
        if len(keys) != len(elems):
            raise ValueError("generating set has repeated elements")
        for s in elems:
            if s.is_identity():
                raise ValueError("generating set must not contain the identity")
            if inverse(s).images not in keys:
                raise ValueError(f"generating set is not closed under inverse: missing inverse of {s.cycle_string()}")
        object.__setattr__(self, "elements", elems)

    @classmethod
    def from_strings(cls, n: int, cycles: Iterable[str]) -> "GeneratingSet":
        return cls(tuple(parse_cycles(n, c) for c in cycles))

    def strings(self) -> list[str]:
        return [s.cycle_string() for s in self.elements]


def ranking_generating_set() -> GeneratingSet:
    return GeneratingSet.from_strings(4, RANKING_GENERATORS)


def pi_of_S(irrep: Irrep, S: GeneratingSet) -> np.ndarray:
    if not isinstance(S, GeneratingSet):
        S = GeneratingSet(tuple(S))
    total = np.zeros((irrep.dim, irrep.dim))
    for s in S.elements:
        total += irrep(s)
    return 0.5 * (total + total.T)


def cayley_adjacency(group: FiniteGroup, S: GeneratingSet) -> np.ndarray:
    """Matrix of (A f)(g) = sum_{s in S} f(s g)."""
    A = np.zeros((group.order, group.order))
    rows = np.arange(group.order)
    for s in S.elements:
        np.add.at(A, (rows, group.mul_table[group.index(s)].astype(np.int64)), 1.0)
    return A


@dataclass(frozen=True, eq=False)
class Frame:
    """Frame vectors stored as rows of ``vectors``."""

    vectors: np.ndarray
    bounds: tuple[float, float]

    @property
    def space_dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self):
        return self.vectors.shape[0]

    def operator(self) -> np.ndarray:
        return self.vectors.T @ self.vectors

    @property
    def is_tight(self) -> bool:
        return abs(self.bounds[1] - self.bounds[0]) <= 1e-10


def frame_bounds(vectors: np.ndarray, basis: Optional[np.ndarray] = None) -> tuple[float, float]:
    """Optimal frame bounds: extreme eigenvalues of the frame operator.

    With ``basis`` (orthonormal rows), bounds are taken on the subspace it spans.
    """
    V = np.asarray(vectors, dtype=float)
    if basis is not None:
        V = V @ np.asarray(basis, dtype=float).T
    ev = np.linalg.eigvalsh(V.T @ V)
    return float(ev[0]), float(ev[-1])


def make_frame(vectors, basis=None) -> Frame:
    V = np.array(vectors, dtype=float)
    return Frame(V, frame_bounds(V, basis))


def mercedes_benz(b1, b2) -> Frame:
    """Three unit vectors at 90, 210 and 330 degrees in the plane spanned by b1, b2."""
    b1 = np.asarray(b1, dtype=float)
    b2 = np.asarray(b2, dtype=float)
    gram = np.array([[b1 @ b1, b1 @ b2], [b2 @ b1, b2 @ b2]])
    if b1.shape != b2.shape or np.max(np.abs(gram - np.eye(2))) > 1e-10:
        raise ValueError("Mercedes-Benz frame needs an orthonormal pair of basis vectors")
    angles = np.deg2rad([90.0, 210.0, 330.0])
    vecs = np.cos(angles)[:, None] * b1[None, :] + np.sin(angles)[:, None] * b2[None, :]
    return make_frame(vecs, basis=np.stack([b1, b2]))


def frame_analysis(frame: Frame, f) -> np.ndarray:
    f = np.asarray(getattr(f, "values", f), dtype=float)
    if f.shape != (frame.space_dim,):
        raise ValueError(f"signal length {f.shape} does not match frame dimension {frame.space_dim}")
    return frame.vectors @ f


def frame_synthesis(frame: Frame, coeffs) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (len(frame),):
        raise ValueError(f"expected {len(frame)} coefficients, got shape {coeffs.shape}")
    return frame.vectors.T @ coeffs


@dataclass(frozen=True)
class EigenspaceFrame:
    """Frame chosen for one eigenspace of pi(S)."""

    irrep: str
    eigenvalue: float
    multiplicity: int
    frame: Frame


@dataclass(frozen=True, eq=False)
class LiftedFrame:
    frame: Frame
    eigenvalues: np.ndarray  # Cayley shift eigenvalue of each vector
    sources: list  # (irrep label, eigenspace index, local vector index, coordinate j)
    pieces: list  # EigenspaceFrame per eigenspace
    group: FiniteGroup = field(repr=False)


def eigenspace_frames(irrep: Irrep, S: GeneratingSet, tol: float = 1e-9) -> list[EigenspaceFrame]:
    """Frame per eigenspace of pi(S): the eigenvector for a simple eigenvalue,
    Mercedes-Benz for a 2-dimensional eigenspace, and the eigenbasis otherwise."""
    spec = eig_sym(pi_of_S(irrep, S), 1.0, method="jacobi")
    out = []
    for c in cluster_eigenvalues(spec, tol):
        basis = spec.eigenvectors[:, c.start:c.stop].T
        if len(c) == 2:
            fr = mercedes_benz(basis[0], basis[1])
        else:
            fr = make_frame(basis, basis=basis)
        out.append(EigenspaceFrame(irrep.label, c.representative, len(c), fr))
    return out


def lift_frame(irreps: Sequence[Irrep], S: GeneratingSet, tol: float = 1e-9) -> LiftedFrame:
    """Lift eigenspace frames of every pi(S) to a Parseval frame of l2(G).

    A vector v of an eigenspace frame with bound A yields, for each coordinate j,
    the function g -> sqrt(d / |G|) * (pi(g)^T v)_j / sqrt(A); it is an
    eigenvector of f -> sum_s f(s g) with the eigenvalue of v.
    """
    if not irreps:
        raise ValueError("no irreps given")
    G = irreps[0].group
    if sum(r.dim**2 for r in irreps) != G.order:
        raise ValueError("irrep list is incomplete: sum of squared dimensions differs from |G|")
    rows, lams, sources, pieces = [], [], [], []
    for rep in irreps:
        d = rep.dim
        scale = math.sqrt(d / G.order)
        for e_idx, piece in enumerate(eigenspace_frames(rep, S, tol)):
            pieces.append(piece)
            A = piece.frame.bounds[0]
            for v_idx, v in enumerate(piece.frame.vectors):
                # coeffs[g, j] = (pi(g)^T v)_j
                coeffs = np.einsum("gkj,k->gj", rep.matrices, v)
                for j in range(d):
                    rows.append(scale * coeffs[:, j] / math.sqrt(A))
                    lams.append(piece.eigenvalue)
                    sources.append((rep.label, e_idx, v_idx, j))
    V = np.array(rows)
    return LiftedFrame(make_frame(V), np.array(lams), sources, pieces, G)


# --- verification -----------------------------------------------------------


def homomorphism_residual(irrep: Irrep) -> float:
    G = irrep.group
    mats = irrep.matrices
    worst = 0.0
    for a in range(G.order):
        prod = np.einsum("ij,bjk->bik", mats[a], mats)
        target = mats[G.mul_table[a].astype(np.int64)]
        worst = max(worst, float(np.max(np.abs(prod - target))))
    return worst


def orthogonality_residual(irrep: Irrep) -> float:
    mats = irrep.matrices
    d = irrep.dim
    prods = np.einsum("gji,gjk->gik", mats, mats)
    return float(np.max(np.abs(prods - np.eye(d))))


def schur_residual(irreps: Sequence[Irrep]) -> float:
    """Max deviation from sum_g pi(g)_ij pi'(g)_kl = (|G|/d) [pi = pi'] d_ik d_jl."""
    worst = 0.0
    order = irreps[0].group.order
    for a, ra in enumerate(irreps):
        for b, rb in enumerate(irreps):
            T = np.einsum("gij,gkl->ijkl", ra.matrices, rb.matrices)
            if a == b:
                d = ra.dim
                I = np.eye(d)
                expected = (order / d) * np.einsum("ik,jl->ijkl", I, I)
            else:
                expected = np.zeros_like(T)
            worst = max(worst, float(np.max(np.abs(T - expected))))
    return worst


def repeated_eigenvalue_irreps(irreps: Sequence[Irrep], S: GeneratingSet, tol: float = 1e-9) -> list[str]:
    labels = []
    for rep in irreps:
        if any(p.multiplicity > 1 for p in eigenspace_frames(rep, S, tol)):
            labels.append(rep.label)
    return labels


def spectrum_multiset_residual(irreps: Sequence[Irrep], S: GeneratingSet) -> float:
    """Compare pi(S) eigenvalues (each repeated d_pi times) with the Cayley adjacency spectrum."""
    G = irreps[0].group
    ours = []
    for rep in irreps:
        ev = np.linalg.eigvalsh(pi_of_S(rep, S))
        ours.extend(np.repeat(ev, rep.dim))
    cay = np.linalg.eigvalsh(cayley_adjacency(G, S))
    ours = np.sort(np.array(ours))
    if ours.shape != cay.shape:
        return math.inf
    return float(np.max(np.abs(ours - np.sort(cay))))


def eigenvector_residual(lifted: LiftedFrame, S: GeneratingSet) -> float:
    """Max ||A v - lambda v|| over lifted vectors, A the left-multiplication Cayley adjacency."""
    A = cayley_adjacency(lifted.group, S)
    V = lifted.frame.vectors
    resid = V @ A.T - lifted.eigenvalues[:, None] * V
    return float(np.max(np.linalg.norm(resid, axis=1)))


def parseval_residual(frame: Frame) -> float:
    return float(np.max(np.abs(frame.operator() - np.eye(frame.space_dim))))


THRESHOLDS = {
    "homomorphism": 1e-9,
    "orthogonality": 1e-10,
    "schur": 1e-8,
    "spectrum_multiset": 1e-8,
    "parseval": 1e-10,
    "eigenvector": 1e-9,
}


def _clean(x: float) -> float:
    return 0.0 if abs(x) < 5e-13 else x


@dataclass(frozen=True, eq=False)
class FrameReport:
    group: FiniteGroup = field(repr=False)
    S: GeneratingSet
    irreps: list = field(repr=False)
    lifted: LiftedFrame = field(repr=False)
    residuals: dict
    repeated: list

    @property
    def ok(self) -> bool:
        return all(self.residuals[k] <= THRESHOLDS[k] for k in THRESHOLDS) and len(self.repeated) == 1

    def to_json(self) -> dict:
        fr = self.lifted.frame
        return {
            "group": self.group.name,
            "S": self.S.strings(),
            "vectors": fr.vectors.tolist(),
            "eigenvalues": self.lifted.eigenvalues.tolist(),
            "bounds": [fr.bounds[0], fr.bounds[1]],
        }

    def text(self) -> str:
        lines = [f"group {self.group.name}, S = {{{', '.join(self.S.strings())}}}",
                 f"{'irrep':<10} {'dim':>3}  pi(S) eigenvalues (multiplicity)"]
        for rep in self.irreps:
            pieces = [p for p in self.lifted.pieces if p.irrep == rep.label]
            ev = ", ".join(f"{_clean(p.eigenvalue):+.6f} (x{p.multiplicity})" for p in pieces)
            lines.append(f"{rep.label:<10} {rep.dim:>3}  {ev}")
        lines.append(f"irreps with a repeated pi(S) eigenvalue: {', '.join(self.repeated) or 'none'}")
        for key, limit in THRESHOLDS.items():
            val = self.residuals[key]
            lines.append(f"{key + ' residual':<28} {val:.3e}  (limit {limit:.0e})  {'ok' if val <= limit else 'FAIL'}")
        A, B = self.lifted.frame.bounds
        lines.append(f"frame: {len(self.lifted.frame)} vectors in dimension {self.lifted.frame.space_dim}, bounds A = {A:.12f}, B = {B:.12f}")
        return "\n".join(lines)


def verify_frames(n: int = 4, S: Optional[GeneratingSet] = None) -> FrameReport:
    """Build the irreps of S_n and the lifted frame for ``S``, and measure every residual."""
    G = symmetric_group(n)
    if S is None:
        S = ranking_generating_set()
    irreps = young_orthogonal_irreps(n, G)
    lifted = lift_frame(irreps, S)
    residuals = {
        "homomorphism": max(homomorphism_residual(r) for r in irreps),
        "orthogonality": max(orthogonality_residual(r) for r in irreps),
        "schur": schur_residual(irreps),
        "spectrum_multiset": spectrum_multiset_residual(irreps, S),
        "parseval": parseval_residual(lifted.frame),
        "eigenvector": eigenvector_residual(lifted, S),
    }
    return FrameReport(G, S, irreps, lifted, residuals, repeated_eigenvalue_irreps(irreps, S))
