"""Permutations, symmetric groups with Cayley tables, and the circle group R/Z.

Permutations are stored in 0-based one-line notation. Composition applies the
right factor first: ``compose(a, b)(i) == a(b(i))``.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

MAX_SYMMETRIC_DEGREE = 8


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(v) for v in self.images)
        n = len(images)
        if n < 1:
            raise ValueError("permutation degree must be >= 1")
        if sorted(images) != list(range(n)):
            raise ValueError(f"images {images} are not a bijection on 0..{n - 1}")
        object.__setattr__(self, "images", images)

    @property
    def degree(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, 1-based, each starting at its smallest entry."""
        seen = set()
        out = []
        for start in range(self.degree):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            j = self.images[start]
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self.images[j]
            if len(cyc) > 1:
                out.append(tuple(c + 1 for c in cyc))
        return out

    def cycle_string(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "(1)"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)

    def to_json(self) -> dict:
        return {"n": self.degree, "images": list(self.images)}

    @classmethod
    def from_json(cls, obj: dict) -> "Permutation":
        perm = cls(tuple(obj["images"]))
        if perm.degree != int(obj["n"]):
            raise ValueError("'n' does not match length of 'images'")
        return perm

    def __repr__(self):
        return f"Permutation({self.cycle_string()}, n={self.degree})"


def compose(a: Permutation, b: Permutation) -> Permutation:
    """Return ``a o b`` (apply ``b`` first)."""
    if a.degree != b.degree:
        raise ValueError(f"degree mismatch: {a.degree} vs {b.degree}")
    return Permutation(tuple(a.images[j] for j in b.images))


def inverse(a: Permutation) -> Permutation:
    inv = [0] * a.degree
    for i, v in enumerate(a.images):
        inv[v] = i
    return Permutation(tuple(inv))


def from_cycles(n: int, cycles: Iterable[Sequence[int]]) -> Permutation:
    """Product of 1-based cycles, composed right-to-left.

    >>> from_cycles(3, [(1, 2, 3)]).images
    (1, 2, 0)
    """
    result = Permutation.identity(n)
    for cyc in reversed(list(cycles)):
        cyc = [int(c) for c in cyc]
        if len(set(cyc)) != len(cyc):
            raise ValueError(f"repeated entry in cycle {tuple(cyc)}")
        for c in cyc:
            if not 1 <= c <= n:
                raise ValueError(f"cycle entry {c} out of range 1..{n}")
        images = list(range(n))
        for k, c in enumerate(cyc):
            images[c - 1] = cyc[(k + 1) % len(cyc)] - 1
        result = compose(Permutation(tuple(images)), result)
    return result


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(n: int, text: str) -> Permutation:
    """Parse cycle notation such as ``"(1 2)(3 4)"``; ``"(1)"`` or ``""`` is the identity."""
    stripped = text.replace(" ", "").replace(",", "")
    if stripped and _CYCLE_RE.sub("", text).strip():
        raise ValueError(f"cannot parse cycle string {text!r}")
    cycles = []
    for body in _CYCLE_RE.findall(text):
        parts = body.replace(",", " ").split()
        try:
            cyc = [int(p) for p in parts]
        except ValueError:
            raise ValueError(f"non-integer entry in cycle string {text!r}") from None
        if len(cyc) > 1:
            cycles.append(cyc)
        elif len(cyc) == 1 and not 1 <= cyc[0] <= n:
            raise ValueError(f"cycle entry {cyc[0]} out of range 1..{n}")
    return from_cycles(n, cycles)


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite permutation group with precomputed multiplication and inverse tables."""

    elements: tuple[Permutation, ...]
    mul_table: np.ndarray = field(repr=False)
    inv_table: np.ndarray = field(repr=False)
    identity_index: int = 0
    name: str = ""

    def __post_init__(self):
        self.mul_table.setflags(write=False)
        self.inv_table.setflags(write=False)
        object.__setattr__(self, "_index", {g.images: i for i, g in enumerate(self.elements)})

    @classmethod
    def from_elements(cls, elements: Sequence[Permutation], name: str = "") -> "FiniteGroup":
        elements = tuple(elements)
        index = {g.images: i for i, g in enumerate(elements)}
        if len(index) != len(elements):
            raise ValueError("duplicate group elements")
        k = len(elements)
        # uint16 holds any index up to 8! - 1 and halves table memory
        arr = np.array([g.images for g in elements], dtype=np.int64)
        mul = np.empty((k, k), dtype=np.uint16 if k <= 65536 else np.int64)
        # key of a one-line array in mixed radix, for vectorised lookup
        n = arr.shape[1]
        radix = n ** np.arange(n, dtype=np.int64)
        keys = arr @ radix
        order = np.argsort(keys)
        sorted_keys = keys[order]
        for i in range(k):
            prod = arr[i][arr]  # row j: elements[i] o elements[j]
            pk = prod @ radix
            pos = np.searchsorted(sorted_keys, pk)
            if np.any(pos >= k) or np.any(sorted_keys[np.minimum(pos, k - 1)] != pk):
                raise ValueError("element set is not closed under composition")
            mul[i] = order[pos]
        ident = index.get(tuple(range(n)))
        if ident is None:
            raise ValueError("element set does not contain the identity")
        inv = np.array([index[inverse(g).images] for g in elements], dtype=np.int64)
        return cls(elements, mul, inv, ident, name)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def index(self, g: Permutation) -> int:
        try:
            return self._index[g.images]
        except KeyError:
            raise ValueError(f"{g!r} is not an element of {self.name or 'the group'}") from None

    def mul(self, i: int, j: int) -> int:
        return int(self.mul_table[i, j])

    def inv(self, i: int) -> int:
        return int(self.inv_table[i])


def symmetric_group(n: int) -> FiniteGroup:
    """S_n with elements in lexicographic one-line order (identity first)."""
    if not 1 <= n <= MAX_SYMMETRIC_DEGREE:
        raise ValueError(f"symmetric_group supports 1 <= n <= {MAX_SYMMETRIC_DEGREE}, got {n}")
    elements = [Permutation(p) for p in itertools.permutations(range(n))]
    assert len(elements) == math.factorial(n)
    return FiniteGroup.from_elements(elements, name=f"S{n}")


def parse_group_name(name: str) -> FiniteGroup:
    m = re.fullmatch(r"\s*S_?(\d+)\s*", name)
    if not m:
        raise ValueError(f"unsupported group {name!r}; expected 'S<n>'")
    return symmetric_group(int(m.group(1)))


@dataclass(frozen=True)
class TorusPoint:
    """Element of the circle group [0, 1) under addition mod 1."""

    value: float

    def __post_init__(self):
        v = float(self.value)
        if not math.isfinite(v):
            raise ValueError("torus point must be finite")
        v = v % 1.0
        if v >= 1.0:  # -tiny % 1.0 rounds to 1.0
            v = 0.0
        object.__setattr__(self, "value", v)

    def __add__(self, other: "TorusPoint") -> "TorusPoint":
        return TorusPoint(self.value + other.value)

    def inverse(self) -> "TorusPoint":
        return TorusPoint(1.0 - self.value)

    def __sub__(self, other: "TorusPoint") -> "TorusPoint":
        return self + other.inverse()


def circular_distance(x, y):
    """min(|x - y|, 1 - |x - y|) for points of [0, 1); works elementwise on arrays."""
    diff = np.abs(np.asarray(x, dtype=float) - np.asarray(y, dtype=float))
    return np.minimum(diff, 1.0 - diff)
