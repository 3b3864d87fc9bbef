"""Bit-exact pseudorandom streams: splitmix64 for seeding, xoshiro256** for draws.

Both generators are specified on 64-bit unsigned integers, so results are
identical on every platform. Uniform doubles use the top 53 bits:
``(x >> 11) * 2**-53``.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_INV_2_53 = 1.0 / (1 << 53)


def _mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed: int):
        self.state = int(seed) & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & MASK64
        return _mix64(self.state)


def splitmix64(x: int) -> int:
    """First output of a splitmix64 generator seeded at ``x``."""
    return _mix64((int(x) + _GOLDEN) & MASK64)


def derive_seed(master_seed: int, index: int) -> int:
    """Child seed ``splitmix64(splitmix64(master_seed) XOR index)``.

    The master is mixed before the XOR; otherwise masters differing only in
    low bits (e.g. 2 and 3) would hand out the same child seeds, permuted.
    """
    return splitmix64(splitmix64(master_seed) ^ (int(index) & MASK64))


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


class Xoshiro256:
    """xoshiro256** with state expanded from a 64-bit seed by splitmix64.

    Pure-Python scalar generator; ``VectorXoshiro256`` runs many streams in
    lockstep and must agree with this one draw for draw.
    """

    def __init__(self, seed: int):
        sm = SplitMix64(seed)
        self.s = [sm.next_u64() for _ in range(4)]

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self.s
        result = (_rotl((s1 * 5) & MASK64, 7) * 9) & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self.s = [s0, s1, s2, s3]
        return result

    def random(self) -> float:
        return (self.next_u64() >> 11) * _INV_2_53

    def randoms(self, count: int) -> np.ndarray:
        return np.array([self.random() for _ in range(count)], dtype=np.float64)


def _vrotl(x: np.ndarray, k: int) -> np.ndarray:
    return (x << np.uint64(k)) | (x >> np.uint64(64 - k))


class VectorXoshiro256:
    """A batch of independent xoshiro256** streams advanced together."""

    def __init__(self, seeds):
        states = []
        for seed in seeds:
            sm = SplitMix64(seed)
            states.append([sm.next_u64() for _ in range(4)])
        arr = np.array(states, dtype=np.uint64).reshape(-1, 4)
        self.s0, self.s1, self.s2, self.s3 = (arr[:, c].copy() for c in range(4))

    def __len__(self):
        return self.s0.shape[0]

    def next_u64(self) -> np.ndarray:
        s0, s1, s2, s3 = self.s0, self.s1, self.s2, self.s3
        result = _vrotl(s1 * np.uint64(5), 7) * np.uint64(9)
        t = s1 << np.uint64(17)
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        self.s3 = _vrotl(s3, 45)
        return result

    def random(self) -> np.ndarray:
        return (self.next_u64() >> np.uint64(11)).astype(np.float64) * _INV_2_53
