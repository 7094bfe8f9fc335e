"""Deterministic random number generation.

Everything random in this package flows through one fixed, documented
generator so that instances and sample points are bit-reproducible across
runs and across reimplementations.  The generator is xorshift64*:

    x ^= x >> 12;  x ^= (x << 25) mod 2^64;  x ^= x >> 27;
    output = (x * 0x2545F4914F6CDD1D) mod 2^64

A zero seed is replaced by the fixed constant 0x9E3779B97F4A7C15 since the
all-zero state is a fixed point of the recurrence.  Uniform doubles are
output / 2^64; normals come from Box-Muller on two uniforms.

``derive(seed, index)`` produces independent child seeds (used for restart
streams and per-graph sample seeds) via the splitmix64 finalizer applied to
seed + (index + 1) * 0x9E3779B97F4A7C15 mod 2^64.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_STAR = 0x2545F4914F6CDD1D


def _splitmix64(z: int) -> int:
    z = (z + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive(seed: int, index: int) -> int:
    """Child seed for stream ``index`` of a parent ``seed``."""
    return _splitmix64((seed + (index + 1) * _GOLDEN) & _MASK64)


class XorShift64Star:
    """xorshift64* stream with Box-Muller normals."""

    def __init__(self, seed: int):
        state = seed & _MASK64
        self._state = state if state != 0 else _GOLDEN
        self._spare_normal: float | None = None

    def next_u64(self) -> int:
        x = self._state
        x ^= x >> 12
        x = (x ^ (x << 25)) & _MASK64
        x ^= x >> 27
        self._state = x
        return (x * _STAR) & _MASK64

    def uniform(self) -> float:
        """Uniform double in [0, 1)."""
        return self.next_u64() / 2.0**64

    def bernoulli(self, p: Fraction) -> bool:
        """Exact-threshold coin flip: true with probability ``p``.

        Compares the raw 64-bit draw against p * 2^64 in integer arithmetic,
        so the outcome depends only on the stream and the exact rational p.
        """
        return self.next_u64() * p.denominator < p.numerator << 64

    def normal(self) -> float:
        if self._spare_normal is not None:
            z = self._spare_normal
            self._spare_normal = None
            return z
        # u1 shifted away from 0 so log is finite
        u1 = (self.next_u64() + 1) / (2.0**64 + 2)
        u2 = self.next_u64() / 2.0**64
        r = math.sqrt(-2.0 * math.log(u1))
        self._spare_normal = r * math.sin(2.0 * math.pi * u2)
        return r * math.cos(2.0 * math.pi * u2)

    def gaussian_matrix(self, rows: int, cols: int) -> np.ndarray:
        """Standard-normal matrix filled in row-major order."""
        out = np.empty((rows, cols))
        for i in range(rows):
            for j in range(cols):
                out[i, j] = self.normal()
        return out
