"""Shared strategies and helpers for the test suite."""

from __future__ import annotations

import numpy as np
from fractions import Fraction
from hypothesis import strategies as st

from manired.graphs import Graph
from manired.rng import XorShift64Star


def mask_to_graph(m: int, mask: int) -> Graph:
    edges = []
    bit = 0
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            if (mask >> bit) & 1:
                edges.append((i, j))
            bit += 1
    return Graph(m, tuple(edges))


@st.composite
def graph_strategy(draw, min_m: int = 1, max_m: int = 8) -> Graph:
    m = draw(st.integers(min_m, max_m))
    npairs = m * (m - 1) // 2
    mask = draw(st.integers(0, (1 << npairs) - 1))
    return mask_to_graph(m, mask)


def seeded_gaussian(seed: int, rows: int, cols: int) -> np.ndarray:
    return XorShift64Star(seed).gaussian_matrix(rows, cols)


def seeded_symmetric(seed: int, n: int) -> np.ndarray:
    a = seeded_gaussian(seed, n, n)
    return (a + a.T) / 2.0


def frac_st() -> st.SearchStrategy[Fraction]:
    return st.builds(
        Fraction,
        st.integers(-50, 50),
        st.integers(1, 12),
    )
