"""Undirected simple graphs and exact brute-force oracles.

Vertices are numbered 1..m and edges are stored canonically as pairs
(i, j) with i < j.  In the objective sums used by the reductions each
undirected edge is counted in both directions, so the graph exposes both
``edge_count_undirected`` and ``edge_count_directed``.

The oracles (stability number, max cut, clique number) enumerate all 2^m
binary vectors.  Correctness beats speed here: results feed exact theorem
checks, so everything combinatorial is integer arithmetic, witnesses are
validated before being returned, and ties are broken by lexicographically
smallest vertex set so outputs are reproducible.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CapacityError, CertificateError, ParseError
from .rng import XorShift64Star

ENUMERATION_LIMIT = 25

# Certificate kinds
STABLE_SET = "stable_set"
CUT_PARTITION = "cut_partition"
CLIQUE = "clique"


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices 1..m."""

    m: int
    edges: frozenset[tuple[int, int]]

    def __init__(self, m: int, edges=()):
        if not isinstance(m, int) or m < 1:
            raise ValueError(f"vertex count must be a positive integer, got {m!r}")
        canonical = set()
        for e in edges:
            i, j = e
            if i == j:
                raise ValueError(f"self-loop ({i},{j}) not allowed")
            if not (1 <= i <= m and 1 <= j <= m):
                raise ValueError(f"edge ({i},{j}) out of range 1..{m}")
            canonical.add((i, j) if i < j else (j, i))
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "edges", frozenset(canonical))

    @property
    def edge_count_undirected(self) -> int:
        return len(self.edges)

    @property
    def edge_count_directed(self) -> int:
        return 2 * len(self.edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def complement(self) -> "Graph":
        all_pairs = itertools.combinations(range(1, self.m + 1), 2)
        return Graph(self.m, (p for p in all_pairs if p not in self.edges))

    def adjacency_matrix(self) -> np.ndarray:
        """Symmetric 0/1 matrix with zero diagonal; entry (i-1, j-1) for edge (i, j)."""
        a = np.zeros((self.m, self.m), dtype=np.int64)
        for i, j in self.edges:
            a[i - 1, j - 1] = 1
            a[j - 1, i - 1] = 1
        return a


@dataclass(frozen=True)
class Certificate:
    """Combinatorial witness decoded from an oracle or a solver.

    ``vertices`` holds the stable set, the clique, or (for a cut) the side S
    of the partition S u S^c.  ``size`` is the claimed value: |S| for stable
    sets and cliques, the number of crossing edges for cuts.
    """

    kind: str
    vertices: tuple[int, ...]
    size: int

    def validate(self, graph: Graph) -> None:
        """Raise CertificateError unless the witness checks out against graph."""
        vs = self.vertices
        if len(set(vs)) != len(vs):
            raise CertificateError("witness vertices contain duplicates")
        if any(not (1 <= v <= graph.m) for v in vs):
            raise CertificateError(f"witness vertex out of range 1..{graph.m}")
        if self.kind == STABLE_SET:
            for i, j in itertools.combinations(sorted(vs), 2):
                if graph.has_edge(i, j):
                    raise CertificateError(f"stable set contains edge ({i},{j})")
            if self.size != len(vs):
                raise CertificateError("stable set size claim mismatch")
        elif self.kind == CLIQUE:
            for i, j in itertools.combinations(sorted(vs), 2):
                if not graph.has_edge(i, j):
                    raise CertificateError(f"clique misses edge ({i},{j})")
            if self.size != len(vs):
                raise CertificateError("clique size claim mismatch")
        elif self.kind == CUT_PARTITION:
            s = set(vs)
            cut = sum(1 for i, j in graph.edges if (i in s) != (j in s))
            if self.size != cut:
                raise CertificateError(
                    f"cut size claim {self.size} != actual crossing count {cut}"
                )
        else:
            raise CertificateError(f"unknown certificate kind {self.kind!r}")

    def to_json(self) -> dict:
        return {"kind": self.kind, "vertices": list(self.vertices), "size": self.size}


# ---------------------------------------------------------------------------
# DIMACS edge format

def parse_dimacs(text: str) -> Graph:
    """Parse DIMACS edge format: 'c' comments, one 'p edge m e' header,
    'e i j' lines with 1-based indices.  Duplicate edges collapse."""
    m = None
    edges = set()
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        tokens = line.split()
        if tokens[0] == "p":
            if m is not None:
                raise ParseError(f"line {ln}: duplicate problem line")
            if len(tokens) != 4 or tokens[1] != "edge":
                raise ParseError(f"line {ln}: malformed problem line {line!r}")
            try:
                m = int(tokens[2])
                declared = int(tokens[3])
            except ValueError:
                raise ParseError(f"line {ln}: non-integer counts in problem line")
            if m < 1 or declared < 0:
                raise ParseError(f"line {ln}: invalid counts in problem line")
        elif tokens[0] == "e":
            if m is None:
                raise ParseError(f"line {ln}: edge before problem line")
            if len(tokens) != 3:
                raise ParseError(f"line {ln}: malformed edge line {line!r}")
            try:
                i, j = int(tokens[1]), int(tokens[2])
            except ValueError:
                raise ParseError(f"line {ln}: non-integer vertex index")
            if i == j:
                raise ParseError(f"line {ln}: self-loop e {i} {j}")
            if not (1 <= i <= m and 1 <= j <= m):
                raise ParseError(f"line {ln}: vertex index out of range 1..{m}")
            edges.add((min(i, j), max(i, j)))
        else:
            raise ParseError(f"line {ln}: unexpected line {line!r}")
    if m is None:
        raise ParseError("missing problem line")
    return Graph(m, edges)


def to_dimacs(graph: Graph) -> str:
    lines = [f"p edge {graph.m} {graph.edge_count_undirected}"]
    lines.extend(f"e {i} {j}" for i, j in graph.sorted_edges())
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Generators

def generate(kind: str, m: int, seed: int | None = None, edge_prob=None) -> Graph:
    """Named graph families, deterministic for fixed arguments.

    kind is one of complete/path/cycle/empty/random; random requires a seed
    and an edge probability (exact rational).  Random edges are drawn pair by
    pair in ascending (i, j) order with one generator call each, so the
    result is bit-reproducible.
    """
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"vertex count must be a positive integer, got {m!r}")
    if kind == "complete":
        return Graph(m, itertools.combinations(range(1, m + 1), 2))
    if kind == "empty":
        return Graph(m, ())
    if kind == "path":
        return Graph(m, ((i, i + 1) for i in range(1, m)))
    if kind == "cycle":
        edges = {(i, i + 1) for i in range(1, m)}
        if m > 2:
            edges.add((1, m))
        return Graph(m, edges)
    if kind == "random":
        if seed is None or edge_prob is None:
            raise ValueError("random graphs require seed and edge_prob")
        p = Fraction(edge_prob)
        if not 0 <= p <= 1:
            raise ValueError(f"edge probability {p} outside [0, 1]")
        gen = XorShift64Star(seed)
        edges = [
            pair
            for pair in itertools.combinations(range(1, m + 1), 2)
            if gen.bernoulli(p)
        ]
        return Graph(m, edges)
    raise ValueError(f"unknown graph kind {kind!r}")


# ---------------------------------------------------------------------------
# Exact oracles
#
# Subsets of vertices are bitmasks with vertex v on bit v-1.  For m <= 12 a
# cached table maps every subset to the set of vertex pairs it contains
# (as a bitmask over the C(m,2) pair slots), which turns the per-subset
# stability/clique/cut tests into O(1) integer operations.  Larger m falls
# back to a per-edge loop up to the hard cap.

_TABLE_LIMIT = 12


@functools.lru_cache(maxsize=None)
def _pair_slots(m: int) -> dict[tuple[int, int], int]:
    """Slot number of each canonical pair in the K_m edge ordering."""
    return {
        pair: slot
        for slot, pair in enumerate(itertools.combinations(range(1, m + 1), 2))
    }


@functools.lru_cache(maxsize=None)
def _pairs_within(m: int) -> list[int]:
    """For every vertex-subset mask, the pair-slot mask of pairs inside it."""
    slots = _pair_slots(m)
    within = [0] * (1 << m)
    for s in range(1, 1 << m):
        v_bit = s & -s
        v = v_bit.bit_length()  # vertex number of the lowest set bit
        rest = s ^ v_bit
        acc = within[rest]
        u_mask = rest
        while u_mask:
            u_bit = u_mask & -u_mask
            u = u_bit.bit_length()
            acc |= 1 << slots[(v, u) if v < u else (u, v)]
            u_mask ^= u_bit
        within[s] = acc
    return within


def _graph_pair_mask(graph: Graph) -> int:
    slots = _pair_slots(graph.m)
    gm = 0
    for e in graph.edges:
        gm |= 1 << slots[e]
    return gm


def _lex_tuple_smaller(a: int, b: int) -> bool:
    """True when subset-mask a precedes b as a sorted vertex tuple.

    The sorted tuples share the elements below the lowest differing bit.
    If that bit is in a, the tuples diverge where a offers it and b offers
    either a larger vertex (a wins) or nothing (b is a proper prefix, b
    wins); symmetrically when the bit is in b.
    """
    d = a ^ b
    if d == 0:
        return False
    low = d & -d
    above = low.bit_length()
    if low & a:
        return (b >> above) != 0
    return (a >> above) == 0


def _mask_vertices(mask: int) -> tuple[int, ...]:
    out = []
    v = 1
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def _check_capacity(graph: Graph, limit: int) -> None:
    if graph.m > limit:
        raise CapacityError(
            f"exact enumeration capped at {limit} vertices, graph has {graph.m}"
        )


def _best_subset(m: int, accept, score) -> int:
    """Scan all 2^m subsets; return the mask maximizing score among accepted
    subsets, lexicographically smallest sorted vertex tuple on ties."""
    best_mask = -1
    best_score = None
    for s in range(1 << m):
        if not accept(s):
            continue
        sc = score(s)
        if best_score is None or sc > best_score:
            best_score, best_mask = sc, s
        elif sc == best_score and _lex_tuple_smaller(s, best_mask):
            best_mask = s
    return best_mask


def stability_number(
    graph: Graph, enumeration_limit: int = ENUMERATION_LIMIT
) -> tuple[int, Certificate]:
    """Exact stability number with a validated witness."""
    _check_capacity(graph, enumeration_limit)
    m = graph.m
    if m <= _TABLE_LIMIT:
        within = _pairs_within(m)
        gm = _graph_pair_mask(graph)
        mask = _best_subset(
            m, lambda s: gm & within[s] == 0, lambda s: s.bit_count()
        )
    else:
        edge_masks = [
            (1 << (i - 1)) | (1 << (j - 1)) for i, j in graph.sorted_edges()
        ]
        mask = _best_subset(
            m,
            lambda s: all(s & em != em for em in edge_masks),
            lambda s: s.bit_count(),
        )
    vertices = _mask_vertices(mask)
    cert = Certificate(STABLE_SET, vertices, len(vertices))
    cert.validate(graph)
    return len(vertices), cert


def clique_number(
    graph: Graph, enumeration_limit: int = ENUMERATION_LIMIT
) -> tuple[int, Certificate]:
    """Exact clique number with a validated witness."""
    _check_capacity(graph, enumeration_limit)
    m = graph.m
    if m <= _TABLE_LIMIT:
        within = _pairs_within(m)
        gm = _graph_pair_mask(graph)
        mask = _best_subset(
            m, lambda s: gm & within[s] == within[s], lambda s: s.bit_count()
        )
    else:
        adj = {v: 0 for v in range(1, m + 1)}
        for i, j in graph.edges:
            adj[i] |= 1 << (j - 1)
            adj[j] |= 1 << (i - 1)

        def is_clique(s: int) -> bool:
            t = s
            while t:
                v_bit = t & -t
                v = v_bit.bit_length()
                if (s ^ v_bit) & ~adj[v]:
                    return False
                t ^= v_bit
            return True

        mask = _best_subset(m, is_clique, lambda s: s.bit_count())
    vertices = _mask_vertices(mask)
    cert = Certificate(CLIQUE, vertices, len(vertices))
    cert.validate(graph)
    return len(vertices), cert


def max_cut(
    graph: Graph, enumeration_limit: int = ENUMERATION_LIMIT
) -> tuple[int, Certificate]:
    """Exact max cut; the witness stores the side S of the partition."""
    _check_capacity(graph, enumeration_limit)
    m = graph.m
    full = (1 << m) - 1
    if m <= _TABLE_LIMIT:
        within = _pairs_within(m)
        gm = _graph_pair_mask(graph)

        def cut(s: int) -> int:
            return (gm & ~within[s] & ~within[full ^ s]).bit_count()

    else:
        pairs = [(1 << (i - 1), 1 << (j - 1)) for i, j in graph.edges]

        def cut(s: int) -> int:
            return sum(1 for bi, bj in pairs if bool(s & bi) != bool(s & bj))

    mask = _best_subset(m, lambda s: True, cut)
    vertices = _mask_vertices(mask)
    cert = Certificate(CUT_PARTITION, vertices, cut(mask))
    cert.validate(graph)
    return cert.size, cert


def motzkin_straus_value(graph: Graph) -> Fraction:
    """The simplex-QP optimum 1 - 1/omega, exact."""
    omega, _ = clique_number(graph)
    return 1 - Fraction(1, omega)


def adjacency_matrix(graph: Graph) -> np.ndarray:
    return graph.adjacency_matrix()
