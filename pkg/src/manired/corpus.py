"""Graph corpora and argument-spec parsing shared by tests and the CLI.

Graph ids are stable strings: exhaustive families use the edge-subset
index in the fixed pair ordering of K_m ("g5-0713"), samples carry their
seed and position ("r6-3-007"), and generator specs / file paths name
themselves.  Everything here is deterministic.
"""

from __future__ import annotations

import itertools
import os
from fractions import Fraction

from .errors import CapacityError, ParseError
from .graphs import Graph, generate, parse_dimacs
from .manifolds import FlagSignature, default_parameters
from .rng import derive

ALL_GRAPHS_MAX_M = 6

_GENERATOR_KINDS = ("complete", "path", "cycle", "empty", "random")


def graph_index(graph: Graph) -> int:
    """Edge-subset index of the graph in the fixed ordering of K_m pairs."""
    pairs = list(itertools.combinations(range(1, graph.m + 1), 2))
    idx = 0
    for slot, pair in enumerate(pairs):
        if pair in graph.edges:
            idx |= 1 << slot
    return idx


def graph_id(graph: Graph) -> str:
    total = 1 << (graph.m * (graph.m - 1) // 2)
    width = len(str(total - 1))
    return f"g{graph.m}-{graph_index(graph):0{width}d}"


def all_graphs(m: int):
    """Every graph on m labeled vertices, as (id, Graph), 2^C(m,2) of them."""
    if m > ALL_GRAPHS_MAX_M:
        raise CapacityError(
            f"exhaustive family capped at m = {ALL_GRAPHS_MAX_M}, got {m}"
        )
    pairs = list(itertools.combinations(range(1, m + 1), 2))
    total = 1 << len(pairs)
    width = len(str(total - 1))
    for idx in range(total):
        edges = [pair for slot, pair in enumerate(pairs) if (idx >> slot) & 1]
        yield f"g{m}-{idx:0{width}d}", Graph(m, edges)


def sample_graphs(m: int, count: int, seed: int, edge_prob=Fraction(1, 2)):
    """count independent seeded random graphs as (id, Graph); sample i uses
    the derived stream derive(seed, i), so any prefix is reproducible."""
    out = []
    for i in range(count):
        g = generate("random", m, seed=derive(seed, i), edge_prob=edge_prob)
        out.append((f"r{m}-{seed}-{i:03d}", g))
    return out


def feasibility_signatures(n: int, ps=(1, 2)) -> list[FlagSignature]:
    """Default-parameter signatures with ambient n: every admissible
    dimension chain for each p (largest dimension at most n-1)."""
    sigs = []
    for p in ps:
        params = default_parameters(p)
        for ks in itertools.combinations(range(1, n), p):
            sigs.append(FlagSignature(n, ks, params))
    return sigs


def parse_graph_spec(text: str):
    """One graph from a generator spec or a DIMACS file path.

    Specs: "complete:5", "path:4", "cycle:6", "empty:3",
    "random:7:seed=3:p=1/2".  Anything else is read as a file.  Returns
    (id, Graph) with the spec text itself as the id.
    """
    head = text.split(":", 1)[0]
    if head in _GENERATOR_KINDS:
        parts = text.split(":")
        if len(parts) < 2:
            raise ParseError(f"generator spec {text!r} is missing the vertex count")
        try:
            m = int(parts[1])
        except ValueError:
            raise ParseError(f"bad vertex count in generator spec {text!r}")
        seed = None
        edge_prob = None
        for extra in parts[2:]:
            key, sep, value = extra.partition("=")
            if not sep:
                raise ParseError(f"expected key=value, got {extra!r} in {text!r}")
            if key == "seed":
                try:
                    seed = int(value)
                except ValueError:
                    raise ParseError(f"bad seed {value!r} in {text!r}")
            elif key == "p":
                try:
                    edge_prob = Fraction(value)
                except (ValueError, ZeroDivisionError):
                    raise ParseError(f"bad edge probability {value!r} in {text!r}")
            else:
                raise ParseError(f"unknown generator option {key!r} in {text!r}")
        try:
            graph = generate(head, m, seed=seed, edge_prob=edge_prob)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
        return text, graph
    if not os.path.exists(text):
        raise ParseError(
            f"{text!r} is neither a known generator spec nor a readable file"
        )
    with open(text, "r", encoding="utf-8") as fh:
        return text, parse_dimacs(fh.read())


def parse_family_spec(text: str):
    """A list of (id, Graph) from "all:M" or "sample:M:COUNT:SEED"."""
    parts = text.split(":")
    try:
        if parts[0] == "all" and len(parts) == 2:
            return list(all_graphs(int(parts[1])))
        if parts[0] == "sample" and len(parts) == 4:
            m, count, seed = int(parts[1]), int(parts[2]), int(parts[3])
            return sample_graphs(m, count, seed)
    except CapacityError:
        raise
    except ValueError as exc:
        raise ParseError(f"bad family spec {text!r}: {exc}") from exc
    raise ParseError(
        f"family spec {text!r} not recognized; use all:M or sample:M:COUNT:SEED"
    )
