"""Graph-to-manifold reductions: builders, exact solvers, verification.

Five instance families are built here:

  stiefel_lp      maximize x_11+...+x_kk over V(k,n) with x_ij = 0 off the
                  diagonal and x_ii + x_jj <= 0 per edge; optimum 2a-k with
                  a the stability number.
  grassmann_feas  projection matrices with off-diagonal zeros and
                  x_ii + x_jj <= 1 per edge; feasible iff a >= k.
  flag_feas       same shape with per-edge bound a_1 from the signature
                  parameters; feasible iff a >= k_p.
  stiefel_qp      unconstrained diag(X)^T (I-A) diag(X) over V(k,n);
                  optimum 4c - 2|E| + k with c the max cut and |E| the
                  undirected edge count.
  flag_qp         diag(X)^T A diag(X) over a flag manifold; when the clique
                  number exceeds the signature threshold the supremum is
                  b_n^2 (1 - 1/w).

The exact solvers deliberately exploit the structure the hardness proofs
establish (optimal points are signed/0-1/block-valued diagonals), so they
first verify that an instance really is one of the built families,
reconstructing the source graph from the constraint system; anything else
is refused rather than mis-solved.  All identity checks are performed in
exact rational arithmetic.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import graphs as graphlib
from .errors import (
    AmbiguityError,
    CapacityError,
    CertificateError,
    DecodeError,
    ParseError,
    PreconditionError,
    UnsupportedInstanceError,
)
from .graphs import CLIQUE, CUT_PARTITION, STABLE_SET, Certificate, Graph
from .manifolds import (
    Flag,
    FlagSignature,
    Grassmann,
    ManifoldDescriptor,
    Stiefel,
    descriptor_from_json,
    descriptor_to_json,
    fraction_from_json,
    fraction_to_json,
    trace_constant,
    threshold_k,
)

SIGN_ENUM_LIMIT = 22

_REL_LE = "<="
_REL_EQ = "="


@dataclass(frozen=True)
class Constraint:
    """Sparse linear constraint sum(coeff * x_ij) rel rhs, 1-based indices."""

    terms: tuple[tuple[int, int, Fraction], ...]
    rel: str
    rhs: Fraction

    def __init__(self, terms, rel, rhs):
        terms = tuple((int(i), int(j), Fraction(c)) for i, j, c in terms)
        if rel not in (_REL_LE, _REL_EQ):
            raise ValueError(f"relation must be '<=' or '=', got {rel!r}")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "rel", rel)
        object.__setattr__(self, "rhs", Fraction(rhs))


def _check_indices(terms, shape, what):
    rows, cols = shape
    for i, j, _ in terms:
        if not (1 <= i <= rows and 1 <= j <= cols):
            raise ValueError(f"{what} index ({i},{j}) outside {rows}x{cols}")


@dataclass(frozen=True)
class LinearInstance:
    """Objective tr(C^T X) plus sparse constraints over a manifold.

    The objective is stored as coefficient triplets (i, j, c); an empty
    objective marks a pure feasibility problem."""

    manifold: ManifoldDescriptor
    objective: tuple[tuple[int, int, Fraction], ...]
    constraints: tuple[Constraint, ...]
    feasibility_threshold: Fraction | None = None

    def __init__(self, manifold, objective=(), constraints=(), feasibility_threshold=None):
        objective = tuple((int(i), int(j), Fraction(c)) for i, j, c in objective)
        constraints = tuple(
            c if isinstance(c, Constraint) else Constraint(**c) for c in constraints
        )
        _check_indices(objective, manifold.shape, "objective")
        for c in constraints:
            _check_indices(c.terms, manifold.shape, "constraint")
        if feasibility_threshold is not None:
            feasibility_threshold = Fraction(feasibility_threshold)
        object.__setattr__(self, "manifold", manifold)
        object.__setattr__(self, "objective", objective)
        object.__setattr__(self, "constraints", constraints)
        object.__setattr__(self, "feasibility_threshold", feasibility_threshold)


@dataclass(frozen=True)
class QuadraticInstance:
    """Objective diag(X)^T W diag(X) over a manifold; W integer symmetric."""

    manifold: ManifoldDescriptor
    w: tuple[tuple[int, ...], ...]

    def __init__(self, manifold, w):
        w = tuple(tuple(int(entry) for entry in row) for row in w)
        dim = len(w)
        if any(len(row) != dim for row in w):
            raise ValueError("W must be square")
        if any(w[i][j] != w[j][i] for i in range(dim) for j in range(i)):
            raise ValueError("W must be symmetric")
        expected = manifold.k if isinstance(manifold, Stiefel) else manifold.shape[0]
        if dim != expected:
            raise ValueError(
                f"W is {dim}x{dim} but the manifold's diagonal has length {expected}"
            )
        object.__setattr__(self, "manifold", manifold)
        object.__setattr__(self, "w", w)


# ---------------------------------------------------------------------------
# JSON codec

def _coeff_to_json(c: Fraction):
    return c.numerator if c.denominator == 1 else [c.numerator, c.denominator]


def instance_to_json(inst) -> dict:
    if isinstance(inst, LinearInstance):
        out = {
            "kind": "linear",
            "manifold": descriptor_to_json(inst.manifold),
            "objective": [[i, j, _coeff_to_json(c)] for i, j, c in inst.objective],
            "constraints": [
                {
                    "terms": [[i, j, _coeff_to_json(c)] for i, j, c in con.terms],
                    "rel": con.rel,
                    "rhs": fraction_to_json(con.rhs),
                }
                for con in inst.constraints
            ],
        }
        if inst.feasibility_threshold is not None:
            out["feasibility_threshold"] = fraction_to_json(inst.feasibility_threshold)
        return out
    if isinstance(inst, QuadraticInstance):
        return {
            "kind": "quadratic",
            "manifold": descriptor_to_json(inst.manifold),
            "W": [list(row) for row in inst.w],
        }
    raise TypeError(f"not an instance: {inst!r}")


def instance_from_json(obj: dict):
    try:
        kind = obj["kind"]
        manifold = descriptor_from_json(obj["manifold"])
        if kind == "linear":
            objective = tuple(
                (i, j, fraction_from_json(c)) for i, j, c in obj.get("objective", [])
            )
            constraints = tuple(
                Constraint(
                    terms=tuple((i, j, fraction_from_json(c)) for i, j, c in con["terms"]),
                    rel=con["rel"],
                    rhs=fraction_from_json(con["rhs"]),
                )
                for con in obj.get("constraints", [])
            )
            thresh = obj.get("feasibility_threshold")
            return LinearInstance(
                manifold,
                objective,
                constraints,
                None if thresh is None else fraction_from_json(thresh),
            )
        if kind == "quadratic":
            return QuadraticInstance(manifold, obj["W"])
        raise ParseError(f"unknown instance kind {kind!r}")
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed instance JSON: {exc}") from exc


# ---------------------------------------------------------------------------
# Builders

def _off_diagonal_equalities(rows: int, cols: int) -> list[Constraint]:
    return [
        Constraint(terms=((i, j, 1),), rel=_REL_EQ, rhs=0)
        for i in range(1, rows + 1)
        for j in range(1, cols + 1)
        if i != j
    ]


def _edge_sum_constraints(graph: Graph, rhs) -> list[Constraint]:
    return [
        Constraint(terms=((i, i, 1), (j, j, 1)), rel=_REL_LE, rhs=rhs)
        for i, j in graph.sorted_edges()
    ]


def build_stiefel_lp(graph: Graph, n: int) -> LinearInstance:
    """Diagonal-sum LP over V(k,n), k = graph.m: maximize the trace of the
    top k x k block, off-diagonal entries pinned to zero, and
    x_ii + x_jj <= 0 for every edge."""
    k = graph.m
    if not (isinstance(n, int) and k <= n):
        raise ValueError(f"need ambient n >= k = {k}, got {n!r}")
    return LinearInstance(
        manifold=Stiefel(k=k, n=n),
        objective=tuple((i, i, 1) for i in range(1, k + 1)),
        constraints=tuple(
            _off_diagonal_equalities(n, k) + _edge_sum_constraints(graph, 0)
        ),
    )


def build_grassmann_feasibility(graph: Graph, k: int) -> LinearInstance:
    """Projection-matrix feasibility system: diagonal matrices in Gr(k,n)
    with x_ii + x_jj <= 1 per edge.  Pure feasibility, no objective."""
    n = graph.m
    if not (isinstance(k, int) and 1 <= k <= n):
        raise ValueError(f"need 1 <= k <= {n}, got {k!r}")
    return LinearInstance(
        manifold=Grassmann(k=k, n=n),
        objective=(),
        constraints=tuple(
            _off_diagonal_equalities(n, n) + _edge_sum_constraints(graph, 1)
        ),
    )


def build_flag_feasibility(graph: Graph, sig: FlagSignature) -> LinearInstance:
    """Flag-manifold feasibility system with per-edge bound a_1.

    Requires the reduction-ready parameter shape (strictly decreasing,
    ending at 0, with a_1 < 2 a_p): that is what makes pairwise sums of
    the positive values exceed a_1, forcing a zero endpoint on every edge.
    """
    violations = sig.lp_reduction_violations()
    if violations:
        raise ValueError("signature not reduction-ready: " + "; ".join(violations))
    if sig.n != graph.m:
        raise ValueError(f"signature ambient {sig.n} != vertex count {graph.m}")
    n = graph.m
    return LinearInstance(
        manifold=Flag(sig=sig),
        objective=(),
        constraints=tuple(
            _off_diagonal_equalities(n, n)
            + _edge_sum_constraints(graph, sig.params[0])
        ),
    )


def build_stiefel_qp(graph: Graph, n: int) -> QuadraticInstance:
    """Unconstrained QP over V(k,n) with W = I - A; k = graph.m."""
    k = graph.m
    if not (isinstance(n, int) and k <= n):
        raise ValueError(f"need ambient n >= k = {k}, got {n!r}")
    a = graph.adjacency_matrix()
    w = np.eye(k, dtype=np.int64) - a
    return QuadraticInstance(manifold=Stiefel(k=k, n=n), w=tuple(map(tuple, w.tolist())))


def build_flag_qp(graph: Graph, sig: FlagSignature) -> QuadraticInstance:
    """Unconstrained QP over the flag manifold with W = A, so the objective
    is the directed-pair sum of x_ii x_jj over edges."""
    if sig.n != graph.m:
        raise ValueError(f"signature ambient {sig.n} != vertex count {graph.m}")
    a = graph.adjacency_matrix()
    return QuadraticInstance(manifold=Flag(sig=sig), w=tuple(map(tuple, a.tolist())))


# ---------------------------------------------------------------------------
# Instance recognition
#
# The exact solvers only accept instances with the precise structure the
# builders emit.  Recognition reconstructs the source graph from the
# constraint system (or from W), so a deserialized instance is solvable
# without any side channel.

def _split_linear_constraints(inst: LinearInstance, edge_rhs: Fraction):
    """Partition constraints into the full off-diagonal zero set and the
    per-edge diagonal-sum bounds; anything else is unsupported."""
    rows, cols = inst.manifold.shape
    eq_cells = set()
    edges = set()
    for con in inst.constraints:
        if con.rel == _REL_EQ and len(con.terms) == 1 and con.rhs == 0:
            i, j, c = con.terms[0]
            if c != 1 or i == j or (i, j) in eq_cells:
                raise UnsupportedInstanceError("unrecognized equality constraint")
            eq_cells.add((i, j))
        elif con.rel == _REL_LE and len(con.terms) == 2 and con.rhs == edge_rhs:
            (i, ii, ci), (j, jj, cj) = con.terms
            if not (i == ii and j == jj and ci == 1 and cj == 1 and i != j):
                raise UnsupportedInstanceError("unrecognized edge constraint")
            if not (i <= cols and j <= cols):
                raise UnsupportedInstanceError("edge constraint off the diagonal block")
            edge = (min(i, j), max(i, j))
            if edge in edges:
                raise UnsupportedInstanceError("duplicate edge constraint")
            edges.add(edge)
        else:
            raise UnsupportedInstanceError("constraint outside the reduction families")
    expected_cells = {
        (i, j)
        for i in range(1, rows + 1)
        for j in range(1, cols + 1)
        if i != j
    }
    if eq_cells != expected_cells:
        raise UnsupportedInstanceError("off-diagonal zero constraints incomplete")
    return edges


def classify_instance(inst) -> tuple[str, Graph]:
    """(family name, reconstructed source graph) or UnsupportedInstanceError."""
    if isinstance(inst, LinearInstance):
        man = inst.manifold
        if isinstance(man, Stiefel):
            expected_obj = tuple((i, i, Fraction(1)) for i in range(1, man.k + 1))
            if inst.objective != expected_obj or inst.feasibility_threshold is not None:
                raise UnsupportedInstanceError("objective is not the diagonal trace sum")
            edges = _split_linear_constraints(inst, Fraction(0))
            return "stiefel_lp", Graph(man.k, edges)
        if isinstance(man, Grassmann):
            if inst.objective:
                raise UnsupportedInstanceError("feasibility family carries no objective")
            edges = _split_linear_constraints(inst, Fraction(1))
            return "grassmann_feas", Graph(man.n, edges)
        if isinstance(man, Flag):
            if inst.objective:
                raise UnsupportedInstanceError("feasibility family carries no objective")
            violations = man.sig.lp_reduction_violations()
            if violations:
                raise UnsupportedInstanceError(
                    "signature not reduction-ready: " + "; ".join(violations)
                )
            edges = _split_linear_constraints(inst, man.sig.params[0])
            return "flag_feas", Graph(man.sig.n, edges)
        raise UnsupportedInstanceError(f"unknown manifold {man!r}")
    if isinstance(inst, QuadraticInstance):
        man = inst.manifold
        dim = len(inst.w)
        if isinstance(man, Stiefel):
            if any(inst.w[i][i] != 1 for i in range(dim)):
                raise UnsupportedInstanceError("Stiefel QP needs unit diagonal (I - A)")
            off_ok = all(
                inst.w[i][j] in (0, -1) for i in range(dim) for j in range(i)
            )
            if not off_ok:
                raise UnsupportedInstanceError("Stiefel QP off-diagonal must be 0 or -1")
            edges = {
                (j + 1, i + 1) for i in range(dim) for j in range(i) if inst.w[i][j] == -1
            }
            return "stiefel_qp", Graph(dim, edges)
        if isinstance(man, (Grassmann, Flag)):
            if any(inst.w[i][i] != 0 for i in range(dim)):
                raise UnsupportedInstanceError("flag QP needs zero diagonal (W = A)")
            off_ok = all(inst.w[i][j] in (0, 1) for i in range(dim) for j in range(i))
            if not off_ok:
                raise UnsupportedInstanceError("flag QP off-diagonal must be 0 or 1")
            edges = {
                (j + 1, i + 1) for i in range(dim) for j in range(i) if inst.w[i][j] == 1
            }
            return "flag_qp", Graph(dim, edges)
        raise UnsupportedInstanceError(f"unknown manifold {man!r}")
    raise TypeError(f"not an instance: {inst!r}")


def instance_graph(inst) -> Graph:
    return classify_instance(inst)[1]


# ---------------------------------------------------------------------------
# Exact solvers

def _lex_best_mask(candidates) -> int:
    best = None
    for mask in candidates:
        if best is None or graphlib._lex_tuple_smaller(mask, best):
            best = mask
    return best


def _sign_matrix(mask: int, n: int, k: int) -> np.ndarray:
    x = np.zeros((n, k))
    for i in range(k):
        x[i, i] = 1.0 if (mask >> i) & 1 else -1.0
    return x


def solve_stiefel_diag_exact(inst):
    """Exact optimum of a stiefel_lp or stiefel_qp instance.

    Optimal points are sign diagonals (padded with zero rows to n x k), so
    the solver enumerates all 2^k sign patterns: for the LP it keeps those
    satisfying every edge constraint (never empty: all-minus works), for
    the unconstrained QP it scores all of them.  Returns (value, X) with
    the value exact and X the argmax whose +1 vertex set is
    lexicographically smallest.
    """
    family, graph = classify_instance(inst)
    if family not in ("stiefel_lp", "stiefel_qp"):
        raise UnsupportedInstanceError(f"{family} is not a Stiefel diagonal family")
    k = graph.m
    n = inst.manifold.n
    if k > SIGN_ENUM_LIMIT:
        raise CapacityError(f"sign enumeration capped at k = {SIGN_ENUM_LIMIT}, got {k}")

    if family == "stiefel_lp":
        edge_masks = [
            (1 << (i - 1)) | (1 << (j - 1)) for i, j in graph.sorted_edges()
        ]
        best_val = None
        best_masks = []
        for mask in range(1 << k):
            if any(mask & em == em for em in edge_masks):
                continue
            val = 2 * mask.bit_count() - k
            if best_val is None or val > best_val:
                best_val, best_masks = val, [mask]
            elif val == best_val:
                best_masks.append(mask)
        if best_val is None:
            return float("-inf"), None
        return Fraction(best_val), _sign_matrix(_lex_best_mask(best_masks), n, k)

    w = inst.w
    diag_total = sum(w[i][i] for i in range(k))
    pairs = [
        (1 << i, 1 << j, w[i][j])
        for i in range(k)
        for j in range(i)
        if w[i][j] != 0
    ]
    best_val = None
    best_masks = []
    for mask in range(1 << k):
        acc = 0
        for bi, bj, wij in pairs:
            if bool(mask & bi) == bool(mask & bj):
                acc += wij
            else:
                acc -= wij
        val = diag_total + 2 * acc
        if best_val is None or val > best_val:
            best_val, best_masks = val, [mask]
        elif val == best_val:
            best_masks.append(mask)
    return Fraction(best_val), _sign_matrix(_lex_best_mask(best_masks), n, k)


def solve_hypercube_qp_exact(w) -> tuple[Fraction, tuple[int, ...]]:
    """Exact maximum of x^T W x over x in {-1,1}^dim, dim <= 22.

    W may carry integers or rationals; arithmetic is exact.  Ties resolve
    to the sign vector whose +1 set is lexicographically smallest.
    """
    if isinstance(w, np.ndarray):
        w = w.tolist()
    rows = [[Fraction(entry) for entry in row] for row in w]
    dim = len(rows)
    if any(len(row) != dim for row in rows):
        raise ValueError("W must be square")
    if any(rows[i][j] != rows[j][i] for i in range(dim) for j in range(i)):
        raise ValueError("W must be symmetric")
    if dim > SIGN_ENUM_LIMIT:
        raise CapacityError(
            f"sign enumeration capped at dim = {SIGN_ENUM_LIMIT}, got {dim}"
        )
    diag_total = sum(rows[i][i] for i in range(dim))
    pairs = [
        (1 << i, 1 << j, rows[i][j])
        for i in range(dim)
        for j in range(i)
        if rows[i][j] != 0
    ]
    best_val = None
    best_masks = []
    for mask in range(1 << dim):
        acc = Fraction(0)
        for bi, bj, wij in pairs:
            if bool(mask & bi) == bool(mask & bj):
                acc += wij
            else:
                acc -= wij
        val = diag_total + 2 * acc
        if best_val is None or val > best_val:
            best_val, best_masks = val, [mask]
        elif val == best_val:
            best_masks.append(mask)
    mask = _lex_best_mask(best_masks)
    signs = tuple(1 if (mask >> i) & 1 else -1 for i in range(dim))
    return best_val, signs


def _exact_diag_satisfies(inst: LinearInstance, diag: list[Fraction]) -> bool:
    """Evaluate every constraint at the diagonal matrix diag, exactly."""
    for con in inst.constraints:
        val = sum(
            (c * diag[i - 1] if i == j else Fraction(0) for i, j, c in con.terms),
            start=Fraction(0),
        )
        if con.rel == _REL_EQ and val != con.rhs:
            return False
        if con.rel == _REL_LE and not val <= con.rhs:
            return False
    return True


def feasible_diag_exact(inst: LinearInstance):
    """Exact-arithmetic core of check_feasibility_exact: the witness as a
    rational diagonal vector, or None when infeasible."""
    family, graph = classify_instance(inst)
    n = graph.m
    if n > SIGN_ENUM_LIMIT:
        raise CapacityError(f"subset enumeration capped at n = {SIGN_ENUM_LIMIT}, got {n}")
    if family == "grassmann_feas":
        size = inst.manifold.k
        values = [Fraction(1)] * size
    elif family == "flag_feas":
        sig = inst.manifold.sig
        size = sig.ks[-1]
        # a_1 repeated n_1 times, ..., a_p repeated n_p times
        values = [
            a
            for a, nj in zip(sig.params[:-1], sig.block_sizes[:-1])
            for _ in range(nj)
        ]
    else:
        raise UnsupportedInstanceError(f"{family} is not a feasibility family")

    adjacency = {v: set() for v in range(1, n + 1)}
    for i, j in graph.edges:
        adjacency[i].add(j)
        adjacency[j].add(i)

    for subset in itertools.combinations(range(1, n + 1), size):
        chosen = set(subset)
        if any(adjacency[v] & chosen for v in subset):
            continue
        diag = [Fraction(0)] * n
        for v, a in zip(subset, values):
            diag[v - 1] = a
        if not _exact_diag_satisfies(inst, diag):
            raise UnsupportedInstanceError(
                "stable-set witness violates a constraint; instance structure drifted"
            )
        return tuple(diag)
    return None


def check_feasibility_exact(inst: LinearInstance):
    """Decide a grassmann_feas or flag_feas instance, with witness.

    Feasibility reduces to the existence of a stable set of size k (resp.
    k_p): enumerate subsets in lexicographic order, place the admissible
    diagonal values on the first stable one, and re-validate every
    constraint in exact arithmetic before returning the witness.
    Returns (True, X) or (False, None).
    """
    diag = feasible_diag_exact(inst)
    if diag is None:
        return False, None
    return True, np.diag([float(a) for a in diag])


# ---------------------------------------------------------------------------
# Certificates

def decode_certificate(inst, x: np.ndarray, tol: float = 1e-6) -> Certificate:
    """Read the combinatorial witness off a solution matrix.

    The matrix must be diagonal within tol (including zero padding rows for
    Stiefel).  Support thresholds per family: sign diagonals decode by
    x_ii >= 1 - tol, 0/1 diagonals by x_ii >= tol, flag feasibility
    diagonals by x_ii >= a_p - tol.  The decoded certificate is validated
    against the reconstructed source graph before being returned; failure
    of either step raises DecodeError.
    """
    family, graph = classify_instance(inst)
    x = np.asarray(x, dtype=float)
    rows, cols = inst.manifold.shape
    if x.shape != (rows, cols):
        raise DecodeError(f"expected shape {(rows, cols)}, got {x.shape}")
    off_mask = np.ones_like(x, dtype=bool)
    for i in range(min(rows, cols)):
        off_mask[i, i] = False
    if off_mask.any() and float(np.abs(x[off_mask]).max()) > tol:
        raise DecodeError("matrix is not diagonal within tolerance")
    diag = np.diagonal(x)

    if family in ("stiefel_lp", "stiefel_qp"):
        if np.abs(np.abs(diag) - 1.0).max() > tol:
            raise DecodeError("diagonal entries are not signs within tolerance")
        support = [i + 1 for i, v in enumerate(diag) if v >= 1.0 - tol]
        kind = STABLE_SET if family == "stiefel_lp" else CUT_PARTITION
        if kind == CUT_PARTITION:
            s = set(support)
            size = sum(1 for i, j in graph.edges if (i in s) != (j in s))
        else:
            size = len(support)
    elif family == "grassmann_feas":
        support = [i + 1 for i, v in enumerate(diag) if v >= tol]
        kind, size = STABLE_SET, len(support)
    elif family == "flag_feas":
        a_p = float(inst.manifold.sig.params[-2])
        support = [i + 1 for i, v in enumerate(diag) if v >= a_p - tol]
        kind, size = STABLE_SET, len(support)
    elif family == "flag_qp":
        support = [i + 1 for i, v in enumerate(diag) if v >= tol]
        kind, size = CLIQUE, len(support)
    else:
        raise UnsupportedInstanceError(f"no decoder for family {family}")

    cert = Certificate(kind, tuple(support), size)
    try:
        cert.validate(graph)
    except CertificateError as exc:
        raise DecodeError(f"decoded certificate failed validation: {exc}") from exc
    return cert


# ---------------------------------------------------------------------------
# Flag clique QP

def flag_qp_value(graph: Graph, sig: FlagSignature) -> Fraction:
    """Supremum b_n^2 (1 - 1/w) of the flag QP, valid when the clique
    number w exceeds the signature's threshold index."""
    omega, _ = graphlib.clique_number(graph)
    gate = threshold_k(sig)
    if not omega > gate:
        raise PreconditionError(
            f"clique number {omega} does not exceed the signature threshold {gate}"
        )
    bn = trace_constant(sig)
    return bn * bn * (1 - Fraction(1, omega))


def flag_qp_witness_exact(graph: Graph, sig: FlagSignature) -> tuple[Fraction, ...]:
    """Exact diagonal of the optimizer: b_n/w on a maximum clique, 0 off it."""
    omega, cert = graphlib.clique_number(graph)
    gate = threshold_k(sig)
    if not omega > gate:
        raise PreconditionError(
            f"clique number {omega} does not exceed the signature threshold {gate}"
        )
    bn = trace_constant(sig)
    share = bn / omega
    diag = [Fraction(0)] * graph.m
    for v in cert.vertices:
        diag[v - 1] = share
    return tuple(diag)


def flag_qp_witness(graph: Graph, sig: FlagSignature) -> np.ndarray:
    diag = flag_qp_witness_exact(graph, sig)
    return np.diag([float(a) for a in diag])


def qp_objective_exact(w, diag) -> Fraction:
    """diag^T W diag with exact arithmetic; counts both (i,j) and (j,i)."""
    diag = [Fraction(d) for d in diag]
    acc = Fraction(0)
    for i, row in enumerate(w):
        di = diag[i]
        if di == 0:
            continue
        for j, wij in enumerate(row):
            if wij != 0:
                acc += Fraction(wij) * di * diag[j]
    return acc


# ---------------------------------------------------------------------------
# Verification

_ORACLE_BY_THEOREM = {
    "stiefel_lp": "alpha",
    "grassmann_feas": "alpha",
    "flag_feas": "alpha",
    "stiefel_qp": "kappa",
    "flag_qp": "omega",
}


@dataclass
class VerificationReport:
    graph_id: str
    theorem: str
    m: int
    edges: int
    oracle_name: str
    oracle_value: int
    predicted: object
    computed: object
    passed: bool
    certificate: Certificate | None
    certificate_valid: bool | None
    millis: float

    def to_json(self) -> dict:
        # timing is excluded: stdout must be byte-identical across runs
        return {
            "graph_id": self.graph_id,
            "theorem": self.theorem,
            "m": self.m,
            "edges": self.edges,
            "oracle": {"name": self.oracle_name, "value": self.oracle_value},
            "predicted": _encode_value(self.predicted),
            "computed": _encode_value(self.computed),
            "pass": self.passed,
            "certificate": None if self.certificate is None else self.certificate.to_json(),
            "certificate_valid": self.certificate_valid,
        }

    def csv_row(self) -> list:
        return [
            self.graph_id,
            self.m,
            self.edges,
            self.theorem,
            _value_str(self.oracle_value),
            _value_str(self.predicted),
            _value_str(self.computed),
            "1" if self.passed else "0",
            f"{self.millis:.3f}",
        ]


CSV_HEADER = [
    "graph_id",
    "m",
    "edges",
    "theorem",
    "oracle",
    "predicted",
    "computed",
    "pass",
    "millis",
]


def _encode_value(v):
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else fraction_to_json(v)
    if isinstance(v, (int, float, str)):
        return v
    raise TypeError(f"cannot encode {v!r}")


def _value_str(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _decode_or_flag(inst, x, expected_size):
    """Decode + validate; returns (certificate, valid, size_ok)."""
    try:
        cert = decode_certificate(inst, x)
    except DecodeError:
        return None, False, False
    return cert, True, cert.size == expected_size


def verify_theorem(
    graph: Graph,
    which: str,
    *,
    n: int | None = None,
    k: int | None = None,
    sig: FlagSignature | None = None,
    graph_id: str = "",
) -> VerificationReport:
    """Run one reduction end to end and compare against the graph oracle.

    which selects the family; n (Stiefel ambient, default graph.m),
    k (Grassmann rank), and sig (flag signature) parametrize it.  The
    report records the oracle value, the independently predicted and
    computed quantities, exact-equality pass status, and the decoded
    certificate with its validation status.
    """
    if which not in _ORACLE_BY_THEOREM:
        raise ValueError(f"unknown theorem key {which!r}")
    t0 = time.perf_counter()
    theorem_label = which
    cert = None
    cert_valid: bool | None = None

    if which in ("stiefel_lp", "stiefel_qp"):
        ambient = graph.m if n is None else n
        theorem_label = f"{which}:n={ambient}"
        if which == "stiefel_lp":
            alpha, _ = graphlib.stability_number(graph)
            oracle_name, oracle_value = "alpha", alpha
            predicted = Fraction(2 * alpha - graph.m)
            inst = build_stiefel_lp(graph, ambient)
            computed, x = solve_stiefel_diag_exact(inst)
            cert, cert_valid, size_ok = _decode_or_flag(inst, x, alpha)
        else:
            kappa, _ = graphlib.max_cut(graph)
            oracle_name, oracle_value = "kappa", kappa
            predicted = Fraction(4 * kappa - 2 * graph.edge_count_undirected + graph.m)
            inst = build_stiefel_qp(graph, ambient)
            computed, x = solve_stiefel_diag_exact(inst)
            cert, cert_valid, size_ok = _decode_or_flag(inst, x, kappa)
        passed = computed == predicted and size_ok
    elif which == "grassmann_feas":
        if k is None:
            raise ValueError("grassmann_feas needs k")
        theorem_label = f"grassmann_feas:k={k}"
        alpha, _ = graphlib.stability_number(graph)
        oracle_name, oracle_value = "alpha", alpha
        predicted = alpha >= k
        inst = build_grassmann_feasibility(graph, k)
        computed, x = check_feasibility_exact(inst)
        if computed:
            cert, cert_valid, size_ok = _decode_or_flag(inst, x, k)
        else:
            size_ok = True
        passed = computed == predicted and size_ok
    elif which == "flag_feas":
        if sig is None:
            raise ValueError("flag_feas needs sig")
        kp = sig.ks[-1]
        theorem_label = f"flag_feas:p={sig.p}:kp={kp}"
        alpha, _ = graphlib.stability_number(graph)
        oracle_name, oracle_value = "alpha", alpha
        predicted = alpha >= kp
        inst = build_flag_feasibility(graph, sig)
        computed, x = check_feasibility_exact(inst)
        if computed:
            cert, cert_valid, size_ok = _decode_or_flag(inst, x, kp)
        else:
            size_ok = True
        passed = computed == predicted and size_ok
    else:  # flag_qp
        if sig is None:
            raise ValueError("flag_qp needs sig")
        theorem_label = f"flag_qp:p={sig.p}"
        omega, _ = graphlib.clique_number(graph)
        oracle_name, oracle_value = "omega", omega
        predicted = flag_qp_value(graph, sig)
        inst = build_flag_qp(graph, sig)
        diag = flag_qp_witness_exact(graph, sig)
        computed = qp_objective_exact(inst.w, diag)
        cert, cert_valid, size_ok = _decode_or_flag(inst, flag_qp_witness(graph, sig), omega)
        passed = computed == predicted and size_ok

    millis = (time.perf_counter() - t0) * 1000.0
    return VerificationReport(
        graph_id=graph_id,
        theorem=theorem_label,
        m=graph.m,
        edges=graph.edge_count_undirected,
        oracle_name=oracle_name,
        oracle_value=oracle_value,
        predicted=predicted,
        computed=computed,
        passed=passed,
        certificate=cert,
        certificate_valid=cert_valid,
        millis=millis,
    )


def round_to_integer_grid(v: float, offset: int, spacing: int) -> int:
    """Snap an approximate objective value to its integer grid
    {offset + spacing*t}.  Refuses (AmbiguityError) when v sits within
    1e-9 of the midpoint between two grid values; the reductions'
    approximation arguments guarantee real values stay well clear of it.
    """
    if spacing < 1:
        raise ValueError(f"spacing must be a positive integer, got {spacing}")
    t = (float(v) - offset) / spacing
    lo = math.floor(t)
    cand_lo = offset + spacing * lo
    cand_hi = offset + spacing * (lo + 1)
    d_lo = abs(float(v) - cand_lo)
    d_hi = abs(float(v) - cand_hi)
    if abs(d_lo - d_hi) <= 1e-9:
        raise AmbiguityError(
            f"{v} is equidistant between grid values {cand_lo} and {cand_hi}"
        )
    return cand_lo if d_lo < d_hi else cand_hi
