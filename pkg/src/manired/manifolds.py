"""Matrix models of Stiefel, Grassmann, and flag manifolds.

A flag manifold is modeled as the set of symmetric n x n matrices
Q diag(a_1 I_{n_1}, ..., a_{p+1} I_{n_{p+1}}) Q^T over orthogonal Q, where
the block sizes n_j come from the nesting dimensions k_1 < ... < k_p < n.
The signature (dimensions plus the eigenvalue parameters a_j) determines
everything this module computes: the constant trace, the prefix sums of
the sorted eigenvalue vector, the threshold index that gates the clique
reduction, and the Schur-Horn polytope of achievable diagonals.

All signature-level arithmetic is exact (fractions.Fraction); floats enter
only in matrix samples and membership residuals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CapacityError, InfeasibleError, PreconditionError, RankDeficiencyError
from .matrixcore import majorization_check, qr_orthonormalize, sym_eig, symmetrize
from .rng import XorShift64Star

PERMUTOHEDRON_MAX_N = 8


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        # refuse silent binary-float promotion; signatures are exact data
        raise TypeError(f"signature parameters must be exact rationals, got float {x!r}")
    return Fraction(x)


def fraction_to_json(q: Fraction) -> list[int]:
    return [q.numerator, q.denominator]


def fraction_from_json(obj) -> Fraction:
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, list) and len(obj) == 2 and all(isinstance(t, int) for t in obj):
        return Fraction(obj[0], obj[1])
    raise ValueError(f"expected an integer or [num, den] pair, got {obj!r}")


@dataclass(frozen=True)
class FlagSignature:
    """Nesting dimensions ks = (k_1 < ... < k_p) inside ambient dimension n,
    with one eigenvalue parameter per block (p+1 of them, pairwise distinct).

    ks may be empty (p = 0): a single block, one eigenvalue, a one-point
    manifold.  Useful as a degenerate case in tests.
    """

    n: int
    ks: tuple[int, ...]
    params: tuple[Fraction, ...]

    def __init__(self, n: int, ks=(), params=()):
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"ambient dimension must be a positive integer, got {n!r}")
        ks = tuple(int(k) for k in ks)
        for prev, cur in zip((0,) + ks, ks):
            if cur <= prev:
                raise ValueError(f"dimensions must be strictly increasing, got {ks}")
        if ks and ks[-1] >= n:
            raise ValueError(f"largest nesting dimension {ks[-1]} must be < n = {n}")
        params = tuple(_as_fraction(a) for a in params)
        if len(params) != len(ks) + 1:
            raise ValueError(
                f"need {len(ks) + 1} parameters for {len(ks)} nesting dimensions, "
                f"got {len(params)}"
            )
        if len(set(params)) != len(params):
            raise ValueError(f"parameters must be pairwise distinct, got {params}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "ks", ks)
        object.__setattr__(self, "params", params)

    @property
    def p(self) -> int:
        return len(self.ks)

    @property
    def block_sizes(self) -> tuple[int, ...]:
        bounds = (0,) + self.ks + (self.n,)
        return tuple(b - a for a, b in zip(bounds, bounds[1:]))

    def block_vector(self) -> tuple[Fraction, ...]:
        """The eigenvalue vector: a_j repeated n_j times, in block order."""
        out = []
        for a, nj in zip(self.params, self.block_sizes):
            out.extend([a] * nj)
        return tuple(out)

    def lp_reduction_violations(self) -> list[str]:
        """Why this signature cannot feed the LP feasibility reduction.

        The reduction needs strictly decreasing parameters ending at zero
        and a_1 < 2 a_p, so that placing {a_1..a_p} on a stable set keeps
        every pairwise sum of positives above the edge bound a_1.
        """
        out = []
        if self.p < 1:
            out.append("need at least one proper nesting dimension (p >= 1)")
            return out
        a = self.params
        for j in range(self.p):
            if not a[j] > a[j + 1]:
                out.append(f"a_{j + 1} = {a[j]} not > a_{j + 2} = {a[j + 1]}")
        if a[-1] != 0:
            out.append(f"a_{self.p + 1} = {a[-1]} != 0")
        if not a[0] < 2 * a[self.p - 1]:
            out.append(f"a_1 = {a[0]} not < 2*a_{self.p} = {2 * a[self.p - 1]}")
        return out

    @property
    def lp_reduction_ready(self) -> bool:
        return not self.lp_reduction_violations()

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "ks": list(self.ks),
            "params": [fraction_to_json(a) for a in self.params],
        }

    @staticmethod
    def from_json(obj: dict) -> "FlagSignature":
        return FlagSignature(
            n=obj["n"],
            ks=tuple(obj["ks"]),
            params=tuple(fraction_from_json(a) for a in obj["params"]),
        )


@dataclass(frozen=True)
class Stiefel:
    k: int
    n: int

    def __post_init__(self):
        if not (1 <= self.k <= self.n):
            raise ValueError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n, self.k)


@dataclass(frozen=True)
class Grassmann:
    k: int
    n: int

    def __post_init__(self):
        if not (1 <= self.k <= self.n):
            raise ValueError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n, self.n)


@dataclass(frozen=True)
class Flag:
    sig: FlagSignature

    @property
    def shape(self) -> tuple[int, int]:
        return (self.sig.n, self.sig.n)


ManifoldDescriptor = Stiefel | Grassmann | Flag


def grassmann_to_flag(d: Grassmann) -> FlagSignature:
    """Rank-k projections are the one-step flag with eigenvalues (1, 0).

    k = n degenerates to the single-block signature (only the identity)."""
    if d.k == d.n:
        return FlagSignature(d.n, (), (Fraction(1),))
    return FlagSignature(d.n, (d.k,), (Fraction(1), Fraction(0)))


def descriptor_to_json(d: ManifoldDescriptor) -> dict:
    if isinstance(d, Stiefel):
        return {"type": "stiefel", "k": d.k, "n": d.n}
    if isinstance(d, Grassmann):
        return {"type": "grassmann", "k": d.k, "n": d.n}
    if isinstance(d, Flag):
        return {"type": "flag", "sig": d.sig.to_json()}
    raise TypeError(f"not a manifold descriptor: {d!r}")


def descriptor_from_json(obj: dict) -> ManifoldDescriptor:
    tag = obj.get("type")
    if tag == "stiefel":
        return Stiefel(k=obj["k"], n=obj["n"])
    if tag == "grassmann":
        return Grassmann(k=obj["k"], n=obj["n"])
    if tag == "flag":
        return Flag(sig=FlagSignature.from_json(obj["sig"]))
    raise ValueError(f"unknown manifold type {tag!r}")


def canonical_flag_matrix(sig: FlagSignature) -> np.ndarray:
    """diag(a_1 I_{n_1}, ..., a_{p+1} I_{n_{p+1}}) as floats."""
    return np.diag([float(a) for a in sig.block_vector()])


def membership(d: ManifoldDescriptor, x: np.ndarray, tol: float = 1e-9) -> bool:
    """Residual test of the defining matrix equations of d at x.

    Stiefel: X^T X = I_k.  Grassmann: X symmetric idempotent with trace k.
    Flag: X symmetric with eigenvalue multiset {a_j, multiplicity n_j}.
    Each residual is measured in Frobenius norm against tol.  Wrong shape
    raises; a non-member merely returns False.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape != d.shape:
        raise ValueError(f"expected shape {d.shape} for {type(d).__name__}, got {x.shape}")
    if isinstance(d, Stiefel):
        return float(np.linalg.norm(x.T @ x - np.eye(d.k))) <= tol
    if isinstance(d, Grassmann):
        return (
            float(np.linalg.norm(x - x.T)) <= tol
            and float(np.linalg.norm(x @ x - x)) <= tol
            and abs(float(np.trace(x)) - d.k) <= tol
        )
    if isinstance(d, Flag):
        if float(np.linalg.norm(x - x.T)) > tol:
            return False
        _, lam = sym_eig(symmetrize(x), tol=max(tol, 1e-9))
        target = sorted((float(a) for a in d.sig.block_vector()), reverse=True)
        return max(abs(l - t) for l, t in zip(lam, target)) <= tol
    raise TypeError(f"not a manifold descriptor: {d!r}")


def default_parameters(p: int) -> tuple[Fraction, ...]:
    """Strictly decreasing rational parameters a_j = 2 - (j-1)/p, ending in 0.

    For every p >= 1 these satisfy the LP-reduction rules: descending,
    a_{p+1} = 0, and a_1 = 2 < 2 a_p = 2(1 + 1/p).
    """
    if not isinstance(p, int) or p < 1:
        raise ValueError(f"need a positive integer p, got {p!r}")
    return tuple(2 - Fraction(j - 1, p) for j in range(1, p + 1)) + (Fraction(0),)


def trace_constant(sig: FlagSignature) -> Fraction:
    """Every matrix of the flag model shares this trace: sum of n_j a_j."""
    return sum(
        (a * nj for a, nj in zip(sig.params, sig.block_sizes)), start=Fraction(0)
    )


def partial_sums(sig: FlagSignature) -> tuple[Fraction, ...]:
    """Prefix sums b_1..b_n of the block eigenvalue vector; b_n is the trace."""
    out = []
    acc = Fraction(0)
    for a in sig.block_vector():
        acc += a
        out.append(acc)
    return tuple(out)


def threshold_k(sig: FlagSignature) -> int:
    """Smallest m in {1..n} with j/m <= b_j/b_n for all j <= m, exactly.

    This is the index that gates the clique reduction: the uniform clique
    vector lands inside the Schur-Horn polytope precisely when the clique
    size exceeds it.  Requires b_n > 0; raises InfeasibleError when no m
    qualifies (possible when some prefix sums are negative).
    """
    b = partial_sums(sig)
    bn = b[-1]
    if bn <= 0:
        raise PreconditionError(f"threshold needs positive total {bn}")
    for m in range(1, sig.n + 1):
        if all(Fraction(j, m) <= b[j - 1] / bn for j in range(1, m + 1)):
            return m
    raise InfeasibleError("no index in 1..n satisfies the prefix dominance predicate")


def schur_horn_membership(x, sig: FlagSignature, tol=1e-9) -> bool:
    """Is x an achievable diagonal for this flag model?  By Schur-Horn this
    is exactly majorization of x by the eigenvalue block vector."""
    x = list(x)
    if len(x) != sig.n:
        raise ValueError(f"expected a vector of length {sig.n}, got {len(x)}")
    return majorization_check(x, list(sig.block_vector()), tol)


def _random_orthonormal(n: int, k: int, seed: int) -> np.ndarray:
    # rank deficiency of a Gaussian matrix has probability zero, but the
    # contract still promises one retry on a fresh seed
    try:
        return qr_orthonormalize(XorShift64Star(seed).gaussian_matrix(n, k))
    except RankDeficiencyError:
        return qr_orthonormalize(XorShift64Star(seed + 1).gaussian_matrix(n, k))


def random_point(d: ManifoldDescriptor, seed: int) -> np.ndarray:
    """Seeded sample: Stiefel points orthonormalize a Gaussian matrix;
    Grassmann and flag points conjugate the canonical block-diagonal matrix
    by a random orthogonal matrix.  Deterministic in (d, seed)."""
    if isinstance(d, Stiefel):
        return _random_orthonormal(d.n, d.k, seed)
    if isinstance(d, Grassmann):
        sig = grassmann_to_flag(d)
    elif isinstance(d, Flag):
        sig = d.sig
    else:
        raise TypeError(f"not a manifold descriptor: {d!r}")
    q = _random_orthonormal(sig.n, sig.n, seed)
    return (q * np.array([float(a) for a in sig.block_vector()])) @ q.T


def permutohedron_vertices(sig: FlagSignature) -> list[tuple[Fraction, ...]]:
    """All distinct permutations of the block eigenvalue vector, each once.

    These are the vertices of the Schur-Horn polytope.  Listed in
    descending lexicographic order; capped at n <= 8 (at most 8! vectors).
    """
    if sig.n > PERMUTOHEDRON_MAX_N:
        raise CapacityError(
            f"vertex enumeration capped at n = {PERMUTOHEDRON_MAX_N}, got {sig.n}"
        )
    pool = sorted(sig.block_vector(), reverse=True)
    out: list[tuple[Fraction, ...]] = []

    def rec(prefix: list, remaining: list) -> None:
        if not remaining:
            out.append(tuple(prefix))
            return
        seen = set()
        for idx, a in enumerate(remaining):
            if a in seen:
                continue
            seen.add(a)
            rec(prefix + [a], remaining[:idx] + remaining[idx + 1 :])

    rec([], pool)
    return out
