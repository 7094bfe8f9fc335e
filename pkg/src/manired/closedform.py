"""Closed-form solver for unconstrained linear objectives over flag
manifolds.

maximize tr(A^T X) over X = Q diag(a_1 I_{n_1}, ..., a_{p+1} I_{n_{p+1}}) Q^T

Since tr(A^T X) = tr(((A+A^T)/2) X) and X has a fixed eigenvalue multiset,
the maximum couples the eigenvalues of the symmetrized objective with the
block eigenvalue vector: sort both descending and take the dot product
(rearrangement inequality).  The optimizer aligns the eigenbases, so the
whole problem costs one symmetric eigendecomposition.  A brute-force
permutation oracle over the Schur-Horn polytope vertices validates the
closed form at small n.
"""

from __future__ import annotations

import numpy as np

from .errors import PreconditionError
from .manifolds import (
    Flag,
    FlagSignature,
    membership,
    permutohedron_vertices,
)
from .matrixcore import sym_eig, symmetrize
from .reductions import LinearInstance


def _descending_block_vector(sig: FlagSignature) -> np.ndarray:
    params = sig.params
    if any(params[i] <= params[i + 1] for i in range(len(params) - 1)):
        raise PreconditionError(
            f"parameters must be strictly decreasing, got {params}"
        )
    return np.array([float(a) for a in sig.block_vector()])


def solve_flag_lp(a: np.ndarray, sig: FlagSignature, tol: float = 1e-9):
    """Closed-form maximum of tr(A^T X) over the flag model of sig.

    Returns (value, x_star).  Requires strictly decreasing parameters (the
    last one need not be zero).  The result is checked before returning:
    x_star must pass flag membership and reproduce the value as tr(A^T
    x_star) within tol*(1+||A||_F).  Within tied eigenvalues of (A+A^T)/2
    the maximizer is not unique; whichever eigenbasis the Jacobi solver
    returns is used, and the value is unaffected.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] != sig.n:
        raise ValueError(f"matrix is {a.shape[0]}x{a.shape[0]}, signature has n={sig.n}")
    c = _descending_block_vector(sig)
    s = symmetrize(a)
    q, lam = sym_eig(s, tol=max(tol, 1e-10))
    value = float(lam @ c)
    x_star = (q * c) @ q.T

    scale = 1.0 + float(np.linalg.norm(a))
    obj_residual = abs(float(np.sum(a * x_star)) - value)
    if obj_residual > tol * scale:
        raise PreconditionError(
            f"closed-form value failed its own consistency check: {obj_residual}"
        )
    if not membership(Flag(sig=sig), x_star, max(tol, 1e-9) * scale):
        raise PreconditionError("closed-form optimizer failed flag membership")
    return value, x_star


def permutation_oracle_flag_lp(a: np.ndarray, sig: FlagSignature) -> float:
    """Brute-force reference for solve_flag_lp, n <= 8.

    The maximum over the flag of tr(S X) equals the maximum over diagonal
    arrangements: eigendecompose the symmetrized objective and score every
    distinct permutation of the block eigenvalue vector against the
    eigenvalues.  Exact given the computed eigenvalues.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] != sig.n:
        raise ValueError(f"matrix is {a.shape[0]}x{a.shape[0]}, signature has n={sig.n}")
    _, lam = sym_eig(symmetrize(a), tol=1e-10)
    vertices = np.array(
        [[float(entry) for entry in v] for v in permutohedron_vertices(sig)]
    )
    return float(np.max(vertices @ lam))


def build_unconstrained_flag_lp(a: np.ndarray, sig: FlagSignature) -> LinearInstance:
    """Package a dense objective matrix as an unconstrained LinearInstance
    over the flag manifold (the family solve_flag_lp covers), so it can be
    serialized and fed to the gradient-ascent cross-check."""
    a = np.asarray(a, dtype=float)
    if a.shape != (sig.n, sig.n):
        raise ValueError(f"expected shape {(sig.n, sig.n)}, got {a.shape}")
    objective = tuple(
        (i + 1, j + 1, a[i, j])
        for i in range(sig.n)
        for j in range(sig.n)
        if a[i, j] != 0.0
    )
    return LinearInstance(manifold=Flag(sig=sig), objective=objective, constraints=())


def flag_lp_residuals(a: np.ndarray, sig: FlagSignature, value: float, x_star: np.ndarray) -> dict:
    """Diagnostics for reporting: objective mismatch and symmetry residual."""
    a = np.asarray(a, dtype=float)
    x_star = np.asarray(x_star, dtype=float)
    return {
        "objective": abs(float(np.sum(a * x_star)) - value),
        "symmetry": float(np.linalg.norm(x_star - x_star.T)),
    }
