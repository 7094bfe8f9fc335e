"""Dense symmetric eigensolver, Householder orthonormalization, and
majorization tests.

Everything downstream leans on two properties of this module: outputs are
bit-reproducible for identical inputs (no threading, fixed sweep order,
fixed sign conventions) and every decomposition is checked against its
defining residual before being returned.  The eigensolver is cyclic Jacobi,
which is slow in the asymptotic sense but bulletproof at the sizes we care
about (n <= 512, usually n <= 30) and has no dependency on LAPACK
internals that vary across BLAS builds.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import CapacityError, NumericalError, RankDeficiencyError

SYM_EIG_MAX_N = 512
_JACOBI_SWEEP_CAP = 100
_JACOBI_OFF_TARGET = 1e-14  # relative to Frobenius norm of the input
_QR_RANK_TOL = 1e-12


def symmetrize(a: np.ndarray) -> np.ndarray:
    """(A + A^T)/2.  Exact symmetry: entry (i,j) and (j,i) are the same
    floating-point sum, so the result passes strict symmetry checks."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return (a + a.T) / 2.0


def sym_eig(s: np.ndarray, tol: float = 1e-9) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition S = Q diag(lam) Q^T of a symmetric matrix.

    Returns (q, lam) with lam sorted non-increasing and the columns of q the
    matching orthonormal eigenvectors.  Cyclic Jacobi: sweeps over the
    strict upper triangle in row order, rotating each nonzero entry away,
    until the off-diagonal Frobenius mass falls below 1e-14 times the norm
    of the input, with a hard cap of 100 sweeps.  The factorization is
    verified before returning; tol bounds the orthogonality residual and
    the relative reconstruction residual.
    """
    s = np.asarray(s, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {s.shape}")
    n = s.shape[0]
    if n > SYM_EIG_MAX_N:
        raise CapacityError(f"eigensolver capped at n = {SYM_EIG_MAX_N}, got {n}")
    if not np.array_equal(s, s.T):
        raise ValueError("matrix is not symmetric; symmetrize() it first")
    if not np.all(np.isfinite(s)):
        raise ValueError("matrix has non-finite entries")

    s_norm = float(np.linalg.norm(s))
    target = _JACOBI_OFF_TARGET * s_norm
    a = s.copy()
    q = np.eye(n)

    # summing off-diagonal squares directly; the difference-of-totals form
    # sqrt(sum(a^2) - sum(diag^2)) cancels catastrophically and cannot see
    # off-diagonal mass below sqrt(eps)*||S||
    off_mask = ~np.eye(n, dtype=bool)

    def off_norm() -> float:
        return float(np.sqrt(np.sum(a[off_mask] ** 2)))

    converged = s_norm == 0.0 or n == 1 or off_norm() <= target
    for _ in range(_JACOBI_SWEEP_CAP):
        if converged:
            break
        for p in range(n - 1):
            for r in range(p + 1, n):
                apq = a[p, r]
                if apq == 0.0:
                    continue
                tau = (a[r, r] - a[p, p]) / (2.0 * apq)
                sign = 1.0 if tau >= 0.0 else -1.0
                t = sign / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                sn = t * c
                # two-sided rotation in the (p, r) plane
                col_p = a[:, p].copy()
                col_r = a[:, r].copy()
                a[:, p] = c * col_p - sn * col_r
                a[:, r] = sn * col_p + c * col_r
                row_p = a[p, :].copy()
                row_r = a[r, :].copy()
                a[p, :] = c * row_p - sn * row_r
                a[r, :] = sn * row_p + c * row_r
                a[p, r] = 0.0
                a[r, p] = 0.0
                qc_p = q[:, p].copy()
                qc_r = q[:, r].copy()
                q[:, p] = c * qc_p - sn * qc_r
                q[:, r] = sn * qc_p + c * qc_r
        if off_norm() <= target:
            converged = True
    if not converged:
        raise NumericalError(
            f"Jacobi did not converge within {_JACOBI_SWEEP_CAP} sweeps",
            residual=off_norm(),
        )

    lam = np.diag(a).copy()
    order = np.argsort(-lam, kind="stable")
    lam = lam[order]
    q = q[:, order]

    orth_res = float(np.linalg.norm(q.T @ q - np.eye(n)))
    recon_res = float(np.linalg.norm((q * lam) @ q.T - s))
    if orth_res > tol or recon_res > tol * (1.0 + s_norm):
        raise NumericalError(
            "eigendecomposition failed its own residual check",
            residual=max(orth_res, recon_res),
        )
    return q, lam


def qr_orthonormalize(m: np.ndarray) -> np.ndarray:
    """Orthonormal basis for the column span of m via Householder QR.

    m must be n x k with k <= n and numerically full column rank.  The sign
    convention R_ii >= 0 makes the output unique, hence reproducible across
    runs.  An R diagonal entry below 1e-12 in absolute value raises
    RankDeficiencyError.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {m.shape}")
    n, k = m.shape
    if k > n:
        raise ValueError(f"need at least as many rows as columns, got {n}x{k}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")

    r = m.copy()
    vs = []
    for j in range(k):
        x = r[j:, j].copy()
        alpha = float(np.linalg.norm(x))
        if alpha < _QR_RANK_TOL:
            raise RankDeficiencyError(
                f"column {j + 1} numerically dependent on earlier columns",
                residual=alpha,
            )
        sign = 1.0 if x[0] >= 0.0 else -1.0
        x[0] += sign * alpha
        v = x / np.linalg.norm(x)
        vs.append(v)
        r[j:, j:] -= 2.0 * np.outer(v, v @ r[j:, j:])
    for j in range(k):
        if abs(r[j, j]) < _QR_RANK_TOL:
            raise RankDeficiencyError(
                f"R diagonal entry {j + 1} below rank tolerance",
                residual=float(abs(r[j, j])),
            )

    # apply the reflectors to the first k columns of I to get thin Q
    y = np.eye(n, k)
    for j in reversed(range(k)):
        v = vs[j]
        y[j:, :] -= 2.0 * np.outer(v, v @ y[j:, :])
    # flip signs so the implicit R has a nonnegative diagonal
    for j in range(k):
        if r[j, j] < 0.0:
            y[:, j] = -y[:, j]
    return y


def diag_vector(x: np.ndarray) -> np.ndarray:
    """First min(rows, cols) diagonal entries, as a fresh 1-d array."""
    x = np.asarray(x)
    if x.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {x.shape}")
    return np.diagonal(x).copy()


def _as_number_list(v) -> list:
    out = []
    for entry in v:
        if isinstance(entry, (Fraction, int)):
            out.append(entry)
        elif isinstance(entry, float) or isinstance(entry, np.floating):
            out.append(float(entry))
        elif isinstance(entry, np.integer):
            out.append(int(entry))
        else:
            raise TypeError(f"unsupported entry type {type(entry).__name__}")
    return out


def majorization_check(x, c, tol=1e-9) -> bool:
    """True iff x is majorized by c: equal totals (within tol) and every
    descending prefix sum of x is at most the matching prefix sum of c
    plus tol.  Works on exact rationals (pass tol = 0 for a crisp answer)
    and on floats alike; the two vectors must have equal length.
    """
    xs = _as_number_list(x)
    cs = _as_number_list(c)
    if len(xs) != len(cs):
        raise ValueError(f"length mismatch: {len(xs)} vs {len(cs)}")
    xs.sort(reverse=True)
    cs.sort(reverse=True)
    if abs(sum(xs) - sum(cs)) > tol:
        return False
    px = 0
    pc = 0
    for xv, cv in zip(xs, cs):
        px = px + xv
        pc = pc + cv
        if px > pc + tol:
            return False
    return True
