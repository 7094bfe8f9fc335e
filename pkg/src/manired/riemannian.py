"""Riemannian gradient ascent: the structure-free numerical cross-check.

The exact solvers in `reductions` and `closedform` lean on structural
facts about the instances they build.  This module knows none of that: it
runs plain projected-gradient ascent with a QR retraction from random
starting points and reports what it finds.  Agreement with the exact
optima (never exceeding them, usually attaining them) is evidence the
structural shortcuts are right.

Two ascent spaces cover all unconstrained families:

  * Stiefel instances ascend on X in V(k,n) directly.
  * Flag (and Grassmann-as-flag) instances ascend on the orthogonal factor
    Q in V(n,n) of the parametrization X = Q D Q^T with D the fixed block
    eigenvalue matrix, so every iterate has the exact eigenvalue multiset.

Constrained instances (the feasibility families) are refused.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RankDeficiencyError, UnsupportedInstanceError
from .manifolds import (
    Flag,
    Grassmann,
    Stiefel,
    grassmann_to_flag,
    random_point,
)
from .matrixcore import qr_orthonormalize
from .reductions import LinearInstance, QuadraticInstance
from .rng import derive


@dataclass(frozen=True)
class AscentConfig:
    step: float = 0.1
    max_iters: int = 500
    grad_tol: float = 1e-8
    restarts: int = 50
    seed: int = 0

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError(f"step must be positive, got {self.step}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.restarts < 1:
            raise ValueError(f"restarts must be >= 1, got {self.restarts}")
        if self.grad_tol < 0:
            raise ValueError(f"grad_tol must be >= 0, got {self.grad_tol}")


@dataclass
class RestartResult:
    final_value: float
    iterations: int
    grad_norm: float
    feasibility_residual: float
    values: tuple[float, ...]  # objective after each accepted step

    def to_json(self) -> dict:
        return {
            "final_value": self.final_value,
            "iterations": self.iterations,
            "grad_norm": self.grad_norm,
            "feasibility_residual": self.feasibility_residual,
        }


@dataclass
class AscentTrace:
    restarts: tuple[RestartResult, ...]
    best_value: float
    best_point: np.ndarray
    best_restart: int

    def to_json(self) -> dict:
        return {
            "restarts": [r.to_json() for r in self.restarts],
            "best": {
                "value": self.best_value,
                "restart": self.best_restart,
                "point": [list(map(float, row)) for row in np.asarray(self.best_point)],
            },
        }


def stiefel_tangent_project(x: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Project an ambient gradient onto the tangent space at x (X^T X = I):
    G - X (X^T G + G^T X)/2.  The result Z satisfies X^T Z + Z^T X = 0."""
    xtg = x.T @ g
    return g - x @ ((xtg + xtg.T) / 2.0)


def qr_retract(x: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Step along v and pull back to the manifold by QR orthonormalization.
    First-order consistent with the geodesic; sign convention makes it
    deterministic."""
    return qr_orthonormalize(x + v)


@dataclass(frozen=True)
class AscentProblem:
    """Unconstrained objective prepared for ascent.

    The ascent variable always lives on a Stiefel manifold (`space`);
    `to_point` maps the variable to the instance's manifold point and
    `feasibility` measures the variable's own orthogonality residual.
    """

    space: Stiefel
    f: object
    egrad: object
    to_point: object
    feasibility: object


def _dense_objective(inst: LinearInstance) -> np.ndarray:
    rows, cols = inst.manifold.shape
    c = np.zeros((rows, cols))
    for i, j, coeff in inst.objective:
        c[i - 1, j - 1] += float(coeff)
    return c


def instance_objective(inst) -> AscentProblem:
    """Set up f, its Euclidean gradient, and the ascent space for an
    unconstrained instance; refuses constrained ones."""
    if isinstance(inst, LinearInstance):
        if inst.constraints:
            raise UnsupportedInstanceError(
                "gradient ascent covers only unconstrained objectives; "
                "constrained feasibility families have exact solvers"
            )
        man = inst.manifold
        c = _dense_objective(inst)
        if isinstance(man, Stiefel):
            return AscentProblem(
                space=man,
                f=lambda x: float(np.sum(c * x)),
                egrad=lambda x: c,
                to_point=lambda x: x,
                feasibility=_orth_residual,
            )
        sig = grassmann_to_flag(man) if isinstance(man, Grassmann) else man.sig
        dvec = np.array([float(a) for a in sig.block_vector()])
        cs = c + c.T

        def h(q):
            x = (q * dvec) @ q.T
            return float(np.sum(c * x))

        def egrad(q):
            # d/dQ tr(C^T Q D Q^T) = (C + C^T) Q D
            return (cs @ q) * dvec

        return AscentProblem(
            space=Stiefel(k=sig.n, n=sig.n),
            f=h,
            egrad=egrad,
            to_point=lambda q: (q * dvec) @ q.T,
            feasibility=_orth_residual,
        )
    if isinstance(inst, QuadraticInstance):
        man = inst.manifold
        w = np.array(inst.w, dtype=float)
        if isinstance(man, Stiefel):
            def f(x):
                d = np.diagonal(x)
                return float(d @ w @ d)

            def egrad(x):
                g = np.zeros_like(x)
                u = 2.0 * (w @ np.diagonal(x))
                for i in range(man.k):
                    g[i, i] = u[i]
                return g

            return AscentProblem(
                space=man, f=f, egrad=egrad, to_point=lambda x: x,
                feasibility=_orth_residual,
            )
        sig = grassmann_to_flag(man) if isinstance(man, Grassmann) else man.sig
        dvec = np.array([float(a) for a in sig.block_vector()])

        def h(q):
            d = np.diagonal((q * dvec) @ q.T)
            return float(d @ w @ d)

        def egrad_q(q):
            x = (q * dvec) @ q.T
            u = 4.0 * (w @ np.diagonal(x))
            return (u[:, None] * q) * dvec

        return AscentProblem(
            space=Stiefel(k=sig.n, n=sig.n),
            f=h,
            egrad=egrad_q,
            to_point=lambda q: (q * dvec) @ q.T,
            feasibility=_orth_residual,
        )
    raise TypeError(f"not an instance: {inst!r}")


def _orth_residual(x: np.ndarray) -> float:
    return float(np.linalg.norm(x.T @ x - np.eye(x.shape[1])))


_MAX_HALVINGS = 60


def _ascend_once(
    problem: AscentProblem, x0: np.ndarray, cfg: AscentConfig
) -> tuple[RestartResult, np.ndarray]:
    x = x0
    fx = problem.f(x)
    values = [fx]
    for _ in range(cfg.max_iters):
        xi = stiefel_tangent_project(x, problem.egrad(x))
        grad_norm = float(np.linalg.norm(xi))
        if grad_norm <= cfg.grad_tol:
            break
        step = cfg.step
        accepted = None
        for _ in range(_MAX_HALVINGS):
            try:
                cand = qr_retract(x, step * xi)
            except RankDeficiencyError:
                step *= 0.5
                continue
            fc = problem.f(cand)
            if fc > fx:
                accepted = (cand, fc)
                break
            step *= 0.5
        if accepted is None:
            break
        x, fx = accepted
        values.append(fx)
    final_grad = float(
        np.linalg.norm(stiefel_tangent_project(x, problem.egrad(x)))
    )
    return RestartResult(
        final_value=fx,
        iterations=len(values) - 1,
        grad_norm=final_grad,
        feasibility_residual=problem.feasibility(x),
        values=tuple(values),
    ), x


def ascend(inst, cfg: AscentConfig = AscentConfig()) -> AscentTrace:
    """Multi-start projected-gradient ascent on an unconstrained instance.

    Each restart draws its starting point from an independent seeded
    stream (derive(cfg.seed, restart index)), runs backtracking ascent
    (step reset each iteration, halved until the objective increases), and
    stops at grad_tol, max_iters, or a fully stalled line search.  The
    trace holds per-restart summaries and the best point mapped back to
    the instance's manifold; results are independent of restart execution
    order.
    """
    problem = instance_objective(inst)
    results = []
    best_idx = -1
    best = None
    for r in range(cfg.restarts):
        x0 = random_point(problem.space, derive(cfg.seed, r))
        result, x_final = _ascend_once(problem, x0, cfg)
        results.append(result)
        if best is None or result.final_value > best[0]:
            best = (result.final_value, x_final)
            best_idx = r
    return AscentTrace(
        restarts=tuple(results),
        best_value=best[0],
        best_point=problem.to_point(best[1]),
        best_restart=best_idx,
    )
