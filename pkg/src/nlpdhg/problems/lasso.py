"""The Lasso as a saddle-point problem.

    min_x  lam ||x||_1 + (1/2m) ||A x - b||_2^2

pairs with the dual variable y through

    min_x max_y  lam ||x||_1 + <y, A x - b> - (m/2) ||y||_2^2.

Both geometries are Euclidean (the dual one scaled by m), the dual part is
1-strongly convex relative to its geometry, and the method of choice is the
accelerated dual schedule with tau0 = 1/(2 ||A||^2) and sigma0 = 2, where
||A|| is the maximum l2 norm of a row of A (the operator norm induced by the
Euclidean primal and the l1-compatible dual pairing). The primal prox is
soft thresholding, so iterates carry exact zeros, and the optimality
conditions read y = (A x - b)/m together with -A^T y in lam * d||x||_1.
"""

from __future__ import annotations

import time

import numpy as np

from ..bregman import Quadratic
from ..engine import (
    ErgodicAccumulator,
    IterateState,
    SaddleProblem,
    SolveReport,
    _rel_change,
    check_stop,
)
from ..operators import DenseOperator
from ..schedules import AccDualSchedule

__all__ = [
    "shrink1",
    "LassoProblem",
    "lasso_step",
    "lasso_optimality_residual",
    "solve_lasso",
]


def shrink1(x, beta):
    """Componentwise soft threshold, the prox of beta*||.||_1.

    Entries with |x_j| <= beta come out as exact zeros.
    """
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    x = np.asarray(x, dtype=float)
    return np.sign(x) * np.maximum(np.abs(x) - beta, 0.0)


class LassoProblem(SaddleProblem):
    problem_id = "lasso"

    def __init__(self, A, b, lam):
        if not lam > 0:
            raise ValueError(f"lam must be positive, got {lam}")
        self.operator = DenseOperator(A)
        self.A = self.operator.matrix
        self.m, self.n = self.A.shape
        b = np.asarray(b, dtype=float)
        if b.shape != (self.m,):
            raise ValueError(f"b must have shape ({self.m},), got {b.shape}")
        self.b = b
        self.lam = float(lam)
        self.op_norm = float(np.sqrt(np.max(self.operator.row_norms_sq())))
        self.geom_x = Quadratic(1.0)
        self.geom_y = Quadratic(float(self.m))
        self.gamma_g = 0.0
        self.gamma_h_star = 1.0

    def primal_prox(self, y_tilde, x_bar, tau):
        return shrink1(x_bar - tau * self.operator.adjoint_apply(y_tilde), self.lam * tau)

    def dual_prox(self, x_tilde, y_bar, sigma):
        return (y_bar + sigma * (self.operator.apply(x_tilde) - self.b) / self.m) / (1.0 + sigma)

    def objective(self, x):
        r = self.operator.apply(np.asarray(x, dtype=float)) - self.b
        return float(self.lam * np.sum(np.abs(x)) + 0.5 / self.m * (r @ r))

    def default_init(self):
        return np.zeros(self.n), self.b.copy()

    def default_tau0(self):
        return 1.0 / (2.0 * self.op_norm**2)


def lasso_step(problem, state, schedule):
    """One accelerated-dual iteration: dual averaging step at the
    extrapolated primal point, then soft thresholding."""
    if schedule.regime != "acc-dual":
        raise ValueError(f"lasso steps require the acc-dual regime, got {schedule.regime}")
    sigma, tau, theta = schedule.sigma, schedule.tau, schedule.theta
    x_tilde = state.x + theta * (state.x - state.x_prev)
    y_new = problem.dual_prox(x_tilde, state.y, sigma)
    x_new = problem.primal_prox(y_new, state.x, tau)
    schedule.advance()
    return IterateState(x=x_new, x_prev=state.x, y=y_new, y_prev=state.y, k=state.k + 1)


def lasso_optimality_residual(problem, x, y, tol=0.0):
    """Distance from the pair of optimality conditions.

    Returns ||m y - (A x - b)||_2 plus the worst subgradient violation:
    |[A^T y]_j + lam sign(x_j)| on the support and max(|[A^T y]_j| - lam, 0)
    off it, each reduced by ``tol`` before counting.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r_fit = float(np.linalg.norm(problem.m * y - (problem.operator.apply(x) - problem.b)))
    aty = problem.operator.adjoint_apply(y)
    on = x != 0.0
    viol = np.maximum(np.abs(aty) - problem.lam, 0.0)
    viol[on] = np.abs(aty[on] + problem.lam * np.sign(x[on]))
    r_sub = float(np.max(np.maximum(viol - tol, 0.0))) if viol.size else 0.0
    return r_fit + r_sub


def solve_lasso(
    problem,
    x0=None,
    y0=None,
    tau0=None,
    theta0=0.0,
    tol=1e-6,
    max_iters=100000,
    residual_fn=None,
    residual_tol=None,
    stop_on="both",
):
    """Accelerated-dual solve from x0 = 0, y0 = b by default.

    Stops when the relative dual change and its ergodic counterpart both
    fall below ``tol`` (or on a residual callback).
    """
    if x0 is None or y0 is None:
        dx0, dy0 = problem.default_init()
        x0 = dx0 if x0 is None else np.asarray(x0, dtype=float)
        y0 = dy0 if y0 is None else np.asarray(y0, dtype=float)
    schedule = AccDualSchedule(
        problem.gamma_h_star,
        problem.op_norm,
        tau0=problem.default_tau0() if tau0 is None else tau0,
        theta0=theta0,
    )
    state = IterateState.initial(x0, y0)
    acc = ErgodicAccumulator(problem.n, problem.m)
    trace = []
    converged = False
    y_erg_prev = None
    t0 = time.perf_counter()
    for _ in range(max_iters):
        growth = schedule.ergodic_growth()
        state = lasso_step(problem, state, schedule)
        acc.add(state.x, state.y, growth)
        if residual_fn is not None:
            monitored = float(residual_fn(state.x, state.y))
            trace.append((state.k, monitored))
            converged = monitored <= residual_tol
        else:
            monitored = _rel_change(state.y, state.y_prev)
            trace.append((state.k, monitored))
            erg_ok = y_erg_prev is not None and _rel_change(acc.y_avg, y_erg_prev) <= tol
            converged = check_stop(stop_on, monitored <= tol, erg_ok)
            y_erg_prev = acc.y_avg.copy()
        if converged:
            break
    wall_ms = 1000.0 * (time.perf_counter() - t0)
    return SolveReport(
        problem_id=problem.problem_id,
        regime=schedule.regime,
        k=state.k,
        converged=converged,
        wall_ms=wall_ms,
        residual_trace=trace,
        terminal_primal_norm=float(np.linalg.norm(state.x)),
        terminal_dual_norm=float(np.linalg.norm(state.y)),
        x=state.x,
        y=state.y,
        x_ergodic=acc.x_avg if acc.total > 0 else state.x.copy(),
        y_ergodic=acc.y_avg if acc.total > 0 else state.y.copy(),
    )
