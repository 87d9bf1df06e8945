"""Generic saddle-point iteration engine.

A problem supplies two Bregman proximal maps and a linear operator; the
engine alternates them according to one of the step-size regimes and tracks
ergodic averages, a residual trace, and an optional Lyapunov diagnostic.

A solve run is single-threaded and deterministic; problems, schedules and
reports can move freely between threads, and independent solves may run
concurrently.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SaddleProblem",
    "IterateState",
    "ErgodicAccumulator",
    "StoppingRule",
    "SolveReport",
    "step_constant",
    "step_acc_primal",
    "step_acc_dual",
    "step_linear_rate",
    "delta_diag",
    "run",
]


class SaddleProblem:
    """Contract for min-max problems of the form g(x) + <y, A x> - h*(y).

    Concrete problems provide:

    primal_prox(y_tilde, x_bar, tau)
        argmin_x { g(x) + <y_tilde, A x> + (1/tau) D_X(x, x_bar) }
    dual_prox(x_tilde, y_bar, sigma)
        argmax_y { -h*(y) + <y, A x_tilde> - (1/sigma) D_Y(y, y_bar) }

    together with ``operator`` (apply/adjoint_apply), ``op_norm`` (the norm
    compatible with the chosen geometries), strong-convexity constants
    ``gamma_g`` and ``gamma_h_star`` (0 when the assumption is absent), and
    the geometries ``geom_x``, ``geom_y``. Prox outputs must land in the
    geometry domain interiors.
    """

    problem_id = "saddle"
    gamma_g = 0.0
    gamma_h_star = 0.0

    def primal_prox(self, y_tilde, x_bar, tau):
        raise NotImplementedError

    def dual_prox(self, x_tilde, y_bar, sigma):
        raise NotImplementedError


@dataclass
class IterateState:
    """Current and previous primal/dual points."""

    x: np.ndarray
    x_prev: np.ndarray
    y: np.ndarray
    y_prev: np.ndarray
    k: int = 0

    @classmethod
    def initial(cls, x0, y0):
        x0 = np.asarray(x0, dtype=float)
        y0 = np.asarray(y0, dtype=float)
        return cls(x=x0.copy(), x_prev=x0.copy(), y=y0.copy(), y_prev=y0.copy(), k=0)


class ErgodicAccumulator:
    """Weighted running averages with joint rescaling.

    Stores running weighted sums, never per-iterate history, so memory stays
    O(m + n) for any horizon. Geometric weights (the linear-rate regime) are
    accumulated through their growth factor and everything is rescaled by the
    current weight once it exceeds ``RESCALE_AT``; averages are invariant
    under the common rescaling.
    """

    RESCALE_AT = 1e120

    def __init__(self, dim_x, dim_y):
        self.sum_x = np.zeros(dim_x)
        self.sum_y = np.zeros(dim_y)
        self.total = 0.0
        self.weight = 1.0

    def add(self, x, y, growth):
        self.weight *= growth
        if self.weight > self.RESCALE_AT:
            inv = 1.0 / self.weight
            self.sum_x *= inv
            self.sum_y *= inv
            self.total *= inv
            self.weight = 1.0
        self.sum_x += self.weight * x
        self.sum_y += self.weight * y
        self.total += self.weight

    @property
    def x_avg(self):
        return self.sum_x / self.total

    @property
    def y_avg(self):
        return self.sum_y / self.total


@dataclass
class StoppingRule:
    """Conjunction of convergence criteria, checked after every iteration.

    Criteria left at ``None`` are inactive; the rule fires when every active
    criterion holds simultaneously. ``max_iters`` alone never marks a run as
    converged. Relative changes compare l2 norms, e.g.
    ||y_{k+1} - y_k|| <= tol * ||y_{k+1}||.
    """

    max_iters: int = 10000
    primal_rel_change: float | None = None
    dual_rel_change: float | None = None
    ergodic_primal_rel_change: float | None = None
    ergodic_dual_rel_change: float | None = None
    residual_fn: object = None
    residual_tol: float | None = None

    def active(self):
        return any(
            v is not None
            for v in (
                self.primal_rel_change,
                self.dual_rel_change,
                self.ergodic_primal_rel_change,
                self.ergodic_dual_rel_change,
                self.residual_tol,
            )
        )


def _rel_change(new, old):
    denom = np.linalg.norm(new)
    if denom == 0.0:
        return float(np.linalg.norm(new - old))
    return float(np.linalg.norm(new - old) / denom)


def check_stop(stop_on, regular_ok, ergodic_ok):
    """Combine the regular and ergodic convergence flags per ``stop_on``."""
    if stop_on == "regular":
        return regular_ok
    if stop_on == "ergodic":
        return ergodic_ok
    if stop_on == "both":
        return regular_ok and ergodic_ok
    raise ValueError(f"stop_on must be 'regular', 'ergodic' or 'both', got {stop_on!r}")


@dataclass
class SolveReport:
    problem_id: str
    regime: str
    k: int
    converged: bool
    wall_ms: float
    residual_trace: list = field(default_factory=list)
    terminal_primal_norm: float = 0.0
    terminal_dual_norm: float = 0.0
    x: np.ndarray | None = None
    y: np.ndarray | None = None
    x_ergodic: np.ndarray | None = None
    y_ergodic: np.ndarray | None = None
    deltas: list | None = None

    def to_json(self):
        return json.dumps(
            {
                "problem_id": self.problem_id,
                "regime": self.regime,
                "k": self.k,
                "converged": self.converged,
                "wall_ms": self.wall_ms,
                "residual_trace": [[int(k), float(v)] for k, v in self.residual_trace],
                "terminal_primal_norm": self.terminal_primal_norm,
                "terminal_dual_norm": self.terminal_dual_norm,
            }
        )


def step_constant(problem, state, tau, sigma):
    """One iteration of the basic method: x-prox at y_k, then y-prox at the
    overrelaxed point A(2 x_{k+1} - x_k)."""
    x_new = problem.primal_prox(state.y, state.x, tau)
    y_new = problem.dual_prox(2.0 * x_new - state.x, state.y, sigma)
    return IterateState(x=x_new, x_prev=state.x, y=y_new, y_prev=state.y, k=state.k + 1)


def step_acc_primal(problem, state, schedule):
    """Accelerated step for gamma_g > 0: the x-prox sees the extrapolated
    dual point y_k + theta_k (y_k - y_{k-1}). Advances the schedule."""
    y_tilde = state.y + schedule.theta * (state.y - state.y_prev)
    x_new = problem.primal_prox(y_tilde, state.x, schedule.tau)
    y_new = problem.dual_prox(x_new, state.y, schedule.sigma)
    schedule.advance()
    return IterateState(x=x_new, x_prev=state.x, y=y_new, y_prev=state.y, k=state.k + 1)


def step_acc_dual(problem, state, schedule):
    """Mirror of the accelerated primal step: the y-prox sees the
    extrapolated primal point, then the x-prox uses the fresh dual point."""
    x_tilde = state.x + schedule.theta * (state.x - state.x_prev)
    y_new = problem.dual_prox(x_tilde, state.y, schedule.sigma)
    x_new = problem.primal_prox(y_new, state.x, schedule.tau)
    schedule.advance()
    return IterateState(x=x_new, x_prev=state.x, y=y_new, y_prev=state.y, k=state.k + 1)


def step_linear_rate(problem, state, theta, tau, sigma, order="x-first"):
    """One linear-rate iteration with fixed parameters.

    x-first extrapolates the dual history into the x-prox; y-first
    extrapolates the primal history into the y-prox.
    """
    if order == "x-first":
        y_tilde = state.y + theta * (state.y - state.y_prev)
        x_new = problem.primal_prox(y_tilde, state.x, tau)
        y_new = problem.dual_prox(x_new, state.y, sigma)
    elif order == "y-first":
        x_tilde = state.x + theta * (state.x - state.x_prev)
        y_new = problem.dual_prox(x_tilde, state.y, sigma)
        x_new = problem.primal_prox(y_new, state.x, tau)
    else:
        raise ValueError(f"order must be 'x-first' or 'y-first', got {order!r}")
    return IterateState(x=x_new, x_prev=state.x, y=y_new, y_prev=state.y, k=state.k + 1)


def delta_diag(problem, state, schedule, x_ref, y_ref):
    """Regime-specific Lyapunov quantity Delta_k at a reference point.

    The schedule must be aligned with the state: its current (theta, tau,
    sigma) are the index-k parameters. At a saddle-point reference the value
    is nonnegative and contracts per the regime's guarantee; at arbitrary
    references the bilinear terms can make it negative.
    """
    A = problem.operator
    gx = problem.geom_x
    gy = problem.geom_y
    tau, sigma, theta = schedule.tau, schedule.sigma, schedule.theta
    d_x = gx.divergence(x_ref, state.x) / tau
    d_y = gy.divergence(y_ref, state.y) / sigma
    regime = schedule.regime
    if regime == "constant":
        cross = float((y_ref - state.y) @ A.apply(x_ref - state.x))
        return d_x + d_y - cross
    if regime == "acc-primal":
        hist = gy.divergence(state.y, state.y_prev) / sigma
        cross = theta * float((state.y - state.y_prev) @ A.apply(x_ref - state.x))
        return d_x + d_y + hist + cross
    if regime == "acc-dual":
        hist = gx.divergence(state.x, state.x_prev) / tau
        cross = theta * float((y_ref - state.y) @ A.apply(state.x - state.x_prev))
        return d_x + d_y + hist + cross
    if regime == "linear-rate-x-first":
        hist = theta * gy.divergence(state.y, state.y_prev) / sigma
        cross = theta * float((state.y - state.y_prev) @ A.apply(x_ref - state.x))
        return d_x + d_y + hist + cross
    if regime == "linear-rate-y-first":
        hist = theta * gx.divergence(state.x, state.x_prev) / tau
        cross = theta * float((y_ref - state.y) @ A.apply(state.x - state.x_prev))
        return d_x + d_y + hist + cross
    raise ValueError(f"unknown regime {regime!r}")


def _one_step(problem, state, schedule):
    regime = schedule.regime
    if regime == "constant":
        new = step_constant(problem, state, schedule.tau, schedule.sigma)
        schedule.advance()
        return new
    if regime == "acc-primal":
        return step_acc_primal(problem, state, schedule)
    if regime == "acc-dual":
        return step_acc_dual(problem, state, schedule)
    if regime.startswith("linear-rate-"):
        new = step_linear_rate(
            problem, state, schedule.theta, schedule.tau, schedule.sigma, order=schedule.order
        )
        schedule.advance()
        return new
    raise ValueError(f"unknown regime {regime!r}")


def run(problem, schedule, x0, y0, stop=None, delta_ref=None, problem_id=None):
    """Iterate until the stopping rule fires or max_iters is exhausted.

    ``delta_ref``, when given as a pair (x_ref, y_ref), records the
    regime-appropriate Delta_k at every iterate (this costs extra divergence
    evaluations per step, so it is opt-in). Exhausting max_iters flags the
    report as non-converged; a non-finite iterate raises.
    """
    if stop is None:
        stop = StoppingRule()
    state = IterateState.initial(x0, y0)
    acc = ErgodicAccumulator(state.x.shape[0], state.y.shape[0])
    deltas = [] if delta_ref is not None else None
    trace = []
    t_start = time.perf_counter()
    converged = False
    x_erg_prev = None
    y_erg_prev = None
    for _ in range(stop.max_iters):
        growth = schedule.ergodic_growth()
        state = _one_step(problem, state, schedule)
        if not (np.all(np.isfinite(state.x)) and np.all(np.isfinite(state.y))):
            raise RuntimeError(f"non-finite iterate at k={state.k}")
        acc.add(state.x, state.y, growth)

        if stop.residual_fn is not None:
            monitored = float(stop.residual_fn(state.x, state.y))
        else:
            monitored = _rel_change(state.y, state.y_prev)
        trace.append((state.k, monitored))
        if deltas is not None:
            deltas.append((state.k, delta_diag(problem, state, schedule, *delta_ref)))

        if stop.active():
            ok = True
            if stop.primal_rel_change is not None:
                ok = ok and _rel_change(state.x, state.x_prev) <= stop.primal_rel_change
            if stop.dual_rel_change is not None:
                ok = ok and _rel_change(state.y, state.y_prev) <= stop.dual_rel_change
            if stop.ergodic_primal_rel_change is not None:
                ok = ok and (
                    x_erg_prev is not None
                    and _rel_change(acc.x_avg, x_erg_prev) <= stop.ergodic_primal_rel_change
                )
            if stop.ergodic_dual_rel_change is not None:
                ok = ok and (
                    y_erg_prev is not None
                    and _rel_change(acc.y_avg, y_erg_prev) <= stop.ergodic_dual_rel_change
                )
            if stop.residual_tol is not None:
                ok = ok and monitored <= stop.residual_tol
            if ok:
                converged = True
        if stop.ergodic_primal_rel_change is not None:
            x_erg_prev = acc.x_avg.copy()
        if stop.ergodic_dual_rel_change is not None:
            y_erg_prev = acc.y_avg.copy()
        if converged:
            break
    wall_ms = 1000.0 * (time.perf_counter() - t_start)
    has_avg = acc.total > 0.0
    return SolveReport(
        problem_id=problem_id or getattr(problem, "problem_id", "saddle"),
        regime=schedule.regime,
        k=state.k,
        converged=converged,
        wall_ms=wall_ms,
        residual_trace=trace,
        terminal_primal_norm=float(np.linalg.norm(state.x)),
        terminal_dual_norm=float(np.linalg.norm(state.y)),
        x=state.x,
        y=state.y,
        x_ergodic=acc.x_avg if has_avg else state.x.copy(),
        y_ergodic=acc.y_avg if has_avg else state.y.copy(),
        deltas=deltas,
    )
