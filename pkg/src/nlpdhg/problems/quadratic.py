"""Strongly convex quadratic bilinear games with analytic saddle points.

    min_x max_y  (gamma_g/2)||x||^2 + <c, x> + <y, A x> - (gamma_h/2)||y||^2 - <d, y>

Both proxes are affine and the saddle point solves a linear system, which
makes these problems the reference fixtures for the engine: schedules,
contraction bounds and ergodic estimates can all be checked against exact
values.
"""

from __future__ import annotations

import numpy as np

from ..bregman import Quadratic
from ..engine import SaddleProblem
from ..operators import DenseOperator

__all__ = ["QuadraticSaddleProblem"]


class QuadraticSaddleProblem(SaddleProblem):
    problem_id = "quadratic-game"

    def __init__(self, A, gamma_g=1.0, gamma_h_star=1.0, c=None, d=None):
        self.operator = DenseOperator(A)
        m, n = self.operator.rows, self.operator.cols
        if not (gamma_g >= 0 and gamma_h_star >= 0):
            raise ValueError("strong convexity constants must be nonnegative")
        self.gamma_g = float(gamma_g)
        self.gamma_h_star = float(gamma_h_star)
        self.c = np.zeros(n) if c is None else np.asarray(c, dtype=float)
        self.d = np.zeros(m) if d is None else np.asarray(d, dtype=float)
        self.geom_x = Quadratic(1.0)
        self.geom_y = Quadratic(1.0)
        self.op_norm = float(np.linalg.norm(self.operator.matrix, 2))

    def primal_prox(self, y_tilde, x_bar, tau):
        grad_lin = self.c + self.operator.adjoint_apply(y_tilde)
        return (x_bar - tau * grad_lin) / (1.0 + self.gamma_g * tau)

    def dual_prox(self, x_tilde, y_bar, sigma):
        return (y_bar + sigma * (self.operator.apply(x_tilde) - self.d)) / (
            1.0 + self.gamma_h_star * sigma
        )

    def lagrangian(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return float(
            0.5 * self.gamma_g * x @ x
            + self.c @ x
            + y @ self.operator.apply(x)
            - 0.5 * self.gamma_h_star * y @ y
            - self.d @ y
        )

    def saddle_point(self):
        """Solve the first-order system exactly.

        Requires gamma_g > 0 and gamma_h_star > 0 (unique saddle point).
        """
        if not (self.gamma_g > 0 and self.gamma_h_star > 0):
            raise ValueError("analytic saddle point needs both gammas positive")
        A = self.operator.matrix
        n = A.shape[1]
        # gamma_g x + c + A^T y = 0 and y = (A x - d)/gamma_h.
        M = self.gamma_g * np.eye(n) + (A.T @ A) / self.gamma_h_star
        rhs = (A.T @ self.d) / self.gamma_h_star - self.c
        x_s = np.linalg.solve(M, rhs)
        y_s = (A @ x_s - self.d) / self.gamma_h_star
        return x_s, y_s
