"""Step-size schedules for the PDHG iteration family.

Four regimes:

* ``ConstantSchedule`` -- fixed (tau, sigma) with tau*sigma*||A||^2 < 1.
* ``AccPrimalSchedule`` -- for a strongly convex primal part (gamma_g > 0);
  theta_{k+1} = 1/sqrt(1 + gamma_g tau_k), tau shrinks, sigma grows.
* ``AccDualSchedule`` -- mirror regime for a strongly convex dual part
  (gamma_h_star > 0); tau grows, sigma shrinks.
* ``LinearRateSchedule`` -- fixed (theta, tau, sigma) from
  ``linear_rate_params`` when both parts are strongly convex; applied either
  x-first (dual extrapolation) or y-first (primal extrapolation).

The accelerated schedules keep tau_k * sigma_k * ||A||^2 = 1 for every k; the
linear-rate parameters satisfy tau * sigma * theta * ||A||^2 = 1.
"""

from __future__ import annotations

import math

__all__ = [
    "ConstantSchedule",
    "AccPrimalSchedule",
    "AccDualSchedule",
    "LinearRateSchedule",
    "linear_rate_params",
]


def linear_rate_params(gamma_g, gamma_h_star, op_norm):
    """Contraction factor and step sizes for the linear-rate regime.

    Returns (theta, tau, sigma) with theta in (0, 1) and
    tau * sigma * theta * op_norm**2 == 1 up to roundoff. The expression for
    theta is rationalized so no cancellation occurs when
    gamma_g * gamma_h_star >> op_norm**2 (theta near 0) or << (theta near 1).
    """
    if not (gamma_g > 0 and gamma_h_star > 0 and op_norm > 0):
        raise ValueError(
            f"all inputs must be positive, got gamma_g={gamma_g}, "
            f"gamma_h_star={gamma_h_star}, op_norm={op_norm}"
        )
    c = gamma_g * gamma_h_star / op_norm**2
    s = math.sqrt(1.0 + 4.0 / c)
    # theta = 1 - (c/2)(s - 1) = (s - 1)/(s + 1), with s - 1 = (4/c)/(s + 1).
    theta = (4.0 / c) / (s + 1.0) ** 2
    one_minus_theta = 2.0 / (s + 1.0)
    tau = one_minus_theta / (gamma_g * theta)
    sigma = one_minus_theta / (gamma_h_star * theta)
    return theta, tau, sigma


class ConstantSchedule:
    """Fixed step sizes for the basic method; theta is unused (the basic
    x-first iteration hard-codes the 2x_{k+1} - x_k overrelaxation)."""

    regime = "constant"

    def __init__(self, tau, sigma, op_norm):
        if not (tau > 0 and sigma > 0):
            raise ValueError(f"tau and sigma must be positive, got {tau}, {sigma}")
        if not tau * sigma * op_norm**2 < 1.0:
            raise ValueError(
                f"tau*sigma*||A||^2 = {tau * sigma * op_norm**2!r} must be strictly below 1"
            )
        self.tau = float(tau)
        self.sigma = float(sigma)
        self.theta = 0.0
        self.op_norm = float(op_norm)
        self.k = 0

    def advance(self):
        self.k += 1

    def ergodic_growth(self):
        return 1.0


class AccPrimalSchedule:
    """Accelerated schedule driven by gamma_g.

    sigma0 defaults to gamma_g / (2 ||A||^2), the choice maximizing the K^2
    coefficient in the lower bound on the weight sum T_K. tau0 is pinned to
    1/(||A||^2 sigma0). theta0 = 1 by default; theta0 = 0 (no extrapolation
    on the first step) is also accepted.
    """

    regime = "acc-primal"

    def __init__(self, gamma_g, op_norm, sigma0=None, theta0=1.0):
        if not gamma_g > 0:
            raise ValueError(f"the accelerated primal regime requires gamma_g > 0, got {gamma_g}")
        if not op_norm > 0:
            raise ValueError(f"op_norm must be positive, got {op_norm}")
        if sigma0 is None:
            sigma0 = gamma_g / (2.0 * op_norm**2)
        if not sigma0 > 0:
            raise ValueError(f"sigma0 must be positive, got {sigma0}")
        if not 0.0 <= theta0 <= 1.0:
            raise ValueError(f"theta0 must lie in [0, 1], got {theta0}")
        self.gamma = float(gamma_g)
        self.op_norm = float(op_norm)
        self.sigma = float(sigma0)
        self.tau = 1.0 / (op_norm**2 * sigma0)
        self.theta = float(theta0)
        self.sigma0 = float(sigma0)
        self.tau0 = self.tau
        self.k = 0

    def advance(self):
        self.theta = 1.0 / math.sqrt(1.0 + self.gamma * self.tau)
        self.tau = self.theta * self.tau
        self.sigma = self.sigma / self.theta
        self.k += 1

    def ergodic_growth(self):
        # Weight of iterate k is sigma_{k-1}/sigma0, so consecutive weights
        # grow by 1/theta_k.
        return 1.0 if self.k == 0 else 1.0 / self.theta


class AccDualSchedule:
    """Mirror of the accelerated primal schedule, driven by gamma_h_star.

    tau0 is free (default gamma_h_star / (2 ||A||^2) by symmetry with the
    primal regime); sigma0 is pinned to 1/(||A||^2 tau0). theta0 defaults
    to 0 (no extrapolation on the first step).
    """

    regime = "acc-dual"

    def __init__(self, gamma_h_star, op_norm, tau0=None, theta0=0.0):
        if not gamma_h_star > 0:
            raise ValueError(
                f"the accelerated dual regime requires gamma_h_star > 0, got {gamma_h_star}"
            )
        if not op_norm > 0:
            raise ValueError(f"op_norm must be positive, got {op_norm}")
        if tau0 is None:
            tau0 = gamma_h_star / (2.0 * op_norm**2)
        if not tau0 > 0:
            raise ValueError(f"tau0 must be positive, got {tau0}")
        if not 0.0 <= theta0 <= 1.0:
            raise ValueError(f"theta0 must lie in [0, 1], got {theta0}")
        self.gamma = float(gamma_h_star)
        self.op_norm = float(op_norm)
        self.tau = float(tau0)
        self.sigma = 1.0 / (op_norm**2 * tau0)
        self.theta = float(theta0)
        self.tau0 = float(tau0)
        self.sigma0 = self.sigma
        self.k = 0

    def advance(self):
        self.theta = 1.0 / math.sqrt(1.0 + self.gamma * self.sigma)
        self.sigma = self.theta * self.sigma
        self.tau = self.tau / self.theta
        self.k += 1

    def ergodic_growth(self):
        return 1.0 if self.k == 0 else 1.0 / self.theta


class LinearRateSchedule:
    """Fixed (theta, tau, sigma) for the linear-rate regimes."""

    def __init__(self, theta, tau, sigma, order="x-first"):
        if order not in ("x-first", "y-first"):
            raise ValueError(f"order must be 'x-first' or 'y-first', got {order!r}")
        if not (0.0 < theta < 1.0):
            raise ValueError(f"theta must lie in (0, 1), got {theta}")
        if not (tau > 0 and sigma > 0):
            raise ValueError(f"tau and sigma must be positive, got {tau}, {sigma}")
        self.theta = float(theta)
        self.tau = float(tau)
        self.sigma = float(sigma)
        self.order = order
        self.k = 0

    @classmethod
    def from_gammas(cls, gamma_g, gamma_h_star, op_norm, order="x-first"):
        theta, tau, sigma = linear_rate_params(gamma_g, gamma_h_star, op_norm)
        return cls(theta, tau, sigma, order=order)

    @property
    def regime(self):
        return "linear-rate-" + self.order

    def advance(self):
        self.k += 1

    def ergodic_growth(self):
        # Ergodic weights theta^{-(k-1)} grow geometrically; the accumulator
        # rescales to keep them in range.
        return 1.0 if self.k == 0 else 1.0 / self.theta
