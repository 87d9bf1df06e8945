"""Distance-generating functions and their Bregman divergences.

Three geometries are provided:

* ``Quadratic(scale)`` -- phi(x) = (scale/2) ||x||_2^2 on all of R^n.
* ``NegativeEntropy(dim)`` -- phi(x) = sum_j x_j log x_j on the unit simplex.
  Its divergence is the Kullback-Leibler divergence.
* ``BinaryEntropyAverage(m, scale)`` -- scale times the average of m binary
  entropy terms, defined on the box [0, 1/m]^m (interior (0, 1/m)^m).

A geometry is immutable after construction and all of its operations are
pure functions, so instances are safe to share between threads.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "BregmanGeometry",
    "Quadratic",
    "NegativeEntropy",
    "BinaryEntropyAverage",
    "three_point_check",
]

# Interior-required arguments below this floor raise rather than clamp, so
# geometry misuse surfaces instead of silently producing garbage.
EPS_DOM = 1e-300

# Tolerance for "sums to one" checks on simplex points. Iterates produced by
# the solvers stay within ~1e-12 of the simplex; the slack also admits the
# small off-simplex perturbations finite-difference probes need.
_SIMPLEX_ATOL = 1e-4


def _asvector(v, name):
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"{name} must be a 1-d vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return v


def _xlogx(v):
    """sum v_j log v_j with the continuous extension 0 log 0 = 0."""
    out = np.zeros_like(v)
    pos = v > 0.0
    out[pos] = v[pos] * np.log(v[pos])
    return float(out.sum())


def _xlogratio(a, b):
    """sum a_j log(a_j / b_j), with 0 log(0/b) = 0. Requires b > 0 where a > 0."""
    pos = a > 0.0
    return float(np.sum(a[pos] * np.log(a[pos] / b[pos])))


class BregmanGeometry:
    """Common interface for distance-generating functions.

    Subclasses implement ``value``, ``gradient`` and ``divergence``;
    ``validate_point`` enforces the domain described by ``domain``.
    """

    kind = "abstract"
    domain = ""

    def value(self, x):
        raise NotImplementedError

    def gradient(self, x):
        raise NotImplementedError

    def divergence(self, x, x_bar):
        raise NotImplementedError

    def validate_point(self, x, interior):
        raise NotImplementedError


class Quadratic(BregmanGeometry):
    """phi(x) = (scale/2) ||x||_2^2; divergence (scale/2) ||x - x_bar||_2^2."""

    kind = "quadratic"
    domain = "all real vectors"

    def __init__(self, scale=1.0):
        if not (np.isfinite(scale) and scale > 0):
            raise ValueError(f"scale must be a positive real, got {scale}")
        self.scale = float(scale)

    def value(self, x):
        x = _asvector(x, "x")
        return 0.5 * self.scale * float(x @ x)

    def gradient(self, x):
        x = _asvector(x, "x")
        return self.scale * x

    def divergence(self, x, x_bar):
        x = _asvector(x, "x")
        x_bar = _asvector(x_bar, "x_bar")
        if x.shape != x_bar.shape:
            raise ValueError(f"dimension mismatch: {x.shape} vs {x_bar.shape}")
        d = x - x_bar
        return 0.5 * self.scale * float(d @ d)

    def validate_point(self, x, interior=False):
        _asvector(x, "x")


class NegativeEntropy(BregmanGeometry):
    """phi(x) = sum_j x_j log x_j on the unit simplex.

    The divergence is computed in the log-ratio form sum x_j log(x_j/x_bar_j)
    rather than as a difference of phi values, which would cancel
    catastrophically for nearby points.
    """

    kind = "negative-entropy"
    domain = "closure of the unit simplex; interior for the second argument"

    def __init__(self, dim):
        if int(dim) != dim or dim < 1:
            raise ValueError(f"dim must be a positive integer, got {dim}")
        self.dim = int(dim)

    def _check(self, x, name, interior):
        x = _asvector(x, name)
        if x.shape[0] != self.dim:
            raise ValueError(f"{name} has dimension {x.shape[0]}, expected {self.dim}")
        if interior:
            if np.min(x) < EPS_DOM:
                raise ValueError(f"{name} is on or below the simplex boundary")
        elif np.min(x) < 0.0:
            raise ValueError(f"{name} has negative entries")
        if abs(x.sum() - 1.0) > _SIMPLEX_ATOL:
            raise ValueError(f"{name} does not sum to 1 (sum = {x.sum()!r})")
        return x

    def value(self, x):
        return _xlogx(self._check(x, "x", interior=False))

    def gradient(self, x):
        x = self._check(x, "x", interior=True)
        return 1.0 + np.log(x)

    def divergence(self, x, x_bar):
        x = self._check(x, "x", interior=False)
        x_bar = self._check(x_bar, "x_bar", interior=True)
        return _xlogratio(x, x_bar)

    def validate_point(self, x, interior=False):
        self._check(x, "x", interior)


class BinaryEntropyAverage(BregmanGeometry):
    """scale * psi where psi averages m binary entropies of m*y_i.

    psi(y) = (1/m) sum_i [ m y_i log(m y_i) + (1 - m y_i) log(1 - m y_i) ]
    on the box [0, 1/m]^m. With scale = 1/(4m) (the default) the geometry is
    1-strongly convex with respect to the Euclidean norm, since each binary
    entropy term has second derivative m/(s(1-s)) >= 4m in s = m y_i.
    """

    kind = "binary-entropy-average"
    domain = "box [0, 1/m]^m; open box (0, 1/m)^m for the second argument"

    def __init__(self, m, scale=None):
        if int(m) != m or m < 1:
            raise ValueError(f"m must be a positive integer, got {m}")
        self.m = int(m)
        if scale is None:
            scale = 1.0 / (4.0 * self.m)
        if not (np.isfinite(scale) and scale > 0):
            raise ValueError(f"scale must be a positive real, got {scale}")
        self.scale = float(scale)

    def _check(self, y, name, interior):
        y = _asvector(y, name)
        if y.shape[0] != self.m:
            raise ValueError(f"{name} has dimension {y.shape[0]}, expected {self.m}")
        s = self.m * y
        if interior:
            if np.min(s) < EPS_DOM or np.min(1.0 - s) < EPS_DOM:
                raise ValueError(f"{name} is on the boundary of the box (0, 1/m)^m")
        elif np.min(s) < 0.0 or np.max(s) > 1.0:
            raise ValueError(f"{name} lies outside the box [0, 1/m]^m")
        return y

    def value(self, y):
        y = self._check(y, "y", interior=False)
        s = self.m * y
        return self.scale / self.m * (_xlogx(s) + _xlogx(1.0 - s))

    def gradient(self, y):
        """Componentwise logit of m*y, times the scale factor."""
        y = self._check(y, "y", interior=True)
        s = self.m * y
        return self.scale * np.log(s / (1.0 - s))

    def divergence(self, y, y_bar):
        y = self._check(y, "y", interior=False)
        y_bar = self._check(y_bar, "y_bar", interior=True)
        s, sb = self.m * y, self.m * y_bar
        val = _xlogratio(s, sb) + _xlogratio(1.0 - s, 1.0 - sb)
        return self.scale / self.m * val

    def validate_point(self, y, interior=False):
        self._check(y, "y", interior)


def three_point_check(geom, x, x_hat, x_prime):
    """Residual of the three-point identity; a test oracle.

    Returns |D(x, x') - D(x_hat, x') - D(x, x_hat)
             - <grad(x') - grad(x_hat), x_hat - x>|.
    Both sides are evaluated independently, so for a correct geometry the
    residual is roundoff-level (below 1e-10 relative to the terms involved).
    """
    lhs = geom.divergence(x, x_prime)
    rhs = (
        geom.divergence(x_hat, x_prime)
        + geom.divergence(x, x_hat)
        + float((geom.gradient(x_prime) - geom.gradient(x_hat)) @ (np.asarray(x_hat, float) - np.asarray(x, float)))
    )
    return abs(lhs - rhs)
