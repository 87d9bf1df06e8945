"""Dense and structured linear operators with a cheap operator-norm menu.

Besides a plain dense matrix, a ``ScaledConcat`` operator represents
A = scale * (B | -B) implicitly: it applies B once to the difference of the
two halves of the input instead of materializing the concatenation.

Norms:

* ``norm_1_2``  -- maximum l2 norm of a column (l1 -> l2 induced norm), O(mn)
* ``norm_1_inf`` -- entry of largest magnitude (l1 -> linf induced norm), O(mn)
* ``norm_2_2``  -- largest singular value via power iteration on A^T A

All operators are immutable and their apply/adjoint methods are pure.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "DenseOperator",
    "ScaledConcat",
    "norm_1_2",
    "norm_1_inf",
    "norm_2_2",
    "PowerIterationError",
    "load_matrix_csv",
    "save_matrix_csv",
]


class PowerIterationError(RuntimeError):
    """Power iteration failed to converge; carries the last estimate."""

    def __init__(self, message, last_estimate):
        super().__init__(message)
        self.last_estimate = last_estimate


class DenseOperator:
    """A dense m x n matrix with apply/adjoint actions."""

    kind = "dense"

    def __init__(self, matrix):
        a = np.asarray(matrix, dtype=float)
        if a.ndim != 2:
            raise ValueError(f"matrix must be 2-d, got shape {a.shape}")
        if a.size == 0:
            raise ValueError("empty operator")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix contains NaN or Inf entries")
        self.matrix = a
        self.rows, self.cols = a.shape

    def apply(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.cols,):
            raise ValueError(f"expected input of shape ({self.cols},), got {x.shape}")
        return self.matrix @ x

    def adjoint_apply(self, y):
        y = np.asarray(y, dtype=float)
        if y.shape != (self.rows,):
            raise ValueError(f"expected input of shape ({self.rows},), got {y.shape}")
        return self.matrix.T @ y

    def column_norms_sq(self):
        return np.einsum("ij,ij->j", self.matrix, self.matrix)

    def row_norms_sq(self):
        return np.einsum("ij,ij->i", self.matrix, self.matrix)

    def max_abs_entry(self):
        return float(np.max(np.abs(self.matrix)))


class ScaledConcat:
    """A = scale * (B | -B), applied without materializing the concatenation.

    apply(x) = scale * B (x_plus - x_minus) where x = (x_plus, x_minus),
    adjoint_apply(y) = scale * (B^T y, -B^T y).
    """

    kind = "scaled-concat"

    def __init__(self, base, scale):
        b = np.asarray(base, dtype=float)
        if b.ndim != 2 or b.size == 0:
            raise ValueError(f"base must be a non-empty 2-d matrix, got shape {b.shape}")
        if not np.all(np.isfinite(b)):
            raise ValueError("base contains NaN or Inf entries")
        if not (np.isfinite(scale) and scale > 0):
            raise ValueError(f"scale must be a positive real, got {scale}")
        self.base = b
        self.scale = float(scale)
        self.rows = b.shape[0]
        self.cols = 2 * b.shape[1]

    def apply(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.cols,):
            raise ValueError(f"expected input of shape ({self.cols},), got {x.shape}")
        d = self.base.shape[1]
        return self.scale * (self.base @ (x[:d] - x[d:]))

    def adjoint_apply(self, y):
        y = np.asarray(y, dtype=float)
        if y.shape != (self.rows,):
            raise ValueError(f"expected input of shape ({self.rows},), got {y.shape}")
        bty = self.scale * (self.base.T @ y)
        return np.concatenate([bty, -bty])

    def column_norms_sq(self):
        # Columns of -B have the same norms as those of B.
        base_sq = self.scale**2 * np.einsum("ij,ij->j", self.base, self.base)
        return np.concatenate([base_sq, base_sq])

    def row_norms_sq(self):
        return 2.0 * self.scale**2 * np.einsum("ij,ij->i", self.base, self.base)

    def max_abs_entry(self):
        return self.scale * float(np.max(np.abs(self.base)))


def norm_1_2(op):
    """Maximum l2 norm of a column: max_j sqrt(sum_i A_ij^2)."""
    return float(np.sqrt(np.max(op.column_norms_sq())))


def norm_1_inf(op):
    """Entry of largest magnitude: max_ij |A_ij|."""
    return op.max_abs_entry()


def norm_2_2(op, tol=1e-10, max_iters=5000):
    """Largest singular value estimated by power iteration on A^T A.

    The start vector is the normalized all-ones vector, so the estimate is
    deterministic. Convergence is declared when successive Rayleigh quotients
    differ by less than ``tol`` relatively. A start vector orthogonal to the
    top singular vector would converge to a lower singular value; the random
    and structured matrices used here do not hit that case.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    n = op.cols
    v = np.full(n, 1.0 / np.sqrt(n))
    rho_prev = None
    for _ in range(max_iters):
        w = op.adjoint_apply(op.apply(v))
        rho = float(v @ w)
        if rho <= 0.0:
            # v is (numerically) in the nullspace of A^T A.
            return 0.0
        if rho_prev is not None and abs(rho - rho_prev) <= tol * rho:
            return float(np.sqrt(rho))
        rho_prev = rho
        v = w / np.linalg.norm(w)
    raise PowerIterationError(
        f"power iteration did not converge in {max_iters} iterations",
        last_estimate=float(np.sqrt(rho_prev)),
    )


def save_matrix_csv(path, matrix):
    """Write a dense matrix as CSV: one row per line, comma-separated decimals."""
    a = np.asarray(matrix, dtype=float)
    with open(path, "w") as fh:
        for row in np.atleast_2d(a):
            fh.write(",".join(repr(float(v)) for v in row))
            fh.write("\n")


def load_matrix_csv(path):
    with open(path) as fh:
        rows = [[float(tok) for tok in line.strip().split(",")] for line in fh if line.strip()]
    return np.array(rows, dtype=float)
