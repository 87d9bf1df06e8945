"""Operators: apply/adjoint correctness, the norm menu, and CSV fixtures."""

import numpy as np
import pytest

from nlpdhg.operators import (
    DenseOperator,
    PowerIterationError,
    ScaledConcat,
    load_matrix_csv,
    norm_1_2,
    norm_1_inf,
    norm_2_2,
    save_matrix_csv,
)


class TestApply:
    def test_identity(self):
        op = DenseOperator(np.eye(3))
        np.testing.assert_allclose(op.apply([1.0, 2.0, 3.0]), [1.0, 2.0, 3.0])

    def test_scaled_concat_picks_signed_column(self):
        op = ScaledConcat(np.eye(2), 2.0)
        np.testing.assert_allclose(op.apply([1.0, 0.0, 0.0, 0.0]), [2.0, 0.0])
        np.testing.assert_allclose(op.apply([0.0, 0.0, 1.0, 0.0]), [-2.0, 0.0])

    def test_adjoint_hand_value(self):
        op = DenseOperator([[1.0, 2.0], [3.0, 4.0]])
        np.testing.assert_allclose(op.adjoint_apply([1.0, 1.0]), [4.0, 6.0])

    def test_dimension_mismatch(self):
        op = DenseOperator(np.ones((2, 3)))
        with pytest.raises(ValueError, match="shape"):
            op.apply([1.0, 2.0])
        with pytest.raises(ValueError, match="shape"):
            op.adjoint_apply([1.0, 2.0, 3.0])

    def test_scaled_concat_equals_materialized(self):
        rng = np.random.default_rng(0)
        B = rng.standard_normal((4, 3))
        lam = 1.7
        op = ScaledConcat(B, lam)
        full = lam * np.hstack([B, -B])
        for _ in range(20):
            x = rng.standard_normal(6)
            y = rng.standard_normal(4)
            np.testing.assert_allclose(op.apply(x), full @ x, rtol=1e-13, atol=1e-13)
            np.testing.assert_allclose(op.adjoint_apply(y), full.T @ y, rtol=1e-13, atol=1e-13)

    def test_adjoint_pairing(self):
        """<y, A x> == <A^T y, x> on random probes, both operator kinds."""
        rng = np.random.default_rng(1)
        ops = [
            DenseOperator(rng.standard_normal((5, 7))),
            ScaledConcat(rng.standard_normal((5, 4)), 0.9),
        ]
        for op in ops:
            for _ in range(30):
                x = rng.standard_normal(op.cols)
                y = rng.standard_normal(op.rows)
                lhs = y @ op.apply(x)
                rhs = op.adjoint_apply(y) @ x
                np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-12)


class TestNorms:
    def test_norm_1_2_single_column(self):
        assert norm_1_2(DenseOperator([[3.0, 0.0], [4.0, 0.0]])) == 5.0

    def test_norm_1_2_identity(self):
        assert norm_1_2(DenseOperator(np.eye(6))) == 1.0

    def test_norm_1_2_scaled_concat(self):
        got = norm_1_2(ScaledConcat(np.array([[1.0], [1.0]]), 3.0))
        np.testing.assert_allclose(got, 4.242640687119285, rtol=1e-15)

    def test_norm_1_inf(self):
        assert norm_1_inf(DenseOperator([[-1.0, 2.0], [3.0, -4.0]])) == 4.0
        assert norm_1_inf(DenseOperator(np.zeros((3, 3)))) == 0.0

    def test_norm_1_inf_sign_matrix(self):
        rng = np.random.default_rng(2)
        A = rng.choice([-1.0, 1.0], size=(6, 8))
        # Exhaustive scan oracle.
        assert norm_1_inf(DenseOperator(A)) == max(abs(v) for v in A.ravel())

    def test_norm_2_2_diagonal(self):
        np.testing.assert_allclose(norm_2_2(DenseOperator(np.diag([3.0, 1.0]))), 3.0, rtol=1e-9)

    def test_norm_2_2_nilpotent_shift(self):
        # Singular values of [[0,1],[0,0]] are {1, 0}.
        np.testing.assert_allclose(
            norm_2_2(DenseOperator([[0.0, 1.0], [0.0, 0.0]])), 1.0, rtol=1e-9
        )

    def test_norm_2_2_identity(self):
        np.testing.assert_allclose(norm_2_2(DenseOperator(np.eye(4))), 1.0, rtol=1e-12)

    def test_norm_2_2_matches_svd(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            A = rng.standard_normal((8, 5))
            np.testing.assert_allclose(
                norm_2_2(DenseOperator(A)), np.linalg.norm(A, 2), rtol=1e-7
            )

    def test_norm_2_2_nonconvergence_carries_estimate(self):
        A = np.random.default_rng(4).standard_normal((30, 30))
        with pytest.raises(PowerIterationError) as exc:
            norm_2_2(DenseOperator(A), tol=1e-10, max_iters=2)
        assert exc.value.last_estimate > 0

    def test_norm_equivalence_chain(self):
        """norm_1_2 <= norm_2_2 <= sqrt(n) * norm_1_2 on random matrices."""
        rng = np.random.default_rng(5)
        for _ in range(20):
            A = rng.standard_normal((6, 9))
            op = DenseOperator(A)
            lo, mid = norm_1_2(op), np.linalg.norm(A, 2)
            assert lo <= mid * (1 + 1e-12)
            assert mid <= np.sqrt(A.shape[1]) * lo * (1 + 1e-12)

    def test_empty_operator_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            DenseOperator(np.zeros((0, 3)))


class TestCauchySchwarzProbe:
    """|<dy, A dx>| <= ||A|| (alpha/2 ||dx||^2 + 1/(2 alpha) ||dy||^2)
    in each matching norm pairing."""

    @pytest.mark.parametrize("alpha", [0.1, 1.0, 10.0])
    def test_pairings(self, alpha):
        rng = np.random.default_rng(6)
        A = rng.standard_normal((5, 7))
        op = DenseOperator(A)
        pairings = [
            (norm_1_2(op), lambda v: np.sum(np.abs(v)), lambda w: np.linalg.norm(w)),
            (norm_1_inf(op), lambda v: np.sum(np.abs(v)), lambda w: np.sum(np.abs(w))),
            (np.linalg.norm(A, 2), np.linalg.norm, np.linalg.norm),
        ]
        for nrm, norm_x, norm_y in pairings:
            for _ in range(40):
                dx = rng.standard_normal(7)
                dy = rng.standard_normal(5)
                lhs = abs(dy @ op.apply(dx))
                rhs = nrm * (0.5 * alpha * norm_x(dx) ** 2 + 0.5 / alpha * norm_y(dy) ** 2)
                assert lhs <= rhs * (1 + 1e-12)


def test_csv_round_trip(tmp_path):
    rng = np.random.default_rng(7)
    A = rng.standard_normal((4, 6))
    path = tmp_path / "mat.csv"
    save_matrix_csv(path, A)
    np.testing.assert_array_equal(load_matrix_csv(path), A)
