"""Geometry toolkit: divergence values, gradients, identities, and the
strong-convexity lower bounds that the solvers lean on."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlpdhg.bregman import (
    BinaryEntropyAverage,
    NegativeEntropy,
    Quadratic,
    three_point_check,
)

# Frozen with 40-digit arithmetic: 0.5 log 2 + 0.5 log(2/3).
KL_HALF_QUARTER = 0.14384103622589045


def random_simplex(rng, n, floor=1e-12):
    x = rng.random(n) + floor
    return x / x.sum()


class TestDivergence:
    def test_quadratic_basic(self):
        g = Quadratic(1.0)
        assert g.divergence([1.0, 0.0], [0.0, 0.0]) == pytest.approx(0.5)

    def test_negative_entropy_identity(self):
        g = NegativeEntropy(2)
        assert g.divergence([0.3, 0.7], [0.3, 0.7]) == 0.0

    def test_negative_entropy_value(self):
        g = NegativeEntropy(2)
        got = g.divergence([0.5, 0.5], [0.25, 0.75])
        np.testing.assert_allclose(got, KL_HALF_QUARTER, rtol=1e-14)

    def test_boundary_first_argument_ok(self):
        # 0 log 0 extends continuously to 0.
        g = NegativeEntropy(3)
        val = g.divergence([0.0, 0.5, 0.5], [1 / 3, 1 / 3, 1 / 3])
        assert np.isfinite(val) and val > 0

    def test_binary_entropy_matches_definition(self):
        m = 4
        g = BinaryEntropyAverage(m)
        rng = np.random.default_rng(0)
        y = rng.uniform(0.05, 0.95, m) / m
        yb = rng.uniform(0.05, 0.95, m) / m
        s, sb = m * y, m * yb
        expect = np.sum(
            s * np.log(s / sb) + (1 - s) * np.log((1 - s) / (1 - sb))
        ) / (4 * m**2)
        np.testing.assert_allclose(g.divergence(y, yb), expect, rtol=1e-13)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension"):
            NegativeEntropy(3).divergence([0.5, 0.5], [0.25, 0.25, 0.5])

    def test_boundary_second_argument_rejected(self):
        with pytest.raises(ValueError, match="boundary"):
            NegativeEntropy(2).divergence([0.5, 0.5], [1.0, 0.0])
        with pytest.raises(ValueError, match="boundary"):
            BinaryEntropyAverage(2).divergence([0.1, 0.1], [0.5, 0.25])

    def test_nan_inf_rejected(self):
        with pytest.raises(ValueError, match="NaN or Inf"):
            Quadratic().divergence([np.nan, 0.0], [0.0, 0.0])
        with pytest.raises(ValueError, match="NaN or Inf"):
            NegativeEntropy(2).divergence([np.inf, 0.0], [0.5, 0.5])

    def test_two_evaluation_routes_agree(self):
        """Closed form vs phi(x) - phi(xb) - <grad phi(xb), x - xb>."""
        rng = np.random.default_rng(1)
        for geom, draw in [
            (NegativeEntropy(5), lambda: random_simplex(rng, 5)),
            (BinaryEntropyAverage(5), lambda: rng.uniform(0.05, 0.95, 5) / 5),
            (Quadratic(2.5), lambda: rng.standard_normal(5)),
        ]:
            for _ in range(50):
                x, xb = draw(), draw()
                direct = geom.divergence(x, xb)
                via_phi = geom.value(x) - geom.value(xb) - geom.gradient(xb) @ (x - xb)
                np.testing.assert_allclose(direct, via_phi, rtol=1e-12, atol=1e-12)


class TestGradient:
    def test_quadratic(self):
        np.testing.assert_allclose(Quadratic(2.0).gradient([1.0, -1.0]), [2.0, -2.0])

    def test_negative_entropy_log_cancellation(self):
        n = 4
        x = np.full(n, 1.0 / np.e)  # not a simplex point; validated below
        g = NegativeEntropy(n)
        with pytest.raises(ValueError):
            g.gradient(x)
        # On the simplex the formula is 1 + log x.
        x = random_simplex(np.random.default_rng(2), n)
        np.testing.assert_allclose(g.gradient(x), 1.0 + np.log(x))

    def test_binary_entropy_logit_lift(self):
        # m y = 0.5 everywhere makes the logit vanish.
        g = BinaryEntropyAverage(2, scale=1.0 / 8.0)
        np.testing.assert_allclose(g.gradient([0.25, 0.25]), [0.0, 0.0], atol=1e-15)

    @pytest.mark.parametrize(
        "geom,point",
        [
            (Quadratic(0.7), np.array([0.4, -1.2, 3.0])),
            (NegativeEntropy(3), np.array([0.2, 0.3, 0.5])),
            (BinaryEntropyAverage(3), np.array([0.1, 0.2, 0.05])),
        ],
    )
    def test_finite_difference_consistency(self, geom, point):
        """Central differences of phi match the gradient to 1e-6 relative."""
        g = geom.gradient(point)
        h = 1e-6
        for j in range(point.shape[0]):
            e = np.zeros_like(point)
            e[j] = h
            fd = (geom.value(point + e) - geom.value(point - e)) / (2 * h)
            np.testing.assert_allclose(fd, g[j], rtol=1e-6, atol=1e-9)


class TestThreePoint:
    def test_quadratic_exact(self):
        g = Quadratic(1.3)
        rng = np.random.default_rng(3)
        for _ in range(20):
            x, xh, xp = rng.standard_normal((3, 4))
            assert three_point_check(g, x, xh, xp) < 1e-12

    def test_entropy_identity_point(self):
        g = NegativeEntropy(3)
        u = np.full(3, 1.0 / 3.0)
        assert three_point_check(g, u, u, u) == 0.0

    def test_entropy_random_triples(self):
        g = NegativeEntropy(5)
        rng = np.random.default_rng(4)
        for _ in range(50):
            x, xh, xp = (random_simplex(rng, 5) for _ in range(3))
            assert three_point_check(g, x, xh, xp) < 1e-10


class TestStrongConvexity:
    def test_pinsker(self):
        """KL dominates half the squared l1 distance on simplex pairs."""
        rng = np.random.default_rng(5)
        for n in (2, 5, 50):
            g = NegativeEntropy(n)
            for _ in range(300):
                x, xb = random_simplex(rng, n), random_simplex(rng, n)
                assert g.divergence(x, xb) >= 0.5 * np.sum(np.abs(x - xb)) ** 2 - 1e-12

    def test_quadratic_exact_lower_bound(self):
        g = Quadratic(1.0)
        rng = np.random.default_rng(6)
        x, xb = rng.standard_normal((2, 7))
        np.testing.assert_allclose(g.divergence(x, xb), 0.5 * np.sum((x - xb) ** 2))

    def test_binary_entropy_euclidean_bound(self):
        """With scale 1/(4m) each binary entropy term has curvature >= 4m in
        m*y, so the divergence dominates half the squared l2 distance (the
        norm this geometry is paired with)."""
        rng = np.random.default_rng(7)
        for m in (1, 3, 10):
            g = BinaryEntropyAverage(m)
            for _ in range(300):
                y = rng.uniform(1e-4, 1 - 1e-4, m) / m
                yb = rng.uniform(1e-4, 1 - 1e-4, m) / m
                assert g.divergence(y, yb) >= 0.5 * np.sum((y - yb) ** 2) - 1e-15

    def test_binary_entropy_l1_bound_at_unaveraged_scale(self):
        # At scale 1/4 (no averaging) the l1 bound holds as well.
        rng = np.random.default_rng(8)
        m = 6
        g = BinaryEntropyAverage(m, scale=0.25)
        for _ in range(300):
            y = rng.uniform(1e-4, 1 - 1e-4, m) / m
            yb = rng.uniform(1e-4, 1 - 1e-4, m) / m
            assert g.divergence(y, yb) >= 0.5 * np.sum(np.abs(y - yb)) ** 2 - 1e-15


@given(st.integers(2, 8), st.integers(0, 2**32 - 1))
@settings(max_examples=50, deadline=None)
def test_divergence_nonnegative_and_definite(n, seed):
    """Nonnegativity with equality exactly at identical points."""
    rng = np.random.default_rng(seed)
    g = NegativeEntropy(n)
    x, xb = random_simplex(rng, n), random_simplex(rng, n)
    d = g.divergence(x, xb)
    assert d >= 0.0
    assert g.divergence(xb, xb) == 0.0
    if np.max(np.abs(x - xb)) > 1e-6:
        assert d > 0.0


@given(st.floats(0.1, 10.0), st.integers(0, 2**32 - 1))
@settings(max_examples=50, deadline=None)
def test_quadratic_scale_linearity(scale, seed):
    rng = np.random.default_rng(seed)
    x, xb = rng.standard_normal((2, 3))
    np.testing.assert_allclose(
        Quadratic(scale).divergence(x, xb),
        scale * Quadratic(1.0).divergence(x, xb),
        rtol=1e-12,
    )
