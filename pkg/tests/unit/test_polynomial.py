"""
Unit tests for sparse multivariate polynomials.
"""

import numpy as np
import pytest

from src.algebra.polynomial import (
    MultiPoly,
    distance_up_to_scale,
    evaluate_jacobian,
    poly_diff,
    poly_eval,
)
from src.utils.exceptions import DimensionMismatchError, IndexOutOfRangeError


@pytest.fixture
def circle() -> MultiPoly:
    return MultiPoly(2, {(2, 0): 1.0, (0, 2): 1.0, (0, 0): -1.0})


class TestConstruction:
    """Test suite for MultiPoly construction and inspection."""

    def test_zero_coefficients_are_dropped(self):
        """Test that explicit zero coefficients are not stored."""
        p = MultiPoly(2, {(1, 0): 0.0, (0, 1): 2.0})

        assert p.support() == [(0, 1)]

    def test_zero_polynomial(self):
        """Test the zero polynomial has empty support and degree -1."""
        p = MultiPoly.zero(3)

        assert p.is_zero()
        assert p.total_degree() == -1

    def test_exponent_length_must_match(self):
        """Test that exponent vectors must have num_vars entries."""
        with pytest.raises(DimensionMismatchError):
            MultiPoly(2, {(1, 0, 0): 1.0})

    def test_negative_exponent_rejected(self):
        """Test that negative exponents are rejected."""
        with pytest.raises(DimensionMismatchError):
            MultiPoly(2, {(-1, 0): 1.0})

    def test_degrees(self, circle):
        """Test total and partial degrees."""
        p = circle * MultiPoly.variable(2, 0)

        assert p.total_degree() == 3
        assert p.degree_in(0) == 3
        assert p.degree_in(1) == 2

    def test_variable_index_checked(self):
        """Test that variable indices are range checked."""
        with pytest.raises(IndexOutOfRangeError):
            MultiPoly.variable(2, 2)


class TestArithmetic:
    """Test suite for polynomial arithmetic."""

    def test_difference_of_squares(self):
        """Test (x + y)(x - y) = x^2 - y^2."""
        x = MultiPoly.variable(2, 0)
        y = MultiPoly.variable(2, 1)

        product = (x + y) * (x - y)

        assert product.terms == {(2, 0): 1.0, (0, 2): -1.0}

    def test_scalar_operations(self, circle):
        """Test scalar addition, multiplication and division."""
        p = (2 * circle + 2) / 2

        assert p.terms == {(2, 0): 1.0, (0, 2): 1.0}

    def test_power(self):
        """Test integer powers against repeated products."""
        x = MultiPoly.linear([1.0, 2.0], 1.0)

        assert (x**3).terms == (x * x * x).terms

    def test_negative_power_rejected(self, circle):
        """Test that negative powers raise."""
        with pytest.raises(ValueError):
            circle ** (-1)

    def test_mixed_rings_rejected(self, circle):
        """Test that adding polynomials in different rings raises."""
        with pytest.raises(DimensionMismatchError):
            circle + MultiPoly.variable(3, 0)

    def test_compose_shift(self, circle):
        """Test substitution x -> x + 1 against direct evaluation."""
        shifted = circle.compose([MultiPoly.variable(2, 0) + 1.0, MultiPoly.variable(2, 1)])

        assert shifted((0.5, 0.25)) == pytest.approx(circle((1.5, 0.25)))

    def test_truncated_keeps_low_degrees(self, circle):
        """Test truncation to total degree 1."""
        assert circle.truncated(1).terms == {(0, 0): -1.0}


class TestCalculus:
    """Test suite for evaluation, derivatives and determinants."""

    def test_eval(self, circle):
        """Test evaluation at a point on and off the circle."""
        assert poly_eval(circle, (0.6, 0.8)) == pytest.approx(0.0)
        assert circle((1j, 0)) == pytest.approx(-2.0)

    def test_eval_dimension_checked(self, circle):
        """Test that evaluation checks the point dimension."""
        with pytest.raises(DimensionMismatchError):
            poly_eval(circle, (1.0,))

    def test_diff(self, circle):
        """Test partial derivatives."""
        assert poly_diff(circle, 0).terms == {(1, 0): 2.0}
        assert poly_diff(circle, 1).terms == {(0, 1): 2.0}

    def test_jacobian(self, circle):
        """Test the numeric Jacobian of (circle, x - y)."""
        line = MultiPoly.linear([1.0, -1.0])

        jacobian = evaluate_jacobian([circle, line], (0.6, 0.8))

        np.testing.assert_allclose(jacobian, [[1.2, 1.6], [1.0, -1.0]])

    def test_diff_product_rule(self, circle):
        """Test d(p q) = dp q + p dq."""
        q = MultiPoly(2, {(3, 1): 2.0, (0, 1): -1.5j, (1, 0): 0.5})

        for i in range(2):
            expected = poly_diff(circle, i) * q + circle * poly_diff(q, i)
            assert distance_up_to_scale(poly_diff(circle * q, i), expected) < 1e-12

    @pytest.mark.parametrize("i", [0, 1])
    def test_diff_matches_central_differences(self, i):
        """Test dp against central differences, whose error shrinks by four when h halves."""
        p = MultiPoly(2, {(3, 1): 2.0, (1, 3): 0.3, (0, 2): -1.5j, (1, 0): 0.5, (2, 2): 0.25})
        x = np.array([0.7, -0.4 + 0.2j])
        exact = poly_eval(poly_diff(p, i), x)

        def error(h):
            step = np.zeros(2)
            step[i] = h
            return abs((poly_eval(p, x + step) - poly_eval(p, x - step)) / (2 * h) - exact)

        coarse, fine = error(1e-2), error(5e-3)

        assert coarse < 1e-3
        assert 3.5 <= coarse / fine <= 4.5


class TestNormalization:
    """Test suite for scalar-gauge normalization."""

    def test_normalized_largest_coefficient_is_one(self):
        """Test normalization divides by the largest coefficient."""
        p = MultiPoly(2, {(1, 0): 4.0j, (0, 0): 2.0})

        q = p.normalized()

        assert q.coefficient((1, 0)) == pytest.approx(1.0)
        assert q.coefficient((0, 0)) == pytest.approx(-0.5j)

    def test_normalized_breaks_ties_by_exponent(self, circle):
        """Test that tied coefficients pick the greatest graded exponent."""
        q = (circle * (-3.0)).normalized()

        assert q.coefficient((2, 0)) == pytest.approx(1.0)
        assert q.coefficient((0, 0)) == pytest.approx(-1.0)

    def test_pruned_drops_small_terms(self):
        """Test relative pruning."""
        p = MultiPoly(1, {(0,): 1.0, (1,): 1e-14})

        assert p.pruned().support() == [(0,)]

    def test_distance_up_to_scale(self, circle):
        """Test that scalar multiples are at distance zero."""
        assert distance_up_to_scale(circle, circle * (2 - 3j)) == pytest.approx(0.0, abs=1e-12)
        assert distance_up_to_scale(circle, circle + MultiPoly.variable(2, 0)) > 0.1

    def test_pairs_round_trip(self, circle):
        """Test serialization to [exponent, [re, im]] pairs."""
        p = circle * (1 + 2j)

        assert MultiPoly.from_pairs(2, p.to_pairs()) == p
