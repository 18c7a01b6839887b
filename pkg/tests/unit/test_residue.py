"""
Unit tests for residue sums, the vanishing predictor and trace derivatives.
"""

import numpy as np
import pytest

from src.algebra.polynomial import MultiPoly
from src.residues.residue import (
    khovanskii_predict,
    local_derivative_residue,
    residue_sum,
    residue_terms,
    trace_derivative_check,
)
from src.residues.solver import SquareSystem
from src.utils.exceptions import (
    DegeneratePolytopeError,
    GenericityFailure,
    InvariantViolation,
    VanishingCoordinate,
)

from tests.conftest import CIRCLE, HYPERBOLA, SQUARE, TRIANGLE_2, random_polynomial

X = MultiPoly.variable(1, 0)
X_SQUARED_MINUS_ONE = X * X - 1


class TestResidueSum:
    """Test suite for global residue sums."""

    def test_toric_sum_vanishes(self):
        """Test sum of x / (x * 2x) over x = +-1."""
        sys = SquareSystem(1, (X_SQUARED_MINUS_ONE,))

        terms = residue_terms(X, sys, toric_form=True)

        assert [t.real for t in terms] == pytest.approx([-0.5, 0.5])
        assert abs(residue_sum(X, sys, toric_form=True)) < 1e-12
        assert khovanskii_predict(X, [X_SQUARED_MINUS_ONE])

    def test_plain_sum_of_constant(self):
        """Test 1 / (2x) summed over x = +-1, with no vanishing prediction."""
        one = MultiPoly.constant(1, 1.0)
        sys = SquareSystem(1, (X_SQUARED_MINUS_ONE,))

        assert abs(residue_sum(one, sys)) < 1e-12
        assert not khovanskii_predict(one, [X_SQUARED_MINUS_ONE])

    def test_plain_sum_of_x(self):
        """Test x / (2x) summed over x = +-1."""
        assert residue_sum(X, SquareSystem(1, (X_SQUARED_MINUS_ONE,))) == pytest.approx(1.0)

    def test_nonvanishing_toric_sum(self):
        """Test the toric sum of 1 over x^2 - 1, which is not predicted to vanish."""
        one = MultiPoly.constant(1, 1.0)
        sys = SquareSystem(1, (X_SQUARED_MINUS_ONE,))

        assert residue_sum(one, sys, toric_form=True) == pytest.approx(1.0)
        assert not khovanskii_predict(one, [X_SQUARED_MINUS_ONE])

    def test_toric_form_off_the_torus(self):
        """Test that a supplied zero at the origin breaks the toric form."""
        sys = SquareSystem(1, (X,), zeros=((0.0,),))

        assert residue_sum(MultiPoly.constant(1, 1.0), sys) == pytest.approx(1.0)
        with pytest.raises(VanishingCoordinate):
            residue_sum(MultiPoly.constant(1, 1.0), sys, toric_form=True)

    def test_plain_sum_counts_zero_at_origin(self):
        """Test that x^2 - x contributes its zero at 0 to the plain sum only."""
        one = MultiPoly.constant(1, 1.0)
        sys = SquareSystem(1, (X * X - X,))

        terms = residue_terms(one, sys)

        assert [t.real for t in terms] == pytest.approx([-1.0, 1.0])
        assert abs(residue_sum(one, sys)) < 1e-12
        assert residue_sum(one, sys, toric_form=True) == pytest.approx(1.0)

    def test_plain_sum_over_pair_with_origin(self):
        """Test that dx / ((x y - y)(x - y)) sums to zero with the zero at (0, 0)."""
        x, y = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
        sys = SquareSystem(2, (x * y - y, x - y))

        assert len(residue_terms(x, sys)) == 2
        assert abs(residue_sum(MultiPoly.constant(2, 1.0), sys)) < 1e-10

    @pytest.mark.parametrize("toric_form", [False, True])
    @pytest.mark.parametrize("seed", range(5))
    def test_sum_invariant_under_scaling(self, seed, toric_form):
        """Test that scaling one equation and the numerator by c leaves the sum unchanged."""
        rng = np.random.default_rng(2000 + seed)
        c = complex(rng.normal(), rng.normal())
        for _ in range(3):
            fs = (random_polynomial(rng, TRIANGLE_2), random_polynomial(rng, TRIANGLE_2))
            h = random_polynomial(rng, SQUARE)
            try:
                terms = residue_terms(h, SquareSystem(2, fs), toric_form=toric_form)
            except GenericityFailure:
                continue
            break
        else:
            pytest.fail("no generic system drawn")

        scaled = residue_sum(h * c, SquareSystem(2, (fs[0] * c, fs[1])), toric_form=toric_form)

        scale = max(1.0, max(abs(t) for t in terms))
        assert abs(scaled - sum(terms)) <= 1e-9 * scale

    @pytest.mark.parametrize("seed", range(20))
    def test_vanishing_on_random_systems(self, seed):
        """Test that predicted toric sums vanish on random dense systems."""
        rng = np.random.default_rng(1000 + seed)
        interior = [(1, 1), (2, 1), (1, 2)]
        for _ in range(3):
            fs = (random_polynomial(rng, TRIANGLE_2), random_polynomial(rng, TRIANGLE_2))
            h = random_polynomial(rng, interior)
            try:
                terms = residue_terms(h, SquareSystem(2, fs), toric_form=True)
            except GenericityFailure:
                continue
            break
        else:
            pytest.fail("no generic system drawn")

        assert khovanskii_predict(h, list(fs))
        scale = max(1.0, max(abs(t) for t in terms))
        assert abs(sum(terms)) < 1e-8 * scale

    def test_boundary_numerator_not_predicted(self):
        """Test that a vertex of the Minkowski sum gives no prediction."""
        rng = np.random.default_rng(7)
        fs = [random_polynomial(rng, SQUARE), random_polynomial(rng, SQUARE)]

        assert khovanskii_predict(MultiPoly.monomial((1, 1)) * 1.0, fs)
        assert not khovanskii_predict(MultiPoly.constant(2, 1.0), fs)

    def test_degenerate_minkowski_sum(self):
        """Test that a flat Minkowski sum raises."""
        fs = [MultiPoly.variable(2, 0) - 1, MultiPoly.variable(2, 0) - 2]

        with pytest.raises(DegeneratePolytopeError):
            khovanskii_predict(MultiPoly.constant(2, 1.0), fs)


class TestTraceDerivativeCheck:
    """Test suite for the residue representation of trace derivatives."""

    @pytest.mark.parametrize("i", [0, 1])
    @pytest.mark.parametrize("l", [1, 2])
    def test_circle(self, circle_problem, i, l):
        """Test both sides agree on the circle."""
        check = trace_derivative_check(circle_problem, CIRCLE, i, 0, l)

        assert check.residual < 1e-5

    def test_first_derivative_value(self, circle_problem):
        """Test d/da Tr(x1) = -0.96."""
        a = circle_problem.base.with_constant(0, 0.03)

        check = trace_derivative_check(circle_problem, CIRCLE, 1, 0, 1, a=a)

        assert check.residue_side == pytest.approx(-0.96, abs=1e-8)

    def test_second_derivative_vanishes(self, circle_problem):
        """Test that Tr(x0) is affine, so its second derivative residue is zero."""
        check = trace_derivative_check(circle_problem, CIRCLE, 0, 0, 2)

        assert abs(check.residue_side) < 1e-8

    def test_order_three_rejected(self, circle_problem):
        """Test that only first and second derivatives are supported."""
        with pytest.raises(InvariantViolation):
            trace_derivative_check(circle_problem, CIRCLE, 0, 0, 3)

    def test_to_dict(self, circle_problem):
        """Test the serializable summary."""
        summary = trace_derivative_check(circle_problem, CIRCLE, 1, 0, 1).to_dict()

        assert summary["l"] == 1
        assert summary["residual"] < 1e-5

    @pytest.mark.parametrize("i", [0, 1])
    @pytest.mark.parametrize("l", [1, 2])
    def test_hyperbola(self, hyperbola_problem, i, l):
        """Test both sides agree against the bilinear family."""
        check = trace_derivative_check(hyperbola_problem, HYPERBOLA, i, 0, l)

        assert check.residual < 1e-5 * max(1.0, abs(check.residue_side))

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(10))
    def test_random_bilinear_second_derivative(self, random_bilinear_problem, seed):
        """Test the l = 2 identity on random bidegree (1,1) curves."""
        prob, f = random_bilinear_problem(seed)

        for i in range(2):
            check = trace_derivative_check(prob, f, i, 0, 2)
            assert check.residual < 1e-4 * max(1.0, abs(check.residue_side))


class TestLocalDerivativeResidue:
    """Test suite for single-zero derivative residues."""

    PARABOLA = [
        MultiPoly(2, {(0, 1): 1.0, (2, 0): -1.0}),
        MultiPoly(2, {(1, 0): -1.0}),
    ]

    @pytest.mark.parametrize("i, l, expected", [(0, 1, 1.0), (1, 1, 0.0), (1, 2, 2.0)])
    def test_parabola_at_origin(self, i, l, expected):
        """Test x1 = a^2 along x0 = a, at a zero with both coordinates vanishing."""
        value = local_derivative_residue(self.PARABOLA, (0.0, 0.0), i, 1, l)

        assert value == pytest.approx(expected, abs=1e-12)

    def test_order_checked(self):
        """Test that only l = 1 and l = 2 are accepted."""
        with pytest.raises(InvariantViolation):
            local_derivative_residue(self.PARABOLA, (0.0, 0.0), 0, 1, 3)
