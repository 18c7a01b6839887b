"""
Unit tests for trace sampling and trace analysis.
"""

import pytest

from src.algebra.polynomial import MultiPoly
from src.traces.analysis import (
    DegreeProfile,
    affineness_test,
    degree_in_param,
    degree_profile,
    pde_check,
    power_trace_relation_check,
    trace_degree_bound_check,
)
from src.traces.sampling import (
    axis_grid,
    combine,
    constant_grid,
    default_grid_radius,
    norm,
    probe_tracking_radius,
    sample_nodes,
    trace,
)
from src.utils.config import Tolerances
from src.utils.exceptions import (
    DegreeNotAttained,
    GridNodeError,
    InvariantViolation,
    NoPolynomialFit,
)

X0 = MultiPoly.variable(2, 0)
X1 = MultiPoly.variable(2, 1)
RANDOM_GENERATORS = ["random_bilinear_problem", "random_conic_problem"]


def at(prob, value):
    return prob.base.with_constant(0, value)


class TestTraceAndNorm:
    """Test suite for traces and norms on the circle problem."""

    @pytest.mark.parametrize("a", [0.05, -0.04, 0.03j])
    def test_coordinate_traces(self, circle_problem, a):
        """Test Tr(x1) = -0.96 a and Tr(x0) = 1.28 a."""
        assert trace(circle_problem, X1, at(circle_problem, a)) == pytest.approx(
            -0.96 * a, abs=1e-10
        )
        assert trace(circle_problem, X0, at(circle_problem, a)) == pytest.approx(
            1.28 * a, abs=1e-10
        )

    def test_norm_of_x1(self, circle_problem):
        """Test N(x1) = (a^2 - 1) / 1.5625."""
        a = 0.05

        assert norm(circle_problem, X1, at(circle_problem, a)) == pytest.approx(
            (a**2 - 1) / 1.5625, abs=1e-10
        )

    def test_power_traces(self, circle_problem):
        """Test the closed forms of Tr(x1^2) and Tr(x1^3)."""
        a = 0.04
        point = at(circle_problem, a)

        assert trace(circle_problem, X1**2, point) == pytest.approx(
            -0.3584 * a**2 + 1.28, abs=1e-10
        )
        assert trace(circle_problem, X1**3, point) == pytest.approx(
            0.958464 * a**3 - 1.8432 * a, abs=1e-10
        )

    def test_trace_is_linear(self, circle_problem):
        """Test Tr(2 x0 + 3 x1^2) = 2 Tr(x0) + 3 Tr(x1^2)."""
        point = at(circle_problem, 0.02)

        combined = trace(circle_problem, 2 * X0 + 3 * X1**2, point)

        assert combined == pytest.approx(
            2 * trace(circle_problem, X0, point) + 3 * trace(circle_problem, X1**2, point),
            abs=1e-12,
        )

    def test_norm_is_multiplicative(self, circle_problem):
        """Test N(x0 x1) = N(x0) N(x1)."""
        point = at(circle_problem, 0.02)

        assert norm(circle_problem, X0 * X1, point) == pytest.approx(
            norm(circle_problem, X0, point) * norm(circle_problem, X1, point), abs=1e-12
        )

    def test_permutation_invariance(self, circle_problem):
        """Test that traces do not depend on the germ order."""
        point = at(circle_problem, 0.03)

        assert trace(circle_problem.permuted([1, 0]), X1**2, point) == pytest.approx(
            trace(circle_problem, X1**2, point), abs=1e-12
        )

    def test_unknown_flavor(self):
        """Test that combine rejects unknown flavors."""
        with pytest.raises(InvariantViolation):
            combine([], X0, "mean")


class TestGrids:
    """Test suite for grid helpers."""

    def test_constant_grid(self):
        """Test tensor grid size and extent."""
        nodes = constant_grid(2, 1.0, 3)

        assert len(nodes) == 9
        assert (-1.0, 1.0) in nodes
        assert (0.0, 0.0) in nodes

    def test_axis_grid(self):
        """Test that axis grids move one constant only."""
        nodes = axis_grid(2, 1, 0.5, 5)

        assert len(nodes) == 5
        assert all(node[0] == 0.0 for node in nodes)
        assert nodes[0][1] == pytest.approx(-0.5)

    def test_sample_nodes_shape(self, circle_problem):
        """Test the shape of sampled values."""
        values = sample_nodes(circle_problem, [X0, X1, X1**2], constant_grid(1, 0.05, 4))

        assert values.shape == (4, 3)

    def test_sample_nodes_reports_failing_node(self, circle_problem):
        """Test that a node beyond the germs raises GridNodeError with the node."""
        with pytest.raises(GridNodeError) as exc_info:
            sample_nodes(circle_problem, [X0], [(0.0,), (1.5,)])

        assert exc_info.value.node == (1.5,)

    def test_probe_radius(self, circle_problem):
        """Test the probed radius is positive and below the germ reach."""
        radius = probe_tracking_radius(circle_problem)

        assert 0.05 < radius < 1.0
        sample_nodes(circle_problem, [X0], constant_grid(1, radius, 3))

    def test_configured_grid_radius(self, circle_problem):
        """Test that a configured radius bypasses the probe."""
        prob = circle_problem.with_tolerances(Tolerances(grid_radius=0.01))

        assert default_grid_radius(prob) == 0.01


class TestAffinenessTest:
    """Test suite for the affineness criterion."""

    def test_circle_is_affine(self, circle_problem):
        """Test the positive verdict and fitted forms on the circle."""
        report = affineness_test(circle_problem)

        assert report.positive
        assert report.max_residual < 1e-8
        x0, x1 = report.verdicts
        assert x0.label == "x0"
        assert x0.slopes[0] == pytest.approx(1.28, abs=1e-8)
        assert x1.slopes[0] == pytest.approx(-0.96, abs=1e-8)
        assert x1.constant == pytest.approx(0.0, abs=1e-8)

    def test_exponential_is_not_affine(self, exponential_problem):
        """Test the negative verdict on x1 = exp(x0) - 1."""
        report = affineness_test(exponential_problem)

        assert not report.positive
        assert report.max_residual > 100 * exponential_problem.tolerances.fit_tol

    def test_single_coordinate_mode(self, exponential_problem):
        """Test restricting the test to x0, which is exactly affine."""
        report = affineness_test(exponential_problem, coordinates=[0])

        assert [v.label for v in report.verdicts] == ["x0"]
        assert report.positive

    def test_custom_functions(self, circle_problem):
        """Test Tr(x1^2), which is not affine in a_00."""
        report = affineness_test(circle_problem, fs=[X1**2])

        assert report.verdicts[0].label == "f0"
        assert not report.positive

    def test_report_to_dict(self, circle_problem):
        """Test the report serialization."""
        summary = affineness_test(circle_problem).to_dict()

        assert summary["positive"] is True
        assert len(summary["coordinates"]) == 2


class TestDegrees:
    """Test suite for degree profiles in one constant."""

    @pytest.mark.parametrize("power", [1, 2, 3])
    def test_power_trace_degrees(self, circle_problem, power):
        """Test deg Tr(x1^l) = l, attained."""
        profile = degree_profile(circle_problem, X1**power, 0)

        assert profile.degree == power
        assert profile.exact

    def test_norm_degree(self, circle_problem):
        """Test deg N(x1) = 2."""
        assert degree_in_param(circle_problem, X1, 0, flavor="norm") == 2

    def test_no_polynomial_fit(self, exponential_problem):
        """Test that exp(a) - 1 has no polynomial degree."""
        with pytest.raises(NoPolynomialFit):
            degree_profile(exponential_problem, X1, 0)

    def test_unattained_degree_rejected(self, circle_problem, mocker):
        """Test that a vanishing leading coefficient raises unless allowed."""
        profile = DegreeProfile(
            flavor="trace",
            k=0,
            degree=2,
            residuals=(1.0, 1.0, 1e-12),
            leading_magnitude=1e-9,
            exact=False,
            radius=0.1,
        )
        mocker.patch("src.traces.analysis.degree_profile", return_value=profile)

        with pytest.raises(DegreeNotAttained) as exc_info:
            degree_in_param(circle_problem, X1**2, 0)

        assert exc_info.value.negative
        assert degree_in_param(circle_problem, X1**2, 0, require_exact=False) == 2

    def test_degree_bound(self, circle_problem):
        """Test deg Tr(x1^2) <= 2 for NP(x1^2) in 2 conv(S u {0})."""
        assert trace_degree_bound_check(circle_problem, X1**2, 2, 0)
        assert not trace_degree_bound_check(circle_problem, X1**2, 1, 0)


class TestPDE:
    """Test suite for the first-order PDE of tracked coordinates."""

    @pytest.mark.parametrize("j", [0, 1])
    @pytest.mark.parametrize("i", [0, 1])
    def test_pde_residual(self, circle_problem, j, i):
        """Test the PDE residual at h = 1e-4."""
        assert pde_check(circle_problem, j, i, 0, 1e-4) < 1e-6

    def test_pde_second_order_decay(self, circle_problem):
        """Test that halving h divides the residual by about four."""
        coarse = pde_check(circle_problem, 0, 1, 0, 1e-2)
        fine = pde_check(circle_problem, 0, 1, 0, 5e-3)

        assert 3.5 <= coarse / fine <= 4.5

    @pytest.mark.parametrize("l", [1, 2])
    def test_power_trace_relation(self, circle_problem, l):
        """Test (l+1) d_a1 Tr(x1^l) = l d_a0 Tr(x1^(l+1))."""
        assert power_trace_relation_check(circle_problem, 1, 0, l, 1e-4) < 1e-6


@pytest.mark.slow
class TestRandomProblems:
    """Test suite for PDE and degree bounds on random curves."""

    @pytest.mark.parametrize("generator", RANDOM_GENERATORS)
    @pytest.mark.parametrize("seed", range(10))
    def test_pde_on_random_curves(self, request, generator, seed):
        """Test the PDE residual for every germ and coordinate."""
        prob, _ = request.getfixturevalue(generator)(seed)

        for j in range(prob.size):
            for i in range(prob.n):
                assert pde_check(prob, j, i, 0, 1e-4) < 1e-6

    @pytest.mark.parametrize("generator", RANDOM_GENERATORS)
    @pytest.mark.parametrize("seed", range(10))
    def test_pde_second_order_decay_on_random_curves(self, request, generator, seed):
        """Test that halving h divides the largest PDE residual by about four."""
        prob, _ = request.getfixturevalue(generator)(seed)

        coarse, fine = max(
            (
                (pde_check(prob, j, i, 0, 1e-2), pde_check(prob, j, i, 0, 5e-3))
                for j in range(prob.size)
                for i in range(prob.n)
            ),
            key=lambda pair: pair[0],
        )

        assert 3.5 <= coarse / fine <= 4.5

    @pytest.mark.parametrize("generator", RANDOM_GENERATORS)
    @pytest.mark.parametrize("seed", range(10))
    def test_degree_bound_on_random_curves(self, request, generator, seed):
        """Test deg Tr(x1^l) <= l against both families."""
        prob, _ = request.getfixturevalue(generator)(seed)

        for power in (1, 2, 3):
            assert degree_in_param(prob, X1**power, 0, require_exact=False) <= power
