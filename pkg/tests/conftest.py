"""
Pytest Configuration and Shared Fixtures

Golden trace problems with known closed forms, plus builders for random problems whose
germs are cut out of a random polynomial along the base curve.
"""

import math
import os
from pathlib import Path
from typing import Callable, Tuple

import numpy as np
import pytest

from src.algebra.germ import GermGraph, germ_from_polynomial
from src.algebra.polynomial import MultiPoly, evaluate_jacobian
from src.curves.family import CurveFamily, bilinear_family, line_family
from src.residues.solver import SquareSystem, solve_square
from src.traces.problem import TraceProblem
from src.utils.exceptions import AbelTraceError

CIRCLE_SLOPE = 0.75

# x0^2 + x1^2 - 1
CIRCLE = MultiPoly(2, {(2, 0): 1.0, (0, 2): 1.0, (0, 0): -1.0})
# 1 + 3 x0 + 8 x1 + 4 x0 x1, meets x0 + x1 + x0 x1 = 1 at (3, -1/2) and (-3, -2)
HYPERBOLA = MultiPoly(2, {(0, 0): 1.0, (1, 0): 3.0, (0, 1): 8.0, (1, 1): 4.0})
# x0^2 + x0 x1 - x1^2 + 2 x0 - x1 - 2, meets x0 = x1 at (1, 1) and (-2, -2)
CONIC = MultiPoly(
    2,
    {(2, 0): 1.0, (1, 1): 1.0, (0, 2): -1.0, (1, 0): 2.0, (0, 1): -1.0, (0, 0): -2.0},
)

SQUARE = [(0, 0), (1, 0), (0, 1), (1, 1)]
TRIANGLE_2 = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]


@pytest.fixture(scope="session")
def project_root() -> Path:
    """Return the project root directory."""
    return Path(__file__).parent.parent


@pytest.fixture(scope="session")
def test_data_dir(project_root: Path) -> Path:
    """Return the test data directory."""
    return project_root / "tests" / "data"


# Golden problems


def make_circle_problem() -> TraceProblem:
    fam = line_family(2, [CIRCLE_SLOPE], [0.0])
    germs = [
        germ_from_polynomial(CIRCLE, point, graph_coordinate=1, order=24, radius=0.2)
        for point in [(0.6, 0.8), (-0.6, -0.8)]
    ]
    return TraceProblem(fam, germs)


def make_exponential_problem() -> TraceProblem:
    """The single germ x1 = exp(x0) - 1 truncated at order 12."""
    series = MultiPoly(1, {(k,): 1.0 / math.factorial(k) for k in range(1, 13)})
    germ = GermGraph(
        base_point=(0.0, 0.0), graph_coordinate=1, series=series, truncation_order=12, radius=0.2
    )
    return TraceProblem(line_family(2, [0.0], [0.0]), [germ])


def make_constant_germ_problem() -> TraceProblem:
    """The single germ x1 = 5, i.e. the hypersurface x1 - 5."""
    germ = GermGraph(
        base_point=(0.0, 5.0),
        graph_coordinate=1,
        series=MultiPoly.constant(1, 5.0),
        truncation_order=2,
        radius=1.0,
    )
    return TraceProblem(line_family(2, [0.0], [0.0]), [germ])


def make_hyperbola_problem() -> TraceProblem:
    fam = bilinear_family((1.0, 1.0, 1.0), 1.0)
    germs = [
        germ_from_polynomial(HYPERBOLA, point, graph_coordinate=1, order=24, radius=0.2)
        for point in [(3.0, -0.5), (-3.0, -2.0)]
    ]
    return TraceProblem(fam, germs)


def make_conic_problem() -> TraceProblem:
    fam = line_family(2, [1.0], [0.0])
    germs = [
        germ_from_polynomial(CONIC, point, graph_coordinate=1, order=24, radius=0.2)
        for point in [(1.0, 1.0), (-2.0, -2.0)]
    ]
    return TraceProblem(fam, germs)


@pytest.fixture(scope="session")
def circle_problem() -> TraceProblem:
    return make_circle_problem()


@pytest.fixture(scope="session")
def exponential_problem() -> TraceProblem:
    return make_exponential_problem()


@pytest.fixture(scope="session")
def constant_germ_problem() -> TraceProblem:
    return make_constant_germ_problem()


@pytest.fixture(scope="session")
def hyperbola_problem() -> TraceProblem:
    return make_hyperbola_problem()


@pytest.fixture(scope="session")
def conic_problem() -> TraceProblem:
    return make_conic_problem()


# Random problems


def random_polynomial(
    rng: np.random.Generator, support: list, num_vars: int = 2
) -> MultiPoly:
    values = rng.normal(size=len(support)) + 1j * rng.normal(size=len(support))
    return MultiPoly(num_vars, dict(zip(support, values)))


def germs_along_base_curve(
    f: MultiPoly, fam: CurveFamily, expected: int, max_radius: float = 0.2
) -> Tuple[GermGraph, ...]:
    """
    Germs of ``f = 0`` at its intersection points with the base curve.

    Raises:
        AbelTraceError: the intersection is not a clean set of ``expected`` points
    """
    equations = [f] + fam.equations(fam.base_params)
    zeros = solve_square(SquareSystem(2, equations))
    if len(zeros) != expected:
        raise AbelTraceError("unexpected intersection count", got=len(zeros))
    germs = []
    for zero in zeros:
        if max(abs(v) for v in zero) > 5.0:
            raise AbelTraceError("intersection point too far out")
        if abs(np.linalg.det(evaluate_jacobian(equations, zero))) < 1e-2:
            raise AbelTraceError("intersection is nearly tangent")
        slopes = [abs(f.diff(i)(zero)) for i in range(2)]
        m = int(np.argmax(slopes))
        germs.append(germ_from_polynomial(f, zero, m, order=20, max_radius=max_radius))
    return tuple(germs)


def random_problem(
    seed: int, support: list, fam: CurveFamily, expected: int
) -> Tuple[TraceProblem, MultiPoly]:
    """A random f on ``support`` and its germs along C_{a0}, retried until well posed."""
    rng = np.random.default_rng(seed)
    for _ in range(20):
        f = random_polynomial(rng, support)
        try:
            germs = germs_along_base_curve(f, fam, expected)
            return TraceProblem(fam, germs), f
        except AbelTraceError:
            continue
    raise RuntimeError(f"no well-posed random problem for seed {seed}")


@pytest.fixture
def random_bilinear_problem() -> Callable[[int], Tuple[TraceProblem, MultiPoly]]:
    """Bidegree (1,1) f against the P^1 x P^1 family (N = 2)."""
    fam = bilinear_family((1.0, 1.0, 1.0), 0.5)
    return lambda seed: random_problem(seed, SQUARE, fam, expected=2)


@pytest.fixture
def random_conic_problem() -> Callable[[int], Tuple[TraceProblem, MultiPoly]]:
    """Conics against the P^2 line family (N = 2)."""
    fam = line_family(2, [0.5], [0.3])
    return lambda seed: random_problem(seed, TRIANGLE_2, fam, expected=2)


@pytest.fixture(autouse=True)
def reset_environment():
    """
    Reset environment variables after each test.

    This fixture automatically runs before and after each test to ensure
    a clean environment.
    """
    # Store original environment
    original_env = os.environ.copy()

    yield

    # Restore original environment
    os.environ.clear()
    os.environ.update(original_env)


# Markers for test categorization
def pytest_configure(config):
    """Register custom markers."""
    config.addinivalue_line("markers", "slow: marks tests as slow")
    config.addinivalue_line("markers", "integration: marks integration tests")
    config.addinivalue_line("markers", "unit: marks unit tests")
