"""
Square Polynomial Systems

Common zeros of small square systems, in the complex torus or in affine space. One
equation is solved through its companion matrix; two equations are reduced by the
hidden-variable Sylvester resultant, whose matrix polynomial is linearized into a
generalized eigenproblem. Every zero is polished by Newton's method and the torus zeros
are counted against the Bernstein bound.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import eigvals

from src.algebra.polynomial import MultiPoly, evaluate_jacobian
from src.geometry.polytope import mixed_volume, newton_polytope
from src.utils.exceptions import (
    DimensionMismatchError,
    GenericityFailure,
    InvariantViolation,
    UnsupportedDimension,
)
from src.utils.logger import get_logger

logger = get_logger(__name__)

ZERO_RESIDUAL_TOL = 1e-8
SIMPLE_ZERO_TOL = 1e-10
POLISH_TOL = 1e-10
POLISH_MAX_ITER = 40
EIGENVALUE_BOUND = 1e6
TORUS_TOL = 1e-9
DUPLICATE_TOL = 1e-8
TRIM_TOL = 1e-14
DIVERGENCE_BOUND = 1e12

Zero = Tuple[complex, ...]


@dataclass(frozen=True)
class SquareSystem:
    """n equations in n unknowns, optionally with their zeros."""

    n: int
    equations: Tuple[MultiPoly, ...]
    zeros: Optional[Tuple[Zero, ...]] = None

    def __post_init__(self) -> None:
        equations = tuple(self.equations)
        object.__setattr__(self, "equations", equations)
        if self.n < 1 or len(equations) != self.n:
            raise DimensionMismatchError(
                "a square system has n equations", n=self.n, got=len(equations)
            )
        if any(eq.num_vars != self.n for eq in equations):
            raise DimensionMismatchError("every equation must have n variables", n=self.n)
        if self.zeros is None:
            return
        zeros = tuple(tuple(complex(v) for v in z) for z in self.zeros)
        object.__setattr__(self, "zeros", zeros)
        for index, zero in enumerate(zeros):
            if len(zero) != self.n:
                raise DimensionMismatchError("zero has the wrong dimension", zero_index=index)
            residual = max(scaled_residual(self.equations, zero))
            if residual > ZERO_RESIDUAL_TOL:
                raise InvariantViolation(
                    "supplied zero does not solve the system",
                    invariant="residual <= 1e-8",
                    zero_index=index,
                    residual=residual,
                )
            determinant = abs(np.linalg.det(evaluate_jacobian(self.equations, zero)))
            if determinant <= SIMPLE_ZERO_TOL:
                raise InvariantViolation(
                    "supplied zero is not simple",
                    invariant="|det J| > 1e-10",
                    zero_index=index,
                )

    def bernstein_bound(self) -> int:
        return mixed_volume([newton_polytope(eq) for eq in self.equations])


def scaled_residual(equations: Sequence[MultiPoly], x: Sequence[complex]) -> List[float]:
    """|p(x)| divided by max(1, sum |c| |x^e|) for every equation."""
    result = []
    for p in equations:
        magnitude = sum(
            abs(c) * float(np.prod([abs(complex(x[i])) ** k for i, k in enumerate(e)]))
            for e, c in p.terms.items()
        )
        result.append(abs(p(x)) / max(1.0, magnitude))
    return result


def newton_polish(equations: Sequence[MultiPoly], x: Sequence[complex]) -> Tuple[np.ndarray, bool]:
    """
    Newton iteration from ``x``; returns the point and whether it converged.

    A singular Jacobian stops the iteration, and the point counts as converged when it
    already solves the system, so multiple zeros reach the simplicity check.
    """
    point = np.array([complex(v) for v in x], dtype=complex)
    for _ in range(POLISH_MAX_ITER):
        jacobian = evaluate_jacobian(equations, point)
        values = np.array([p(point) for p in equations], dtype=complex)
        try:
            delta = np.linalg.solve(jacobian, values)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(delta)):
            break
        point = point - delta
        if np.max(np.abs(point)) > DIVERGENCE_BOUND:
            return point, False
        if np.linalg.norm(delta) <= 1e-14 * (1.0 + np.linalg.norm(point)):
            break
    return point, max(scaled_residual(equations, point)) < POLISH_TOL


def _univariate_roots(coefficients: Sequence[complex]) -> np.ndarray:
    """Roots of sum c_j t^j (coefficients lowest degree first)."""
    c = np.array(coefficients, dtype=complex)
    scale = np.max(np.abs(c), initial=0.0)
    if scale == 0:
        return np.array([], dtype=complex)
    top = len(c) - 1
    while top > 0 and abs(c[top]) <= TRIM_TOL * scale:
        top -= 1
    if top == 0:
        return np.array([], dtype=complex)
    return np.roots(c[: top + 1][::-1])


def _coefficients_in(p: MultiPoly, var: int) -> List[np.ndarray]:
    """
    Coefficients of ``p`` (2 variables) as a polynomial in variable ``var``; entry j is
    the coefficient array, lowest degree first, of var^j in the other variable.
    """
    other = 1 - var
    size_var = max(p.degree_in(var), 0) + 1
    size_other = max(p.degree_in(other), 0) + 1
    table = [np.zeros(size_other, dtype=complex) for _ in range(size_var)]
    for e, c in p.terms.items():
        table[e[var]][e[other]] += c
    return table


def _swap(p: MultiPoly) -> MultiPoly:
    return MultiPoly(2, {(e[1], e[0]): c for e, c in p.terms.items()})


def _sylvester_eigenvalues(f1: MultiPoly, f2: MultiPoly) -> np.ndarray:
    """Finite x_0 values at which the resultant of f1, f2 in x_1 vanishes."""
    c1 = _coefficients_in(f1, 1)
    c2 = _coefficients_in(f2, 1)
    d1, d2 = len(c1) - 1, len(c2) - 1
    size = d1 + d2
    depth = max(len(a) for a in c1 + c2) - 1
    blocks = [np.zeros((size, size), dtype=complex) for _ in range(depth + 1)]
    for row in range(d2):
        for j, coefficient in enumerate(c1):
            for power, value in enumerate(coefficient):
                blocks[power][row, row + d1 - j] = value
    for row in range(d1):
        for j, coefficient in enumerate(c2):
            for power, value in enumerate(coefficient):
                blocks[power][d2 + row, row + d2 - j] = value

    if depth == 0:
        if abs(np.linalg.det(blocks[0])) <= TRIM_TOL:
            raise GenericityFailure("resultant vanishes identically")
        return np.array([], dtype=complex)

    # Block companion pencil C v = lambda B v of the matrix polynomial sum S_j lambda^j
    order = size * depth
    companion = np.zeros((order, order), dtype=complex)
    pencil = np.eye(order, dtype=complex)
    for i in range(depth - 1):
        companion[i * size : (i + 1) * size, (i + 1) * size : (i + 2) * size] = np.eye(size)
    last = slice((depth - 1) * size, order)
    for j in range(depth):
        companion[last, j * size : (j + 1) * size] = -blocks[j]
    pencil[last, last] = blocks[depth]

    alpha, beta = eigvals(companion, pencil, homogeneous_eigvals=True)
    finite = np.abs(beta) > 1e-12 * np.maximum(np.abs(alpha), 1.0)
    values = alpha[finite] / beta[finite]
    return values[np.abs(values) < EIGENVALUE_BOUND]


def _candidates_pair(f1: MultiPoly, f2: MultiPoly) -> List[np.ndarray]:
    if f1.degree_in(1) > 0 and f2.degree_in(1) > 0:
        candidates = []
        for x0 in _sylvester_eigenvalues(f1, f2):
            for g in (f1, f2):
                coefficients = [np.polyval(c[::-1], x0) for c in _coefficients_in(g, 1)]
                for x1 in _univariate_roots(coefficients):
                    candidates.append(np.array([x0, x1], dtype=complex))
        return candidates
    if f1.degree_in(0) > 0 and f2.degree_in(0) > 0:
        swapped = _candidates_pair(_swap(f1), _swap(f2))
        return [c[::-1] for c in swapped]

    # Triangular: one equation involves a single variable
    for g, other in ((f1, f2), (f2, f1)):
        for var in (0, 1):
            if g.degree_in(1 - var) <= 0 and g.degree_in(var) > 0:
                candidates = []
                for root in _univariate_roots(_coefficients_in(g, 1 - var)[0]):
                    coefficients = [
                        np.polyval(c[::-1], root) for c in _coefficients_in(other, 1 - var)
                    ]
                    for value in _univariate_roots(coefficients):
                        point = [0j, 0j]
                        point[var], point[1 - var] = root, value
                        candidates.append(np.array(point, dtype=complex))
                return candidates
    return []


def _candidates_single(f: MultiPoly, torus_only: bool) -> List[np.ndarray]:
    """Roots of a univariate ``f``; the factor x^low is divided out for torus zeros."""
    low = min(e[0] for e in f.terms) if torus_only else 0
    coefficients = np.zeros(f.degree_in(0) - low + 1, dtype=complex)
    for e, c in f.terms.items():
        coefficients[e[0] - low] += c
    return [np.array([r], dtype=complex) for r in _univariate_roots(coefficients)]


def _deduplicate(points: Sequence[np.ndarray]) -> List[np.ndarray]:
    unique: List[np.ndarray] = []
    for p in points:
        if all(np.linalg.norm(p - q) > DUPLICATE_TOL * (1.0 + np.linalg.norm(q)) for q in unique):
            unique.append(p)
    return unique


def _on_torus(point: np.ndarray) -> bool:
    return bool(np.min(np.abs(point)) > TORUS_TOL * (1.0 + np.linalg.norm(point)))


def solve_square(sys: SquareSystem, torus_only: bool = True) -> List[Zero]:
    """
    Common zeros of a square system with n <= 2.

    The zeros in the complex torus are always checked against the Bernstein bound. With
    ``torus_only=False`` the zeros on the coordinate hyperplanes are returned as well,
    which is what a plain (dx) residue sum needs.

    Args:
        sys: System to solve; supplied zeros are returned as given
        torus_only: Drop zeros with a vanishing coordinate

    Returns:
        Zeros sorted by real then imaginary parts of their coordinates

    Raises:
        UnsupportedDimension: n > 2 without supplied zeros
        GenericityFailure: a multiple zero, or a torus count differing from the
            Bernstein bound
    """
    if sys.zeros is not None:
        return list(sys.zeros)
    if sys.n > 2:
        raise UnsupportedDimension("built-in solving is limited to n <= 2", n=sys.n)
    if any(eq.is_zero() for eq in sys.equations):
        raise GenericityFailure("system contains the zero polynomial")

    if sys.n == 1:
        candidates = _candidates_single(sys.equations[0], torus_only)
    else:
        candidates = _candidates_pair(*sys.equations)

    polished = []
    for candidate in candidates:
        point, converged = newton_polish(sys.equations, candidate)
        if converged and (not torus_only or _on_torus(point)):
            polished.append(point)
    zeros = _deduplicate(polished)

    for zero in zeros:
        if abs(np.linalg.det(evaluate_jacobian(sys.equations, zero))) <= SIMPLE_ZERO_TOL:
            raise GenericityFailure("system has a multiple zero", zero=tuple(zero))
    torus_count = sum(1 for zero in zeros if _on_torus(zero))
    expected = sys.bernstein_bound()
    if torus_count != expected:
        raise GenericityFailure(
            "torus zero count differs from the Bernstein bound",
            found=torus_count,
            expected=expected,
        )

    logger.debug(
        "square_system_solved", n=sys.n, zeros=len(zeros), off_torus=len(zeros) - torus_count
    )
    ordered = sorted(zeros, key=lambda z: tuple((round(v.real, 12), round(v.imag, 12)) for v in z))
    return [tuple(complex(v) for v in z) for z in ordered]
