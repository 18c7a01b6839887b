"""
Grothendieck Residues

Global residue sums over simple zeros, the polytope vanishing predictor, and the
residue representation of a_k0-derivatives of traces.

For trace derivatives the local residue of

    (-1)^l l! x_i * m * D dx / (m * f * (a_00 - P_0) ... (a_k0 - P_k)^(l+1) ... )

with m = x_0...x_{n-1} and D the Jacobian determinant of F = (f, a_0 - P) is computed
in the local coordinates y = F(x), where the form reads
(-1)^l l! x_i dy / (y_0 ... y_{k+1}^(l+1) ...). The factor m cancels, so zeros on the
coordinate hyperplanes are allowed. Along the curve y_j = 0 (j != k+1) with
s = y_{k+1} the residue is (-1)^l x_i^(l)(0), where J x' = e_{k+1} and
J x'' = -(x'^T H_j x')_j.
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from src.algebra.polynomial import MultiPoly, evaluate_jacobian, poly_diff
from src.curves.family import ParamPoint
from src.geometry.polytope import minkowski_sum_all, newton_polytope, strict_interior_contains
from src.residues.solver import SquareSystem, newton_polish, solve_square
from src.traces.problem import TraceProblem
from src.traces.sampling import trace, tracked_points
from src.utils.exceptions import (
    DimensionMismatchError,
    IndexOutOfRangeError,
    InvariantViolation,
    NewtonDivergence,
    VanishingCoordinate,
    ZeroJacobian,
)
from src.utils.logger import get_logger

logger = get_logger(__name__)

ZERO_JACOBIAN_TOL = 1e-12
VANISHING_TOL = 1e-12
DEFAULT_STEP = 1e-3


def residue_terms(h: MultiPoly, sys: SquareSystem, toric_form: bool = False) -> List[complex]:
    """
    Local residues h(z) / J(z), or h(z) / (z_0...z_{n-1} J(z)) in toric form.

    The plain form runs over every affine zero, the toric form over the torus zeros.

    Raises:
        ZeroJacobian: the Jacobian vanishes at a zero
        VanishingCoordinate: toric form at a supplied zero with a vanishing coordinate
    """
    if h.num_vars != sys.n:
        raise DimensionMismatchError("numerator lives in a different ring", n=sys.n)
    terms = []
    for zero in solve_square(sys, torus_only=toric_form):
        jacobian = complex(np.linalg.det(evaluate_jacobian(sys.equations, zero)))
        if abs(jacobian) <= ZERO_JACOBIAN_TOL:
            raise ZeroJacobian("Jacobian vanishes at a zero", zero=zero)
        denominator = jacobian
        if toric_form:
            if min(abs(v) for v in zero) <= VANISHING_TOL:
                raise VanishingCoordinate("toric residue at a zero off the torus", zero=zero)
            denominator *= math.prod(zero)
        terms.append(h(zero) / denominator)
    return terms


def residue_sum(h: MultiPoly, sys: SquareSystem, toric_form: bool = False) -> complex:
    """
    Global residue sum of h dx / (f_1 ... f_n).

    Args:
        h: Numerator polynomial in the system's variables
        sys: Square system whose zeros are solved for, or supplied
        toric_form: Use dx/x, i.e. divide every local residue by z_0...z_{n-1}

    Returns:
        Sum of the local residues over the simple zeros

    Raises:
        ZeroJacobian: the Jacobian vanishes at a zero
        VanishingCoordinate: toric form at a supplied zero off the torus
        GenericityFailure: the solver found a multiple zero or a short torus count
    """
    return complex(sum(residue_terms(h, sys, toric_form), 0j))


def khovanskii_predict(h: MultiPoly, fs: Sequence[MultiPoly]) -> bool:
    """
    True certifies that the toric residue sum of h over (f_1..f_n) vanishes: NP(h) lies
    in the interior of NP(f_1) + ... + NP(f_n). False predicts nothing.

    Args:
        h: Numerator polynomial
        fs: The system, one polynomial per variable

    Raises:
        DimensionMismatchError: ``fs`` is empty
        DegeneratePolytopeError: the Minkowski sum is not full-dimensional
    """
    if not fs:
        raise DimensionMismatchError("at least one equation is required")
    if h.is_zero():
        return True
    total = minkowski_sum_all([newton_polytope(f) for f in fs])
    return strict_interior_contains(total, newton_polytope(h))


@dataclass(frozen=True)
class DerivativeCheck:
    """Both sides of the residue formula for an a_k0-derivative of Tr(x_i)."""

    i: int
    k: int
    l: int
    residue_side: complex
    finite_difference: complex
    step: float

    @property
    def residual(self) -> float:
        return float(abs(self.residue_side - self.finite_difference))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "i": self.i,
            "k": self.k,
            "l": self.l,
            "residue_side": [self.residue_side.real, self.residue_side.imag],
            "finite_difference": [self.finite_difference.real, self.finite_difference.imag],
            "residual": self.residual,
            "step": self.step,
        }


def _hessian(q: MultiPoly, x: Sequence[complex]) -> np.ndarray:
    n = q.num_vars
    return np.array(
        [[poly_diff(poly_diff(q, r), c)(x) for c in range(n)] for r in range(n)], dtype=complex
    )


def local_derivative_residue(
    equations: Sequence[MultiPoly], zero: Sequence[complex], i: int, row: int, l: int
) -> complex:
    """
    Residue at a simple zero of (-1)^l l! x_i m D dx / (m F_0 ... F_row^(l+1) ... ).

    ``row`` is the position of the raised equation in ``equations``. Only l = 1 and
    l = 2 are supported.

    Raises:
        ZeroJacobian: the Jacobian vanishes at ``zero``
    """
    if l not in (1, 2):
        raise InvariantViolation("derivative order must be 1 or 2", invariant="l in {1, 2}")
    n = len(equations)
    x = np.array([complex(v) for v in zero], dtype=complex)
    jacobian = evaluate_jacobian(equations, x)
    if abs(np.linalg.det(jacobian)) <= ZERO_JACOBIAN_TOL:
        raise ZeroJacobian("Jacobian vanishes at a zero", zero=tuple(x))

    direction = np.zeros(n, dtype=complex)
    direction[row] = 1.0
    first = np.linalg.solve(jacobian, direction)
    if l == 1:
        return complex(-first[i])
    curvature = np.array([first @ _hessian(eq, x) @ first for eq in equations], dtype=complex)
    second = -np.linalg.solve(jacobian, curvature)
    return complex(second[i])


def trace_derivative_check(
    prob: TraceProblem,
    f_interp: MultiPoly,
    i: int,
    k: int,
    l: int,
    a: Optional[ParamPoint] = None,
    h: float = DEFAULT_STEP,
) -> DerivativeCheck:
    """
    Compare the residue representation of d^l/da_k0^l Tr(x_i) at ``a`` with central
    finite differences of the sampled trace.

    The zeros of (f_interp, a - P) are the tracked points, polished on that system.

    Args:
        prob: Trace problem whose germs lie on ``f_interp = 0``
        f_interp: Interpolant of the germs
        i: Coordinate whose trace is differentiated
        k: Index of the constant a_k0
        l: Derivative order, 1 or 2
        a: Parameters, the base point if None
        h: Finite-difference step

    Returns:
        DerivativeCheck holding both sides

    Raises:
        NewtonDivergence: a tracked point does not polish onto the interpolant
        ZeroJacobian: a polished zero is not simple
    """
    if l not in (1, 2):
        raise InvariantViolation("derivative order must be 1 or 2", invariant="l in {1, 2}")
    if not 0 <= i < prob.n:
        raise IndexOutOfRangeError("coordinate index out of range", i=i)
    if not 0 <= k < prob.fam.num_equations:
        raise IndexOutOfRangeError("parameter index out of range", k=k)
    if f_interp.num_vars != prob.n:
        raise DimensionMismatchError("interpolant lives in a different ring")
    a = a if a is not None else prob.base

    equations = [f_interp] + prob.fam.equations(a)
    residue_side = 0j
    for j, point in enumerate(tracked_points(prob, a)):
        zero, converged = newton_polish(equations, point)
        if not converged:
            raise NewtonDivergence(
                "tracked point does not polish onto the interpolant", germ_index=j
            )
        residue_side += local_derivative_residue(equations, zero, i, k + 1, l)

    x_i = MultiPoly.variable(prob.n, i)
    a_k0 = a.constants[k]
    plus = trace(prob, x_i, a.with_constant(k, a_k0 + h))
    minus = trace(prob, x_i, a.with_constant(k, a_k0 - h))
    if l == 1:
        finite_difference = (plus - minus) / (2 * h)
    else:
        finite_difference = (plus - 2 * trace(prob, x_i, a) + minus) / h**2

    check = DerivativeCheck(
        i=i,
        k=k,
        l=l,
        residue_side=complex(residue_side),
        finite_difference=complex(finite_difference),
        step=h,
    )
    logger.debug("trace_derivative_checked", **check.to_dict())
    return check
