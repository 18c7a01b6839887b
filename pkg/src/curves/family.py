"""
Curve Families

The moving complete-intersection curves C_a = {a_k0 = P_k(a'_k, x), k = 0..n-2} in an
affine chart. Each P_k is a polynomial without constant term whose monomials form the
support S_k; the constant a_k0 is kept as a separate parameter.
"""

import math
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.algebra.germ import GermGraph
from src.algebra.polynomial import Exponent, MultiPoly, Scalar
from src.geometry.polytope import LatticePolytope
from src.utils.exceptions import (
    DimensionMismatchError,
    GermDomainError,
    IndexOutOfRangeError,
    InvariantViolation,
)


@dataclass(frozen=True)
class ParamPoint:
    """One parameter value a = ((a_00, a'_0), ..., (a_{n-2,0}, a'_{n-2}))."""

    constants: Tuple[complex, ...]
    coefficients: Tuple[Tuple[complex, ...], ...]

    def __post_init__(self) -> None:
        constants = tuple(complex(c) for c in self.constants)
        coefficients = tuple(tuple(complex(c) for c in row) for row in self.coefficients)
        if len(constants) != len(coefficients):
            raise DimensionMismatchError(
                "one coefficient row per constant is required",
                constants=len(constants),
                rows=len(coefficients),
            )
        object.__setattr__(self, "constants", constants)
        object.__setattr__(self, "coefficients", coefficients)

    @property
    def num_equations(self) -> int:
        return len(self.constants)

    def with_constant(self, k: int, value: Scalar) -> "ParamPoint":
        constants = list(self.constants)
        constants[k] = complex(value)
        return replace(self, constants=tuple(constants))

    def with_coefficient(self, k: int, slot: int, value: Scalar) -> "ParamPoint":
        rows = [list(row) for row in self.coefficients]
        rows[k][slot] = complex(value)
        return replace(self, coefficients=tuple(tuple(row) for row in rows))

    def shifted(self, offsets: Sequence[Scalar]) -> "ParamPoint":
        """Move the constants a_0 by ``offsets``; a' is unchanged."""
        if len(offsets) != self.num_equations:
            raise DimensionMismatchError("one offset per constant is required", got=len(offsets))
        constants = tuple(c + complex(o) for c, o in zip(self.constants, offsets))
        return replace(self, constants=constants)

    def as_vector(self) -> np.ndarray:
        flat = list(self.constants)
        for row in self.coefficients:
            flat.extend(row)
        return np.array(flat, dtype=complex)

    def lerp(self, other: "ParamPoint", t: float) -> "ParamPoint":
        """Point at fraction ``t`` of the straight segment from self to ``other``."""
        constants = tuple(a + t * (b - a) for a, b in zip(self.constants, other.constants))
        coefficients = tuple(
            tuple(a + t * (b - a) for a, b in zip(r1, r2))
            for r1, r2 in zip(self.coefficients, other.coefficients)
        )
        return ParamPoint(constants, coefficients)

    def distance(self, other: "ParamPoint") -> float:
        return float(np.max(np.abs(self.as_vector() - other.as_vector()), initial=0.0))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "constants": [[c.real, c.imag] for c in self.constants],
            "coefficients": [[[c.real, c.imag] for c in row] for row in self.coefficients],
        }


@dataclass(frozen=True)
class CurveFamily:
    """Supports S_k of the curve equations plus the base parameter a0."""

    n: int
    supports: Tuple[Tuple[Exponent, ...], ...]
    base_params: ParamPoint

    def __post_init__(self) -> None:
        if self.n < 2:
            raise InvariantViolation("curve families live in dimension >= 2", invariant="n >= 2")
        supports = tuple(tuple(tuple(int(c) for c in e) for e in s) for s in self.supports)
        object.__setattr__(self, "supports", supports)
        if len(supports) != self.n - 1:
            raise DimensionMismatchError(
                "a curve family has n-1 equations", expected=self.n - 1, got=len(supports)
            )
        zero = (0,) * self.n
        for k, support in enumerate(supports):
            if any(len(e) != self.n or min(e) < 0 for e in support):
                raise DimensionMismatchError("support exponents must be n-vectors", equation=k)
            if len(set(support)) != len(support):
                raise InvariantViolation("repeated support exponent", invariant="distinct", equation=k)
            if zero in support:
                raise InvariantViolation(
                    "support contains the constant monomial",
                    invariant="no zero exponent",
                    equation=k,
                )
            for i in range(self.n):
                if unit_vector(self.n, i) not in support:
                    raise InvariantViolation(
                        "every unit vector must belong to every support",
                        invariant="unit vectors in support",
                        equation=k,
                        missing=i,
                    )
        self.check_params(self.base_params)

    @property
    def num_equations(self) -> int:
        return self.n - 1

    def check_params(self, a: ParamPoint) -> None:
        """
        Raises:
            DimensionMismatchError: ``a`` is not indexed by this family's supports
        """
        if a.num_equations != self.num_equations:
            raise DimensionMismatchError(
                "parameter has the wrong number of equations",
                expected=self.num_equations,
                got=a.num_equations,
            )
        for k, (support, row) in enumerate(zip(self.supports, a.coefficients)):
            if len(row) != len(support):
                raise DimensionMismatchError(
                    "coefficient row does not match support", equation=k, expected=len(support)
                )

    def slot(self, k: int, exponent: Sequence[int]) -> int:
        """Position of ``exponent`` in S_k."""
        if not 0 <= k < self.num_equations:
            raise IndexOutOfRangeError("equation index out of range", k=k)
        try:
            return self.supports[k].index(tuple(exponent))
        except ValueError:
            raise IndexOutOfRangeError("exponent not in support", k=k, exponent=tuple(exponent))

    def unit_slot(self, k: int, i: int) -> int:
        """Position of the monomial x_i in S_k (present by the support invariant)."""
        if not 0 <= i < self.n:
            raise IndexOutOfRangeError("coordinate index out of range", i=i)
        return self.slot(k, unit_vector(self.n, i))

    def with_base(self, a: ParamPoint) -> "CurveFamily":
        return CurveFamily(self.n, self.supports, a)

    # Evaluation

    def equation(self, k: int, a: ParamPoint) -> MultiPoly:
        """P_k(a'_k, x) as a polynomial."""
        return MultiPoly(self.n, dict(zip(self.supports[k], a.coefficients[k])))

    def equations(self, a: ParamPoint) -> List[MultiPoly]:
        """The curve equations a_k0 - P_k(a'_k, x)."""
        return [
            MultiPoly.constant(self.n, a.constants[k]) - self.equation(k, a)
            for k in range(self.num_equations)
        ]

    def evaluate(self, k: int, a: ParamPoint, x: Sequence[complex]) -> complex:
        return sum(
            (c * _monomial(x, e) for e, c in zip(self.supports[k], a.coefficients[k])), 0j
        )

    def gradient(self, k: int, a: ParamPoint, x: Sequence[complex]) -> np.ndarray:
        """Gradient of P_k(a'_k, .) at ``x``."""
        grad = np.zeros(self.n, dtype=complex)
        for e, c in zip(self.supports[k], a.coefficients[k]):
            for i, power in enumerate(e):
                if power:
                    lowered = e[:i] + (power - 1,) + e[i + 1 :]
                    grad[i] += c * power * _monomial(x, lowered)
        return grad

    def parameter_velocity(
        self, a_start: ParamPoint, a_target: ParamPoint, x: Sequence[complex]
    ) -> np.ndarray:
        """Derivative of the curve residual along the straight path a_start -> a_target."""
        velocity = np.zeros(self.num_equations, dtype=complex)
        for k in range(self.num_equations):
            dp = sum(
                (
                    (c1 - c0) * _monomial(x, e)
                    for e, c0, c1 in zip(
                        self.supports[k], a_start.coefficients[k], a_target.coefficients[k]
                    )
                ),
                0j,
            )
            velocity[k] = (a_target.constants[k] - a_start.constants[k]) - dp
        return velocity

    def support_polytope(self, k: int) -> LatticePolytope:
        """conv(S_k u {0}), the polytope of the bundle cut out by the k-th equation."""
        return LatticePolytope.from_points([(0,) * self.n] + list(self.supports[k]))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "supports": [[list(e) for e in s] for s in self.supports],
            "base_params": self.base_params.to_dict(),
        }


def unit_vector(n: int, i: int) -> Exponent:
    return tuple(1 if j == i else 0 for j in range(n))


def _monomial(x: Sequence[complex], exponent: Sequence[int]) -> complex:
    return math.prod(complex(x[i]) ** e for i, e in enumerate(exponent) if e)


# Operations


def curve_residual(fam: CurveFamily, a: ParamPoint, x: Sequence[Scalar]) -> np.ndarray:
    """Component k is a_k0 - P_k(a'_k, x); zero exactly on C_a."""
    fam.check_params(a)
    if len(x) != fam.n:
        raise DimensionMismatchError("point dimension differs from family", got=len(x))
    return np.array(
        [a.constants[k] - fam.evaluate(k, a, x) for k in range(fam.num_equations)],
        dtype=complex,
    )


def on_curve_check(
    fam: CurveFamily, a: ParamPoint, points: Sequence[Sequence[Scalar]], tol: float
) -> bool:
    """True iff every point lies on C_a to within ``tol``."""
    worst = max((float(np.max(np.abs(curve_residual(fam, a, p)))) for p in points), default=0.0)
    return worst < tol


def system_jacobian(
    germ: GermGraph, fam: CurveFamily, a: ParamPoint, x: Sequence[Scalar]
) -> np.ndarray:
    """Jacobian of (germ graph residual, curve residuals) with respect to x."""
    rows = [germ.graph_gradient(x)]
    rows.extend(-fam.gradient(k, a, x) for k in range(fam.num_equations))
    return np.array(rows, dtype=complex)


def system_residual(
    germ: GermGraph, fam: CurveFamily, a: ParamPoint, x: Sequence[Scalar]
) -> np.ndarray:
    return np.concatenate([[germ.graph_residual(x)], curve_residual(fam, a, x)])


def transversality_check(
    germ: GermGraph, fam: CurveFamily, a: ParamPoint, p: Sequence[Scalar]
) -> float:
    """
    |det| of the Jacobian of (germ graph equation, curve equations) at ``p``.

    Raises:
        GermDomainError: ``p`` lies outside the germ's validity polydisc
    """
    if len(p) != germ.dimension or germ.dimension != fam.n:
        raise DimensionMismatchError("germ, family and point dimensions differ")
    if not germ.contains_offset(germ.offset_of(p)):
        raise GermDomainError("point outside germ domain", radius=germ.radius)
    return float(abs(np.linalg.det(system_jacobian(germ, fam, a, p))))


# Factories


def line_family(
    n: int, slopes: Sequence[Scalar], constants: Optional[Sequence[Scalar]] = None
) -> CurveFamily:
    """
    Lines x_k = a_k0 + s_k x_{n-1} (k = 0..n-2) through the point at infinity of x_{n-1}.

    Written as a_k0 = x_k - s_k x_{n-1}, with every unit vector in every support.
    """
    if len(slopes) != n - 1:
        raise DimensionMismatchError("one slope per equation is required", expected=n - 1)
    constants = list(constants) if constants is not None else [0.0] * (n - 1)
    support = tuple(unit_vector(n, i) for i in range(n))
    rows = []
    for k in range(n - 1):
        row = [0j] * n
        row[k] = 1.0
        row[n - 1] = -complex(slopes[k])
        rows.append(tuple(row))
    return CurveFamily(n, (support,) * (n - 1), ParamPoint(tuple(constants), tuple(rows)))


def bilinear_family(
    coefficients: Sequence[Scalar] = (1.0, 1.0, 1.0), constant: Scalar = 0.0
) -> CurveFamily:
    """Curves a_00 = c_1 x_1 + c_2 x_2 + c_3 x_1 x_2 of bidegree (1,1) on P^1 x P^1."""
    if len(coefficients) != 3:
        raise DimensionMismatchError("bilinear curves carry three coefficients")
    support = ((1, 0), (0, 1), (1, 1))
    return CurveFamily(2, (support,), ParamPoint((constant,), (tuple(coefficients),)))
