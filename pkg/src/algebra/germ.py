"""
Analytic Germs as Truncated Graphs

A germ of smooth hypersurface near a point is stored as the graph
x_m = phi(x_rest - base_rest) of a truncated power series in the remaining coordinates.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.algebra.polynomial import MultiPoly, Scalar, poly_eval
from src.utils.exceptions import (
    DimensionMismatchError,
    GermDomainError,
    IndexOutOfRangeError,
    InvariantViolation,
)

BASE_TOL = 1e-12


@dataclass(frozen=True)
class LinearForm:
    """u = u_1 x_1 + ... + u_n x_n."""

    coefficients: Tuple[complex, ...]

    def __post_init__(self) -> None:
        coefficients = tuple(complex(c) for c in self.coefficients)
        if not coefficients or all(c == 0 for c in coefficients):
            raise InvariantViolation("linear form has no nonzero coefficient", invariant="nonzero")
        object.__setattr__(self, "coefficients", coefficients)

    @property
    def num_vars(self) -> int:
        return len(self.coefficients)

    def __call__(self, x: Sequence[Scalar]) -> complex:
        if len(x) != self.num_vars:
            raise DimensionMismatchError("point dimension differs from form", got=len(x))
        return sum((u * complex(v) for u, v in zip(self.coefficients, x)), 0j)

    def norm(self) -> float:
        return float(np.linalg.norm(np.array(self.coefficients)))

    def as_poly(self) -> MultiPoly:
        return MultiPoly.linear(self.coefficients)

    def to_list(self) -> List[List[float]]:
        return [[c.real, c.imag] for c in self.coefficients]


@dataclass(frozen=True)
class GermGraph:
    """Truncated power-series graph of one germ through ``base_point``."""

    base_point: Tuple[complex, ...]
    graph_coordinate: int
    series: MultiPoly
    truncation_order: int
    radius: float

    def __post_init__(self) -> None:
        base = tuple(complex(v) for v in self.base_point)
        object.__setattr__(self, "base_point", base)
        n = len(base)
        if n < 2:
            raise InvariantViolation("germs live in dimension >= 2", invariant="dimension")
        if not 0 <= self.graph_coordinate < n:
            raise IndexOutOfRangeError(
                "graph coordinate out of range", graph_coordinate=self.graph_coordinate
            )
        if self.series.num_vars != n - 1:
            raise DimensionMismatchError(
                "series must use the n-1 non-graph coordinates",
                expected=n - 1,
                got=self.series.num_vars,
            )
        if self.truncation_order < 2:
            raise InvariantViolation(
                "truncation order must be at least 2", invariant="truncation_order >= 2"
            )
        if self.series.total_degree() > self.truncation_order:
            raise InvariantViolation(
                "series has terms beyond the truncation order", invariant="truncation_order"
            )
        if not self.radius > 0:
            raise InvariantViolation("radius must be positive", invariant="radius > 0")
        center = poly_eval(self.series, (0,) * (n - 1))
        target = base[self.graph_coordinate]
        if abs(center - target) > BASE_TOL * max(1.0, abs(target)):
            raise InvariantViolation(
                "series at zero offset does not reproduce the base point",
                invariant="series(0) == base_point[m]",
                mismatch=abs(center - target),
            )

    @property
    def dimension(self) -> int:
        return len(self.base_point)

    @property
    def rest_indices(self) -> List[int]:
        return [i for i in range(self.dimension) if i != self.graph_coordinate]

    @cached_property
    def series_gradient(self) -> List[MultiPoly]:
        return self.series.gradient()

    def offset_of(self, x: Sequence[Scalar]) -> Tuple[complex, ...]:
        """Offset of the non-graph coordinates of ``x`` from the base point."""
        if len(x) != self.dimension:
            raise DimensionMismatchError("point dimension differs from germ", got=len(x))
        return tuple(complex(x[i]) - self.base_point[i] for i in self.rest_indices)

    def contains_offset(self, offset: Sequence[Scalar]) -> bool:
        return max(abs(complex(o)) for o in offset) < self.radius

    def evaluate(self, offset: Sequence[Scalar]) -> Tuple[complex, ...]:
        return germ_eval(self, offset)

    def graph_residual(self, x: Sequence[Scalar]) -> complex:
        """x_m - phi(offset); zero exactly on the truncated germ."""
        offset = self.offset_of(x)
        return complex(x[self.graph_coordinate]) - poly_eval(self.series, offset)

    def graph_gradient(self, x: Sequence[Scalar]) -> np.ndarray:
        """Gradient of :meth:`graph_residual` with respect to x."""
        offset = self.offset_of(x)
        gradient = np.zeros(self.dimension, dtype=complex)
        gradient[self.graph_coordinate] = 1.0
        for r, i in enumerate(self.rest_indices):
            gradient[i] = -poly_eval(self.series_gradient[r], offset)
        return gradient

    def normal(self) -> np.ndarray:
        """Unit normal covector at the base point."""
        gradient = self.graph_gradient(self.base_point)
        return gradient / np.linalg.norm(gradient)

    def recentered(self, point: Sequence[Scalar]) -> "GermGraph":
        """
        Re-expand the germ at another of its points.

        The non-graph coordinates of ``point`` fix the new center; the graph coordinate is
        recomputed from the series. The new radius shrinks by the shift.
        """
        shift = self.offset_of(point)
        if not self.contains_offset(shift):
            raise GermDomainError("new center outside germ domain", shift=max(map(abs, shift)))
        k = self.dimension - 1
        substitution = [
            MultiPoly.variable(k, r) + shift[r] for r in range(k)
        ]
        series = self.series.compose(substitution)
        center = germ_eval(self, shift)
        return GermGraph(
            base_point=center,
            graph_coordinate=self.graph_coordinate,
            series=series,
            truncation_order=self.truncation_order,
            radius=self.radius - max(abs(s) for s in shift),
        )


def germ_eval(g: GermGraph, offset: Sequence[Scalar]) -> Tuple[complex, ...]:
    """Point of the germ whose non-graph coordinates are ``base + offset``."""
    if len(offset) != g.dimension - 1:
        raise DimensionMismatchError(
            "offset must have n-1 components", expected=g.dimension - 1, got=len(offset)
        )
    if not g.contains_offset(offset):
        raise GermDomainError(
            "offset outside validity radius",
            offset=max(abs(complex(o)) for o in offset),
            radius=g.radius,
        )
    point = list(g.base_point)
    for r, i in enumerate(g.rest_indices):
        point[i] = g.base_point[i] + complex(offset[r])
    point[g.graph_coordinate] = poly_eval(g.series, offset)
    return tuple(point)


def germ_from_polynomial(
    f: MultiPoly,
    point: Sequence[Scalar],
    graph_coordinate: int,
    order: int,
    radius: Optional[float] = None,
    max_radius: float = 1.0,
) -> GermGraph:
    """
    Taylor graph of the branch of ``f = 0`` through a smooth point.

    The series is obtained by the fixed-point iteration phi <- phi - f(t, phi) / f_m(p),
    each pass fixing one more degree. Without an explicit radius, half of the
    convergence radius estimated from the series tail is used (capped at ``max_radius``).

    Args:
        f: Polynomial cutting out the hypersurface
        point: Smooth point of ``f = 0``
        graph_coordinate: Coordinate written as a function of the others
        order: Truncation order of the series
        radius: Validity radius of the germ
        max_radius: Cap on the estimated radius

    Raises:
        InvariantViolation: ``point`` is off the hypersurface, or the hypersurface is not a
            graph over ``graph_coordinate`` there
    """
    n = f.num_vars
    if len(point) != n:
        raise DimensionMismatchError("point dimension differs from polynomial", got=len(point))
    if not 0 <= graph_coordinate < n:
        raise IndexOutOfRangeError("graph coordinate out of range", index=graph_coordinate)
    point = tuple(complex(v) for v in point)
    scale = max(1.0, f.max_abs_coefficient())
    if abs(poly_eval(f, point)) > 1e-8 * scale:
        raise InvariantViolation(
            "point does not lie on the hypersurface", invariant="f(point) == 0"
        )
    slope = poly_eval(f.diff(graph_coordinate), point)
    if abs(slope) < 1e-10 * scale:
        raise InvariantViolation(
            "hypersurface is not a graph over the chosen coordinate",
            invariant="df/dx_m(point) != 0",
        )

    k = n - 1
    rest = [i for i in range(n) if i != graph_coordinate]
    shifted = {i: MultiPoly.variable(k, r) + point[i] for r, i in enumerate(rest)}
    phi = MultiPoly.constant(k, point[graph_coordinate])
    for _ in range(order):
        substitution = [phi if i == graph_coordinate else shifted[i] for i in range(n)]
        value = f.compose(substitution).truncated(order)
        phi = (phi - value / slope).truncated(order)

    # Exact center, untouched by roundoff in the iteration
    terms = dict(phi.terms)
    terms[(0,) * k] = point[graph_coordinate]
    phi = MultiPoly(k, terms)

    if radius is None:
        radius = min(max_radius, 0.5 * estimate_convergence_radius(phi, order))
    return GermGraph(
        base_point=point,
        graph_coordinate=graph_coordinate,
        series=phi,
        truncation_order=order,
        radius=radius,
    )


def estimate_convergence_radius(series: MultiPoly, order: int) -> float:
    """Root-test estimate from the upper half of the degrees present in ``series``."""
    by_degree = {}
    for exponent, coefficient in series.terms.items():
        d = sum(exponent)
        if d > 0:
            by_degree[d] = max(by_degree.get(d, 0.0), abs(coefficient))
    tail = [c ** (1.0 / d) for d, c in by_degree.items() if d >= max(1, order // 2) and c > 0]
    if not tail:
        return float("inf")
    growth = max(tail)
    return 1.0 / growth if growth > 0 else float("inf")
