"""
Lattice Polytopes

Newton polytopes, Minkowski sums, mixed volumes and interior tests for integer
polytopes of ambient dimension 1 to 3. Convex hulls come from Qhull via scipy; point
sets of lower affine dimension are hulled in their own affine span.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from itertools import product as cartesian
from typing import List, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull

from src.algebra.polynomial import MultiPoly
from src.utils.exceptions import DegeneratePolytopeError, DimensionMismatchError, PolytopeError
from src.utils.logger import get_logger

logger = get_logger(__name__)

MAX_DIM = 3
FACET_TOL = 1e-9

Point = Tuple[int, ...]


def _affine_rank(points: np.ndarray) -> int:
    if len(points) <= 1:
        return 0
    return int(np.linalg.matrix_rank(points[1:] - points[0]))


def _extreme_points(points: np.ndarray) -> np.ndarray:
    """Rows of ``points`` that are vertices of their convex hull."""
    points = np.unique(points, axis=0)
    rank = _affine_rank(points)
    if rank == 0:
        return points[:1]
    if rank == 1:
        direction = points[1:] - points[0]
        direction = direction[np.argmax(np.abs(direction).sum(axis=1))]
        projection = points @ direction
        return points[[int(np.argmin(projection)), int(np.argmax(projection))]]
    if rank == points.shape[1]:
        hull = ConvexHull(points)
        return points[np.sort(hull.vertices)]
    centered = points - points.mean(axis=0)
    _, _, vt = np.linalg.svd(centered.astype(float))
    projected = centered @ vt[:rank].T
    hull = ConvexHull(projected)
    return points[np.sort(hull.vertices)]


@dataclass(frozen=True)
class LatticePolytope:
    """Convex hull of finitely many integer points, stored by its vertices."""

    ambient_dim: int
    vertices: Tuple[Point, ...]

    def __post_init__(self) -> None:
        if not 1 <= self.ambient_dim <= MAX_DIM:
            raise PolytopeError(
                "ambient dimension must be 1, 2 or 3", ambient_dim=self.ambient_dim
            )
        if not self.vertices:
            raise PolytopeError("polytope must be nonempty")
        points = np.array([[int(c) for c in v] for v in self.vertices], dtype=np.int64)
        if points.ndim != 2 or points.shape[1] != self.ambient_dim:
            raise DimensionMismatchError(
                "vertex length differs from ambient dimension", ambient_dim=self.ambient_dim
            )
        extreme = _extreme_points(points)
        vertices = tuple(sorted(tuple(int(c) for c in row) for row in extreme))
        object.__setattr__(self, "vertices", vertices)

    # Constructors

    @classmethod
    def from_points(cls, points: Sequence[Sequence[int]]) -> "LatticePolytope":
        points = [tuple(int(c) for c in p) for p in points]
        if not points:
            raise PolytopeError("polytope must be nonempty")
        return cls(len(points[0]), tuple(points))

    @classmethod
    def simplex(cls, n: int, size: int = 1) -> "LatticePolytope":
        """size times the standard simplex conv(0, e_1, ..., e_n)."""
        points = [(0,) * n] + [tuple(size if j == i else 0 for j in range(n)) for i in range(n)]
        return cls.from_points(points)

    @classmethod
    def box(cls, n: int, size: int = 1) -> "LatticePolytope":
        return cls.from_points(list(cartesian((0, size), repeat=n)))

    @classmethod
    def segment(cls, n: int, axis: int, length: int = 1) -> "LatticePolytope":
        end = tuple(length if j == axis else 0 for j in range(n))
        return cls.from_points([(0,) * n, end])

    # Geometry

    @cached_property
    def _array(self) -> np.ndarray:
        return np.array(self.vertices, dtype=np.int64)

    @cached_property
    def affine_dim(self) -> int:
        return _affine_rank(self._array)

    @property
    def is_full_dimensional(self) -> bool:
        return self.affine_dim == self.ambient_dim

    @cached_property
    def volume(self) -> float:
        """Euclidean volume in the ambient space (0 when not full-dimensional)."""
        if not self.is_full_dimensional:
            return 0.0
        if self.ambient_dim == 1:
            return float(self._array.max() - self._array.min())
        return float(ConvexHull(self._array).volume)

    @cached_property
    def facet_equations(self) -> np.ndarray:
        """
        Rows (normal, offset) with normal . x + offset <= 0 on the polytope.

        Raises:
            DegeneratePolytopeError: the polytope has no interior
        """
        if not self.is_full_dimensional:
            raise DegeneratePolytopeError(
                "polytope is not full-dimensional", affine_dim=self.affine_dim
            )
        if self.ambient_dim == 1:
            low, high = float(self._array.min()), float(self._array.max())
            return np.array([[-1.0, low], [1.0, -high]])
        return ConvexHull(self._array).equations

    def scaled(self, factor: int) -> "LatticePolytope":
        return LatticePolytope(
            self.ambient_dim, tuple(tuple(factor * c for c in v) for v in self.vertices)
        )

    def translated(self, shift: Sequence[int]) -> "LatticePolytope":
        return LatticePolytope(
            self.ambient_dim,
            tuple(tuple(c + int(s) for c, s in zip(v, shift)) for v in self.vertices),
        )

    def contains_point(self, point: Sequence[float], strict: bool = False) -> bool:
        """Membership of a single point; ``strict`` asks for the interior."""
        if strict or self.is_full_dimensional:
            equations = self.facet_equations
            values = equations[:, :-1] @ np.asarray(point, dtype=float) + equations[:, -1]
            if strict:
                return bool(np.all(values < -FACET_TOL))
            return bool(np.all(values <= FACET_TOL))
        # Lower-dimensional: convex-combination feasibility
        vertices = self._array.T.astype(float)
        a_eq = np.vstack([vertices, np.ones((1, vertices.shape[1]))])
        b_eq = np.concatenate([np.asarray(point, dtype=float), [1.0]])
        result = linprog(
            c=np.zeros(vertices.shape[1]),
            A_eq=a_eq,
            b_eq=b_eq,
            bounds=(0, None),
            method="highs",
        )
        return bool(result.status == 0)

    def lattice_points(self) -> List[Point]:
        """All integer points of the polytope, sorted."""
        low = self._array.min(axis=0)
        high = self._array.max(axis=0)
        ranges = [range(int(a), int(b) + 1) for a, b in zip(low, high)]
        return [p for p in cartesian(*ranges) if self.contains_point(p)]

    def to_list(self) -> List[List[int]]:
        return [list(v) for v in self.vertices]


def newton_polytope(p: MultiPoly) -> LatticePolytope:
    """Convex hull of the exponent vectors of ``p``."""
    if p.is_zero():
        raise PolytopeError("the zero polynomial has no Newton polytope")
    if p.num_vars > MAX_DIM:
        raise PolytopeError("Newton polytopes are supported up to dimension 3", num_vars=p.num_vars)
    return LatticePolytope(p.num_vars, tuple(p.terms))


def minkowski_sum(p: LatticePolytope, q: LatticePolytope) -> LatticePolytope:
    """Convex hull of pairwise vertex sums."""
    if p.ambient_dim != q.ambient_dim:
        raise DimensionMismatchError(
            "Minkowski sum of polytopes in different dimensions",
            left=p.ambient_dim,
            right=q.ambient_dim,
        )
    sums = {tuple(a + b for a, b in zip(u, v)) for u in p.vertices for v in q.vertices}
    return LatticePolytope(p.ambient_dim, tuple(sums))


def minkowski_sum_all(polytopes: Sequence[LatticePolytope]) -> LatticePolytope:
    if not polytopes:
        raise PolytopeError("Minkowski sum of an empty family")
    total = polytopes[0]
    for polytope in polytopes[1:]:
        total = minkowski_sum(total, polytope)
    return total


def mixed_volume(polytopes: Sequence[LatticePolytope]) -> int:
    """
    Normalized mixed volume of n polytopes in dimension n (the Bernstein count).

    Inclusion-exclusion over Minkowski sums of subsets:
    MV(P_1..P_n) = sum over nonempty S of (-1)^(n-|S|) Vol(sum_{i in S} P_i).

    Raises:
        PolytopeError: the family is empty or does not have n members
        DimensionMismatchError: the polytopes live in different dimensions
    """
    if not polytopes:
        raise PolytopeError("mixed volume of an empty family")
    n = polytopes[0].ambient_dim
    if len(polytopes) != n:
        raise PolytopeError(
            "mixed volume needs exactly n polytopes", expected=n, got=len(polytopes)
        )
    if any(p.ambient_dim != n for p in polytopes):
        raise DimensionMismatchError("polytopes live in different dimensions")

    total = 0.0
    for size in range(1, n + 1):
        sign = -1.0 if (n - size) % 2 else 1.0
        for subset in combinations(polytopes, size):
            total += sign * minkowski_sum_all(list(subset)).volume
    value = int(round(total))
    if abs(total - value) > 1e-6:
        logger.warning("mixed_volume_not_integral", value=total)
    return max(value, 0)


def strict_interior_contains(p: LatticePolytope, q: LatticePolytope) -> bool:
    """
    True iff every vertex of ``q`` lies strictly inside ``p``.

    Raises:
        DegeneratePolytopeError: ``p`` is not full-dimensional
    """
    if p.ambient_dim != q.ambient_dim:
        raise DimensionMismatchError("polytopes live in different dimensions")
    return all(p.contains_point(v, strict=True) for v in q.vertices)


def contains(p: LatticePolytope, q: LatticePolytope) -> bool:
    """Non-strict containment of ``q`` in ``p``."""
    if p.ambient_dim != q.ambient_dim:
        raise DimensionMismatchError("polytopes live in different dimensions")
    return all(p.contains_point(v) for v in q.vertices)
