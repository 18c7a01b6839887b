"""
Geometry Module

Lattice polytopes for Newton-polytope and mixed-volume arithmetic.
"""

from src.geometry.polytope import (
    LatticePolytope,
    contains,
    minkowski_sum,
    minkowski_sum_all,
    mixed_volume,
    newton_polytope,
    strict_interior_contains,
)

__all__ = [
    "LatticePolytope",
    "contains",
    "minkowski_sum",
    "minkowski_sum_all",
    "mixed_volume",
    "newton_polytope",
    "strict_interior_contains",
]
