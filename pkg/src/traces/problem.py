"""
Trace Problems

A TraceProblem bundles a curve family, the germs V_0..V_{N-1}, the base parameter a0 and
the tolerance profile. Construction validates the setup: every base point lies on C_a0,
meets it transversally, and the base points are pairwise distinct.
"""

from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.algebra.germ import GermGraph
from src.curves.family import CurveFamily, ParamPoint, curve_residual, transversality_check
from src.curves.tracking import track_point
from src.utils.config import Tolerances
from src.utils.exceptions import DimensionMismatchError, InvariantViolation, TrackingError
from src.utils.logger import get_logger

logger = get_logger(__name__)

ON_CURVE_TOL = 1e-9
DISTINCT_TOL = 1e-9


@dataclass(frozen=True)
class TraceProblem:
    """Germ family V = V_0 u ... u V_{N-1} moving against the curves C_a near a0."""

    fam: CurveFamily
    germs: Tuple[GermGraph, ...]
    base: Optional[ParamPoint] = None
    tolerances: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self) -> None:
        germs = tuple(self.germs)
        object.__setattr__(self, "germs", germs)
        if self.base is None:
            object.__setattr__(self, "base", self.fam.base_params)
        self.fam.check_params(self.base)
        if not germs:
            raise InvariantViolation("a trace problem needs at least one germ", invariant="N >= 1")

        for j, germ in enumerate(germs):
            if germ.dimension != self.fam.n:
                raise DimensionMismatchError(
                    "germ dimension differs from the curve family", germ_index=j
                )
            worst = float(np.max(np.abs(curve_residual(self.fam, self.base, germ.base_point))))
            if worst >= ON_CURVE_TOL:
                raise InvariantViolation(
                    "base point does not lie on the base curve",
                    invariant="on_curve",
                    germ_index=j,
                    residual=worst,
                )
            determinant = transversality_check(germ, self.fam, self.base, germ.base_point)
            if determinant <= self.tolerances.transversality_threshold:
                raise InvariantViolation(
                    "germ is not transversal to the base curve",
                    invariant="transversality",
                    germ_index=j,
                    determinant=determinant,
                )

        for i, j in combinations(range(len(germs)), 2):
            gap = np.max(np.abs(np.subtract(germs[i].base_point, germs[j].base_point)))
            if gap <= DISTINCT_TOL:
                raise InvariantViolation(
                    "base points must be pairwise distinct",
                    invariant="distinct_base_points",
                    germs=(i, j),
                )

    @property
    def n(self) -> int:
        return self.fam.n

    @property
    def size(self) -> int:
        """Number N of germs."""
        return len(self.germs)

    @property
    def base_points(self) -> List[Tuple[complex, ...]]:
        return [g.base_point for g in self.germs]

    def with_tolerances(self, tolerances: Tolerances) -> "TraceProblem":
        return replace(self, tolerances=tolerances)

    def permuted(self, order: Sequence[int]) -> "TraceProblem":
        if sorted(order) != list(range(self.size)):
            raise DimensionMismatchError("order must be a permutation of the germ indices")
        return replace(self, germs=tuple(self.germs[j] for j in order))

    def track(self, j: int, a: ParamPoint) -> np.ndarray:
        """p_j(a), continued from the base point of germ ``j``."""
        tol = self.tolerances
        return track_point(
            self.germs[j],
            self.fam,
            self.base,
            self.germs[j].base_point,
            a,
            steps=tol.continuation_steps,
            max_halvings=tol.max_halvings,
            threshold=tol.transversality_threshold,
        )

    def moved_to(self, a_new: ParamPoint) -> "TraceProblem":
        """
        The same germs re-expanded at their intersection points with C_{a_new}.

        Raises:
            TrackingError: some base point cannot be continued to ``a_new``
        """
        germs = []
        for j, germ in enumerate(self.germs):
            try:
                point = self.track(j, a_new)
            except TrackingError as error:
                raise error.tagged(germ_index=j) from error
            germs.append(germ.recentered(point))
        logger.debug("problem_moved", germs=len(germs), shift=self.base.distance(a_new))
        return TraceProblem(
            fam=self.fam.with_base(a_new),
            germs=tuple(germs),
            base=a_new,
            tolerances=self.tolerances,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "germs": self.size,
            "base": self.base.to_dict(),
            "tolerances": self.tolerances.to_dict(),
        }
