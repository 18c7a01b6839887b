"""
Picard Class Certificate

For a candidate class alpha given by the polytope of a globally generated representative,
the norm N_V(f_j) of a section f_j of E_j must be a polynomial in a_00 of degree exactly
MV(alpha, P_{E_j}, P_{L_1}, ..., P_{L_{n-2}}). The certificate compares observed and
predicted degrees divisor by divisor.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.algebra.polynomial import MultiPoly
from src.geometry.polytope import LatticePolytope, contains, mixed_volume, newton_polytope
from src.reconstruct.interpolation import InterpolationResult
from src.traces.analysis import degree_in_param
from src.traces.problem import TraceProblem
from src.utils.exceptions import DimensionMismatchError, IndexOutOfRangeError, InvariantViolation
from src.utils.logger import get_logger

logger = get_logger(__name__)

RETRY_SECTIONS = 5
CERTIFICATE_STREAM = 3


@dataclass(frozen=True)
class DivisorSpec:
    """Polytope P_E of an effective divisor and a section f with NP(f) in P_E."""

    polytope: LatticePolytope
    section: MultiPoly


@dataclass(frozen=True)
class ClassSpec:
    alpha_polytope: LatticePolytope
    divisors: Tuple[DivisorSpec, ...]
    bundle_polytopes: Tuple[LatticePolytope, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "divisors", tuple(self.divisors))
        object.__setattr__(self, "bundle_polytopes", tuple(self.bundle_polytopes))
        if not self.divisors:
            raise InvariantViolation("a class spec needs at least one divisor", invariant="s >= 1")
        n = self.alpha_polytope.ambient_dim
        polytopes = [d.polytope for d in self.divisors] + list(self.bundle_polytopes)
        if any(p.ambient_dim != n for p in polytopes):
            raise DimensionMismatchError("class spec polytopes live in different dimensions")
        for j, divisor in enumerate(self.divisors):
            if divisor.section.num_vars != n or divisor.section.is_zero():
                raise InvariantViolation(
                    "section must be a nonzero polynomial in n variables",
                    invariant="section",
                    divisor=j,
                )
            if not contains(divisor.polytope, newton_polytope(divisor.section)):
                raise InvariantViolation(
                    "section is not supported in its divisor polytope",
                    invariant="NP(f_j) in P_E_j",
                    divisor=j,
                )

    @property
    def n(self) -> int:
        return self.alpha_polytope.ambient_dim


@dataclass(frozen=True)
class DivisorReport:
    index: int
    observed: int
    predicted: int
    sections_tried: int

    @property
    def matches(self) -> bool:
        return self.observed == self.predicted

    def to_dict(self) -> Dict[str, Any]:
        return {
            "divisor": self.index,
            "observed": self.observed,
            "predicted": self.predicted,
            "matches": self.matches,
            "sections_tried": self.sections_tried,
        }


@dataclass(frozen=True)
class CertificateReport:
    divisors: Tuple[DivisorReport, ...]
    bernstein_degree: int
    cross_checks: Dict[int, Tuple[int, ...]] = field(default_factory=dict)

    @property
    def positive(self) -> bool:
        return all(d.matches for d in self.divisors)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "positive": self.positive,
            "bernstein_degree": self.bernstein_degree,
            "divisors": [d.to_dict() for d in self.divisors],
            "cross_checks": {str(k): list(v) for k, v in sorted(self.cross_checks.items())},
        }


def _random_section(
    lattice: Sequence[Tuple[int, ...]], n: int, rng: np.random.Generator
) -> MultiPoly:
    values = rng.normal(size=len(lattice)) + 1j * rng.normal(size=len(lattice))
    return MultiPoly(n, dict(zip(lattice, values)))


def observed_degree(
    prob: TraceProblem, section: MultiPoly, k: int, predicted: int
) -> int:
    top = max(prob.tolerances.max_probe_degree, predicted + 1)
    return degree_in_param(prob, section, k, max_probe_degree=top, flavor="norm")


def class_certificate(
    prob: TraceProblem,
    result: InterpolationResult,
    spec: ClassSpec,
    parameters: Optional[Sequence[int]] = None,
) -> CertificateReport:
    """
    Compare deg_{a_00} N_V(f_j) with MV(alpha, P_{E_j}, P_{L_1}, ...) for every divisor.

    When the observed degree falls short, up to five random sections supported on the
    lattice points of P_{E_j} are tried, since a special section can drop degree.

    Args:
        prob: Trace problem the interpolant was built from
        result: Interpolation result whose Bernstein degree is reported alongside
        spec: Polytope of alpha, the divisors E_j with sections and the bundles L_i
        parameters: Further constants a_k0 (k > 0) measured as a cross-check only

    Returns:
        CertificateReport, positive when every divisor reaches its predicted degree

    Raises:
        NoPolynomialFit: some norm is not polynomial in a_00
        DegreeNotAttained: an observed norm degree has a vanishing leading coefficient
    """
    if spec.n != prob.n or result.q.num_vars != prob.n:
        raise DimensionMismatchError("class spec dimension differs from the problem", n=prob.n)
    if len(spec.bundle_polytopes) != prob.n - 2:
        raise DimensionMismatchError(
            "class spec needs n-2 bundle polytopes",
            expected=prob.n - 2,
            got=len(spec.bundle_polytopes),
        )
    rng = np.random.default_rng([prob.tolerances.seed, CERTIFICATE_STREAM])

    reports: List[DivisorReport] = []
    for j, divisor in enumerate(spec.divisors):
        predicted = mixed_volume(
            [spec.alpha_polytope, divisor.polytope] + list(spec.bundle_polytopes)
        )
        observed = observed_degree(prob, divisor.section, 0, predicted)
        tried = 1
        if observed < predicted:
            lattice = divisor.polytope.lattice_points()
            while observed < predicted and tried <= RETRY_SECTIONS:
                section = _random_section(lattice, prob.n, rng)
                observed = max(observed, observed_degree(prob, section, 0, predicted))
                tried += 1
        logger.info(
            "divisor_certified", divisor=j, observed=observed, predicted=predicted, tried=tried
        )
        reports.append(DivisorReport(j, observed, predicted, tried))

    cross_checks: Dict[int, Tuple[int, ...]] = {}
    for k in parameters or ():
        if k == 0:
            continue
        if not 0 <= k < prob.fam.num_equations:
            raise IndexOutOfRangeError("parameter index out of range", k=k)
        cross_checks[k] = tuple(
            observed_degree(prob, d.section, k, r.predicted)
            for d, r in zip(spec.divisors, reports)
        )

    return CertificateReport(
        divisors=tuple(reports),
        bernstein_degree=result.bernstein_degree,
        cross_checks=cross_checks,
    )
