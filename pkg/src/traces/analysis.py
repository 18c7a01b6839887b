"""
Trace Analysis

Affineness of traces in the constants a_0, exact degrees of traces and norms in one
constant a_k0, the first-order PDE satisfied by each tracked coordinate, and the
degree bound for traces of sections.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.algebra.fitting import PolyFit, fit_poly
from src.algebra.polynomial import MultiPoly
from src.curves.family import ParamPoint, unit_vector
from src.geometry.polytope import contains, newton_polytope
from src.traces.problem import TraceProblem
from src.traces.sampling import (
    FLAVORS,
    axis_grid,
    constant_grid,
    default_grid_radius,
    sample_nodes,
    trace,
)
from src.utils.exceptions import (
    DegreeNotAttained,
    IndexOutOfRangeError,
    InvariantViolation,
    NoPolynomialFit,
    PolytopeError,
    TrackingError,
)
from src.utils.logger import get_logger

logger = get_logger(__name__)

SCALE_FLOOR = 1e-300


@dataclass(frozen=True)
class FitVerdict:
    """Affine fit of the trace of one function over the a_0 grid."""

    label: str
    is_within_degree: bool
    constant: complex
    slopes: Tuple[complex, ...]
    residual: float
    tol: float
    grid: Dict[str, Any]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "affine": self.is_within_degree,
            "residual": self.residual,
            "tol": self.tol,
            "constant": [self.constant.real, self.constant.imag],
            "slopes": [[s.real, s.imag] for s in self.slopes],
            "grid": self.grid,
        }


@dataclass(frozen=True)
class AffinenessReport:
    verdicts: Tuple[FitVerdict, ...]

    @property
    def positive(self) -> bool:
        return all(v.is_within_degree for v in self.verdicts)

    @property
    def max_residual(self) -> float:
        return max(v.residual for v in self.verdicts)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "positive": self.positive,
            "max_residual": self.max_residual,
            "coordinates": [v.to_dict() for v in self.verdicts],
        }


@dataclass(frozen=True)
class DegreeProfile:
    """Least-degree fit of a trace or norm along one constant a_k0."""

    flavor: str
    k: int
    degree: int
    residuals: Tuple[float, ...]
    leading_magnitude: float
    exact: bool
    radius: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "flavor": self.flavor,
            "k": self.k,
            "degree": self.degree,
            "residuals": list(self.residuals),
            "leading_magnitude": self.leading_magnitude,
            "exact": self.exact,
            "radius": self.radius,
        }


def _unit_scale(values: np.ndarray) -> float:
    scale = float(np.max(np.abs(values), initial=0.0))
    return scale if scale > SCALE_FLOOR else 1.0


def affineness_test(
    prob: TraceProblem,
    fs: Optional[Sequence[MultiPoly]] = None,
    grid_radius: Optional[float] = None,
    grid_size: Optional[int] = None,
    coordinates: Optional[Sequence[int]] = None,
) -> AffinenessReport:
    """
    Fit Tr(f) by a polynomial of total degree 1 in a_0 on a real tensor grid around a0_0.

    ``fs`` defaults to the coordinate functions x_0..x_{n-1}; ``coordinates`` restricts
    the test to the listed coordinates (single-coordinate mode). Values are divided by
    their largest magnitude before the residual is compared with the fit tolerance.

    Args:
        prob: Trace problem to sample
        fs: Functions whose traces are fitted
        grid_radius: Half-width of the grid, defaults to the configured or tracking radius
        grid_size: Nodes per axis, defaults to the problem tolerances
        coordinates: Coordinate indices used when ``fs`` is None

    Returns:
        AffinenessReport with one verdict per function

    Raises:
        GridNodeError: tracking failed at a grid node
        RankDeficientDesignError: the grid does not span a_0
    """
    tol = prob.tolerances
    if fs is None:
        indices = list(coordinates) if coordinates is not None else list(range(prob.n))
        for i in indices:
            if not 0 <= i < prob.n:
                raise IndexOutOfRangeError("coordinate index out of range", i=i)
        fs = [MultiPoly.variable(prob.n, i) for i in indices]
        labels = [f"x{i}" for i in indices]
    else:
        labels = [f"f{i}" for i in range(len(fs))]

    radius = grid_radius if grid_radius is not None else default_grid_radius(prob)
    size = grid_size if grid_size is not None else tol.grid_size
    nodes = constant_grid(prob.fam.num_equations, radius, size)
    values = sample_nodes(prob, fs, nodes, flavor="trace")
    grid = {"radius": radius, "size": size, "nodes": len(nodes)}

    verdicts = []
    for col, label in enumerate(labels):
        scale = _unit_scale(values[:, col])
        fit = fit_poly(list(zip(nodes, values[:, col] / scale)), max_total_degree=1)
        affine = fit.poly * scale
        m = prob.fam.num_equations
        # Fitted in offsets from a0_0; reported against absolute a_0
        slopes = tuple(affine.coefficient(unit_vector(m, k)) for k in range(m))
        constant = affine.coefficient((0,) * m) - sum(
            s * c for s, c in zip(slopes, prob.base.constants)
        )
        verdict = FitVerdict(
            label=label,
            is_within_degree=fit.residual < tol.fit_tol,
            constant=complex(constant),
            slopes=tuple(complex(s) for s in slopes),
            residual=fit.residual,
            tol=tol.fit_tol,
            grid=grid,
        )
        verdicts.append(verdict)

    report = AffinenessReport(tuple(verdicts))
    logger.info(
        "affineness_verdict",
        positive=report.positive,
        max_residual=report.max_residual,
        radius=radius,
        size=size,
    )
    return report


def degree_profile(
    prob: TraceProblem,
    f: MultiPoly,
    k: int,
    max_probe_degree: Optional[int] = None,
    flavor: str = "trace",
    radius: Optional[float] = None,
) -> DegreeProfile:
    """
    Least degree d <= max_probe_degree such that the trace (or norm) of ``f`` is a
    polynomial of degree d in a_k0, other parameters frozen at a0.

    Raises:
        NoPolynomialFit: no probed degree reproduces the samples
    """
    if flavor not in FLAVORS:
        raise InvariantViolation("unknown flavor", invariant="flavor in (trace, norm)")
    if not 0 <= k < prob.fam.num_equations:
        raise IndexOutOfRangeError("parameter index out of range", k=k)
    tol = prob.tolerances
    top = tol.max_probe_degree if max_probe_degree is None else max_probe_degree
    radius = radius if radius is not None else default_grid_radius(prob, fraction=0.5)
    size = max(tol.grid_size, 2 * top + 3)

    nodes = axis_grid(prob.fam.num_equations, k, radius, size)
    values = sample_nodes(prob, [f], nodes, flavor=flavor)[:, 0]
    scale = _unit_scale(values)
    samples = [((node[k],), value / scale) for node, value in zip(nodes, values)]

    residuals: List[float] = []
    for d in range(top + 1):
        fit: PolyFit = fit_poly(samples, max_total_degree=d)
        residuals.append(fit.residual)
        if fit.residual < tol.fit_tol:
            leading = fit.centered_leading_magnitude()
            exact = leading > tol.leading_coefficient_tol
            if not exact:
                logger.warning("degree_not_attained", flavor=flavor, k=k, degree=d, leading=leading)
            return DegreeProfile(
                flavor=flavor,
                k=k,
                degree=d,
                residuals=tuple(residuals),
                leading_magnitude=leading,
                exact=exact,
                radius=radius,
            )

    raise NoPolynomialFit(
        f"{flavor} is not polynomial of degree <= {top} in the constant",
        flavor=flavor,
        k=k,
        best_residual=min(residuals),
    )


def degree_in_param(
    prob: TraceProblem,
    f: MultiPoly,
    k: int,
    max_probe_degree: Optional[int] = None,
    flavor: str = "trace",
    require_exact: bool = True,
) -> int:
    """
    Degree of the trace (or norm) of ``f`` in a_k0; see :func:`degree_profile`.

    Args:
        prob: Trace problem whose germs are tracked
        f: Function whose trace or norm is fitted
        k: Index of the constant a_k0 that varies
        max_probe_degree: Highest degree tried, defaults to the problem tolerances
        flavor: "trace" or "norm"
        require_exact: Reject a degree whose leading coefficient is not attained

    Returns:
        Least degree reproducing the samples

    Raises:
        NoPolynomialFit: no probed degree reproduces the samples
        DegreeNotAttained: ``require_exact`` and the leading coefficient is below
            the threshold
    """
    profile = degree_profile(prob, f, k, max_probe_degree=max_probe_degree, flavor=flavor)
    if require_exact and not profile.exact:
        raise DegreeNotAttained(
            f"{flavor} degree {profile.degree} is not attained",
            flavor=flavor,
            k=k,
            degree=profile.degree,
            leading=profile.leading_magnitude,
        )
    return profile.degree


def _tracked_coordinate(prob: TraceProblem, j: int, a: ParamPoint, i: int) -> complex:
    try:
        return complex(prob.track(j, a)[i])
    except TrackingError as error:
        raise error.tagged(germ_index=j) from error


def pde_check(prob: TraceProblem, j: int, i: int, k: int, h: float) -> float:
    """
    |d_{a_ki} x_i - x_i d_{a_k0} x_i| for germ ``j`` at a0, both sides by central differences.

    a_ki is the coefficient of x_i in the equation a_k0 + a_ki x_i + ... = 0 form, i.e. the
    negated slot of x_i in S_k.

    Returns:
        The residual, which decays like h^2 while h dominates rounding

    Raises:
        IndexOutOfRangeError: ``j`` is not a germ index
        TrackingError: a perturbed point cannot be tracked, tagged with the germ index
    """
    if not 0 <= j < prob.size:
        raise IndexOutOfRangeError("germ index out of range", j=j)
    slot = prob.fam.unit_slot(k, i)
    base = prob.base
    c = base.coefficients[k][slot]

    plus = _tracked_coordinate(prob, j, base.with_coefficient(k, slot, c - h), i)
    minus = _tracked_coordinate(prob, j, base.with_coefficient(k, slot, c + h), i)
    lhs = (plus - minus) / (2 * h)

    a_k0 = base.constants[k]
    up = _tracked_coordinate(prob, j, base.with_constant(k, a_k0 + h), i)
    down = _tracked_coordinate(prob, j, base.with_constant(k, a_k0 - h), i)
    x_i = complex(prob.germs[j].base_point[i])
    rhs = x_i * (up - down) / (2 * h)

    residual = float(abs(lhs - rhs))
    logger.debug("pde_checked", germ=j, i=i, k=k, h=h, residual=residual)
    return residual


def power_trace_relation_check(prob: TraceProblem, i: int, k: int, l: int, h: float) -> float:
    """
    |(l+1) d_{a_ki} Tr(x_i^l) - l d_{a_k0} Tr(x_i^(l+1))| at a0 by central differences,
    with a_ki as in :func:`pde_check`.
    """
    if l < 1:
        raise InvariantViolation("power must be at least 1", invariant="l >= 1")
    slot = prob.fam.unit_slot(k, i)
    base = prob.base
    c = base.coefficients[k][slot]
    x_i = MultiPoly.variable(prob.n, i)
    low, high = x_i**l, x_i ** (l + 1)

    lhs = (
        trace(prob, low, base.with_coefficient(k, slot, c - h))
        - trace(prob, low, base.with_coefficient(k, slot, c + h))
    ) / (2 * h)
    a_k0 = base.constants[k]
    rhs = (
        trace(prob, high, base.with_constant(k, a_k0 + h))
        - trace(prob, high, base.with_constant(k, a_k0 - h))
    ) / (2 * h)
    return float(abs((l + 1) * lhs - l * rhs))


def trace_degree_bound_check(prob: TraceProblem, h: MultiPoly, d: int, k: int) -> bool:
    """
    deg_{a_k0} Tr(h) <= d.

    The bound is guaranteed when NP(h) lies in d * conv(S_k u {0}); a violated
    precondition is logged, not enforced.
    """
    try:
        allowed = prob.fam.support_polytope(k).scaled(d)
        if not h.is_zero() and not contains(allowed, newton_polytope(h)):
            logger.warning("degree_bound_precondition_violated", k=k, d=d)
    except PolytopeError:
        logger.debug("degree_bound_precondition_unchecked", k=k, d=d)
    top = max(d + 1, prob.tolerances.max_probe_degree)
    degree = degree_in_param(prob, h, k, max_probe_degree=top, require_exact=False)
    return degree <= d
