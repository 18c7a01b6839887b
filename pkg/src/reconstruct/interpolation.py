"""
Interpolation

Reconstruct the hypersurface through the germs from trace data. The power sums of a
linear form u over the tracked points give, through Newton's identities, the
coefficients of F_u(Y, a) = prod_j (Y - u(p_j(a))); these are fitted as polynomials in
a_0, and substituting Y = u(x), a_k0 = P_k(a0'_k, x) yields a polynomial vanishing on
every germ.

The substituted polynomial may carry extra factors coming from reducible members of the
curve family. The reported interpolant is the polynomial of least generic weight
supported in conv(NP(Q_raw) u {0}) that vanishes on sampled germ points.
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import svd

from src.algebra.germ import LinearForm, germ_eval
from src.algebra.polynomial import Exponent, MultiPoly
from src.algebra.fitting import fit_poly
from src.algebra.symmetric import monic_coefficients, newton_to_elementary
from src.geometry.polytope import LatticePolytope, mixed_volume, newton_polytope
from src.traces.problem import TraceProblem
from src.traces.sampling import constant_grid, default_grid_radius, sample_nodes
from src.utils.exceptions import (
    DegreeMismatch,
    DimensionMismatchError,
    FitResidualExceeded,
    InvariantViolation,
    LinearFormNotFound,
    ValidationFailed,
)
from src.utils.logger import get_logger

logger = get_logger(__name__)

LINEAR_FORM_ATTEMPTS = 32
ADMISSIBILITY_TOL = 1e-3
NULL_TOL = 1e-9
WEIGHTS = (1.0, math.sqrt(2.0), math.sqrt(3.0))

# Seed streams for germ sampling
EXTRACTION_STREAM = 1
VALIDATION_STREAM = 2


# Linear forms


def admissibility_gaps(prob: TraceProblem, u: LinearForm) -> List[float]:
    """|<u, normal_j>| / |u| for every germ."""
    if u.num_vars != prob.n:
        raise DimensionMismatchError("linear form lives in a different dimension", n=prob.n)
    coefficients = np.array(u.coefficients)
    return [
        float(abs(coefficients @ germ.normal()) / u.norm()) for germ in prob.germs
    ]


def is_admissible(prob: TraceProblem, u: LinearForm) -> bool:
    return all(gap > ADMISSIBILITY_TOL for gap in admissibility_gaps(prob, u))


def choose_linear_form(
    prob: TraceProblem, attempts: int = LINEAR_FORM_ATTEMPTS, seed: Optional[int] = None
) -> LinearForm:
    """
    Random complex unit form u with |<u, normal_j>| > 1e-3 |u| at every base point.

    Args:
        prob: Trace problem whose germ normals must be avoided
        attempts: Number of random draws
        seed: Overrides the problem seed

    Raises:
        LinearFormNotFound: no admissible form within ``attempts`` draws
    """
    if attempts < 1:
        raise LinearFormNotFound("no attempts allowed", attempts=attempts)
    rng = np.random.default_rng(prob.tolerances.seed if seed is None else seed)
    offenders = set()
    for _ in range(attempts):
        draw = rng.normal(size=prob.n) + 1j * rng.normal(size=prob.n)
        u = LinearForm(tuple(draw / np.linalg.norm(draw)))
        gaps = admissibility_gaps(prob, u)
        bad = [j for j, gap in enumerate(gaps) if gap <= ADMISSIBILITY_TOL]
        if not bad:
            return u
        offenders.update(bad)
    raise LinearFormNotFound(
        "no admissible linear form found", attempts=attempts, germs=tuple(sorted(offenders))
    )


# Characteristic polynomial


@dataclass(frozen=True)
class CharPoly:
    """Coefficients e_1..e_N of F_u as polynomials in the offsets t = a_0 - a0_0."""

    degree: int
    elementary: Tuple[MultiPoly, ...]
    center: Tuple[complex, ...]
    residuals: Tuple[float, ...]

    def coefficients_at(self, constants: Sequence[complex]) -> List[complex]:
        offsets = [complex(c) - z for c, z in zip(constants, self.center)]
        return [e(offsets) for e in self.elementary]

    def roots_at(self, constants: Sequence[complex]) -> np.ndarray:
        """The values u(p_j(a)) at constants a_0."""
        return np.roots(monic_coefficients(self.coefficients_at(constants)))

    def fitted_degrees(self, rel_tol: float = 1e-8) -> List[int]:
        return [e.pruned(rel_tol).total_degree() for e in self.elementary]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "degree": self.degree,
            "center": [[c.real, c.imag] for c in self.center],
            "residuals": list(self.residuals),
            "elementary": [e.to_pairs() for e in self.elementary],
        }


def characteristic_poly(
    prob: TraceProblem, u: LinearForm, grid_radius: Optional[float] = None
) -> CharPoly:
    """
    Fit e_l(a_0) of degree <= l from the power sums Tr(u^l), l = 1..N.

    The power sums are sampled on a grid of constants around a0_0 and turned into
    elementary symmetric functions by Newton's identities before fitting.

    Returns:
        CharPoly whose coefficients are polynomials in the offsets a_0 - a0_0

    Raises:
        FitResidualExceeded: some e_l is not a polynomial of degree <= l
    """
    tol = prob.tolerances
    size = prob.size
    radius = grid_radius if grid_radius is not None else default_grid_radius(prob)
    nodes = constant_grid(prob.fam.num_equations, radius, max(tol.grid_size, size + 2))

    u_poly = u.as_poly()
    sums = sample_nodes(prob, [u_poly**level for level in range(1, size + 1)], nodes)
    elementary = np.array([newton_to_elementary(row) for row in sums], dtype=complex)

    fitted, residuals = [], []
    for level in range(1, size + 1):
        values = elementary[:, level - 1]
        scale = float(np.max(np.abs(values), initial=0.0)) or 1.0
        fit = fit_poly(list(zip(nodes, values / scale)), max_total_degree=level)
        residuals.append(fit.residual)
        if fit.residual >= tol.fit_tol:
            raise FitResidualExceeded(
                "elementary symmetric function is not polynomial of the expected degree",
                level=level,
                residual=fit.residual,
                tol=tol.fit_tol,
            )
        fitted.append(fit.poly * scale)

    logger.debug("characteristic_poly_fitted", degree=size, residuals=residuals)
    return CharPoly(
        degree=size,
        elementary=tuple(fitted),
        center=prob.base.constants,
        residuals=tuple(residuals),
    )


def substitute(prob: TraceProblem, char: CharPoly, u: LinearForm) -> MultiPoly:
    """F_u(u(x), P(a0', x)): Y -> u(x) and a_k0 -> P_k(a0'_k, x)."""
    shifts = [
        prob.fam.equation(k, prob.base) - prob.base.constants[k]
        for k in range(prob.fam.num_equations)
    ]
    u_poly = u.as_poly()
    result = u_poly**char.degree
    for level, e in enumerate(char.elementary, start=1):
        result = result + ((-1) ** level) * e.compose(shifts) * u_poly ** (char.degree - level)
    return result


# Germ sampling


def germ_samples(prob: TraceProblem, per_germ: int, stream: int) -> List[Tuple[complex, ...]]:
    """Deterministic complex points on every germ, within half its radius."""
    points = []
    for j, germ in enumerate(prob.germs):
        rng = np.random.default_rng([prob.tolerances.seed, stream, j])
        k = germ.dimension - 1
        for _ in range(per_germ):
            magnitude = 0.5 * germ.radius * rng.uniform(0.25, 1.0, size=k)
            phase = np.exp(2j * np.pi * rng.uniform(size=k))
            points.append(germ_eval(germ, tuple(magnitude * phase)))
    return points


def germ_residual(prob: TraceProblem, q: MultiPoly, per_germ: Optional[int] = None) -> float:
    """max |q| over validation samples on the germs."""
    count = per_germ if per_germ is not None else prob.tolerances.validation_offsets
    return max(abs(q(p)) for p in germ_samples(prob, count, VALIDATION_STREAM))


def _monomial_row(point: Sequence[complex], exponents: Sequence[Exponent]) -> List[complex]:
    return [
        math.prod(complex(point[i]) ** e for i, e in enumerate(exponent) if e)
        for exponent in exponents
    ]


def extract_germ_component(prob: TraceProblem, raw_q: MultiPoly) -> MultiPoly:
    """
    Least-weight polynomial supported in conv(NP(raw_q) u {0}) vanishing on the germs.

    Monomials are ordered by a generic positive weight; the first prefix whose sample
    matrix has a numerical null vector determines the polynomial. Returns ``raw_q``
    itself when no prefix is singular.
    """
    n = raw_q.num_vars
    hull = LatticePolytope.from_points([(0,) * n] + list(raw_q.terms))
    weights = WEIGHTS[:n]
    order = sorted(
        hull.lattice_points(), key=lambda e: (sum(w * k for w, k in zip(weights, e)), e)
    )
    per_germ = max(prob.tolerances.validation_offsets, math.ceil(2 * len(order) / prob.size) + 1)
    samples = germ_samples(prob, per_germ, EXTRACTION_STREAM)
    matrix = np.array([_monomial_row(p, order) for p in samples], dtype=complex)
    norms = np.linalg.norm(matrix, axis=0)
    norms[norms == 0] = 1.0
    matrix = matrix / norms

    for size in range(1, len(order) + 1):
        _, singular, vh = svd(matrix[:, :size])
        if singular[-1] <= NULL_TOL * singular[0]:
            vector = vh[-1].conj() / norms[:size]
            q = MultiPoly(n, dict(zip(order[:size], vector)))
            logger.debug("germ_component_extracted", monomials=size, of=len(order))
            return q.normalized().pruned(prob.tolerances.support_tol)
    logger.warning("germ_component_not_found", monomials=len(order))
    return raw_q


# Interpolation


@dataclass(frozen=True)
class InterpolationResult:
    q: MultiPoly
    u: LinearForm
    char_poly: CharPoly
    germ_residual: float
    bernstein_degree: int
    raw_q: MultiPoly

    def to_dict(self) -> Dict[str, Any]:
        return {
            "q": self.q.to_pairs(),
            "u": self.u.to_list(),
            "germ_residual": self.germ_residual,
            "bernstein_degree": self.bernstein_degree,
            "raw_terms": len(self.raw_q.terms),
            "char_poly_residuals": list(self.char_poly.residuals),
        }


def bernstein_degree(prob: TraceProblem, q: MultiPoly) -> int:
    """MV(NP(q), conv(S_0 u {0}), ..., conv(S_{n-2} u {0}))."""
    polytopes = [newton_polytope(q)]
    polytopes.extend(prob.fam.support_polytope(k) for k in range(prob.fam.num_equations))
    return mixed_volume(polytopes)


def interpolate(
    prob: TraceProblem, u: Optional[LinearForm] = None, char: Optional[CharPoly] = None
) -> InterpolationResult:
    """
    The normalized polynomial Q vanishing on all germs, with its Bernstein degree.

    Args:
        prob: Trace problem holding the germs and the curve family
        u: Admissible linear form. If None, one is drawn with the problem seed
        char: Characteristic polynomial already fitted for ``u``

    Returns:
        InterpolationResult with Q, the raw substitution and the degree checks

    Raises:
        LinearFormNotFound: no admissible linear form
        FitResidualExceeded: trace data are not polynomial of the expected degrees
        ValidationFailed: Q does not vanish on the germs
        DegreeMismatch: the Bernstein count of Q differs from N
    """
    tol = prob.tolerances
    if char is not None and u is None:
        raise InvariantViolation(
            "a precomputed characteristic polynomial needs its linear form", invariant="u"
        )
    u = u if u is not None else choose_linear_form(prob)
    char = char if char is not None else characteristic_poly(prob, u)
    raw_q = substitute(prob, char, u).normalized().pruned(tol.support_tol)
    q = extract_germ_component(prob, raw_q)

    residual = germ_residual(prob, q)
    if residual >= tol.validation_tol:
        raise ValidationFailed(
            "interpolant does not vanish on the germs", residual=residual, tol=tol.validation_tol
        )
    degree = bernstein_degree(prob, q)
    if degree != prob.size:
        raise DegreeMismatch(
            "Bernstein count of the interpolant differs from the number of germs",
            bernstein_degree=degree,
            germs=prob.size,
        )
    logger.info(
        "interpolant_validated", terms=len(q.terms), residual=residual, bernstein_degree=degree
    )
    return InterpolationResult(
        q=q,
        u=u,
        char_poly=char,
        germ_residual=residual,
        bernstein_degree=degree,
        raw_q=raw_q,
    )
