"""
Point Tracking

Predictor-corrector continuation of the intersection point of one germ with the moving
curve C_a along a straight segment in parameter space. The square system solved at each
waypoint is (germ graph residual, curve residuals).
"""

from typing import Sequence

import numpy as np

from src.algebra.germ import GermGraph
from src.algebra.polynomial import Scalar
from src.curves.family import (
    CurveFamily,
    ParamPoint,
    system_jacobian,
    system_residual,
)
from src.utils.exceptions import (
    InvariantViolation,
    LeftGermDomain,
    NewtonDivergence,
    TrackingError,
    TransversalityLoss,
)
from src.utils.logger import get_logger

logger = get_logger(__name__)

NEWTON_MAX_ITER = 25
STEP_TOL = 1e-13
RESIDUAL_TOL = 1e-10


def track_point(
    germ: GermGraph,
    fam: CurveFamily,
    a_start: ParamPoint,
    p_start: Sequence[Scalar],
    a_target: ParamPoint,
    steps: int = 10,
    max_halvings: int = 6,
    threshold: float = 1e-8,
) -> np.ndarray:
    """
    Continue p(a_start) = p_start to p(a_target).

    The segment is cut into ``steps`` waypoints. Each waypoint is reached by an Euler
    tangent predictor and a Newton corrector; a failing step is halved up to
    ``max_halvings`` times before the failure is reported.

    Args:
        germ: Germ the point stays on
        fam: Curve family; only the constants move along the path
        a_start: Parameters at which ``p_start`` is known
        p_start: Start point on the germ and on C_{a_start}
        a_target: Parameters to reach
        steps: Number of waypoints on the straight segment
        max_halvings: Step halvings allowed per waypoint
        threshold: Smallest admissible |det| of the system Jacobian

    Returns:
        The continued point p(a_target)

    Raises:
        NewtonDivergence: the corrector does not contract
        LeftGermDomain: an iterate leaves the germ's validity polydisc
        TransversalityLoss: the Jacobian determinant drops below ``threshold``
    """
    fam.check_params(a_start)
    fam.check_params(a_target)
    if steps < 1:
        raise InvariantViolation("continuation needs at least one step", invariant="steps >= 1")

    x = np.array([complex(v) for v in p_start], dtype=complex)
    if a_start.distance(a_target) == 0.0:
        return x

    try:
        x = _correct(germ, fam, a_start, x, threshold)
    except TrackingError as error:
        raise _at_waypoint(error, 0) from error

    t = 0.0
    for waypoint in range(1, steps + 1):
        x = _advance(
            germ, fam, a_start, a_target, x, t, waypoint / steps, threshold, max_halvings, waypoint
        )
        t = waypoint / steps
    return x


def _advance(
    germ: GermGraph,
    fam: CurveFamily,
    a_start: ParamPoint,
    a_target: ParamPoint,
    x: np.ndarray,
    t: float,
    t_end: float,
    threshold: float,
    max_halvings: int,
    waypoint: int,
) -> np.ndarray:
    """Move from parameter fraction ``t`` to ``t_end``, halving the step on failure."""
    step = t_end - t
    halvings = 0
    while t_end - t > 1e-15:
        size = min(step, t_end - t)
        try:
            x = _step(germ, fam, a_start, a_target, x, t, t + size, threshold)
        except TrackingError as error:
            if halvings >= max_halvings:
                raise _at_waypoint(error, waypoint) from error
            halvings += 1
            step = size / 2
            logger.debug(
                "tracking_step_halved", waypoint=waypoint, halvings=halvings, reason=error.reason
            )
            continue
        t += size
    return x


def _step(
    germ: GermGraph,
    fam: CurveFamily,
    a_start: ParamPoint,
    a_target: ParamPoint,
    x: np.ndarray,
    t0: float,
    t1: float,
    threshold: float,
) -> np.ndarray:
    a0 = a_start.lerp(a_target, t0)
    jacobian = system_jacobian(germ, fam, a0, x)
    if abs(np.linalg.det(jacobian)) < threshold:
        raise TransversalityLoss("Jacobian determinant below threshold at predictor")
    velocity = np.concatenate([[0j], fam.parameter_velocity(a_start, a_target, x)])
    tangent = -np.linalg.solve(jacobian, velocity)
    predicted = x + (t1 - t0) * tangent
    return _correct(germ, fam, a_start.lerp(a_target, t1), predicted, threshold)


def _correct(
    germ: GermGraph, fam: CurveFamily, a: ParamPoint, x: np.ndarray, threshold: float
) -> np.ndarray:
    """Newton iteration on the square system at fixed parameter ``a``."""
    previous = np.inf
    for iteration in range(NEWTON_MAX_ITER):
        _check_domain(germ, x)
        jacobian = system_jacobian(germ, fam, a, x)
        determinant = abs(np.linalg.det(jacobian))
        if determinant < threshold:
            raise TransversalityLoss(
                "Jacobian determinant below threshold", determinant=determinant
            )
        delta = np.linalg.solve(jacobian, system_residual(germ, fam, a, x))
        x = x - delta
        size = float(np.linalg.norm(delta))
        if size <= STEP_TOL * (1.0 + float(np.linalg.norm(x))):
            break
        if iteration > 0 and size > previous:
            raise NewtonDivergence("Newton correction does not contract", iteration=iteration)
        previous = size
    else:
        raise NewtonDivergence("Newton corrector did not converge", iterations=NEWTON_MAX_ITER)

    _check_domain(germ, x)
    residual = float(np.max(np.abs(system_residual(germ, fam, a, x))))
    if residual >= RESIDUAL_TOL:
        raise NewtonDivergence("corrected point misses the system", residual=residual)
    return x


def _check_domain(germ: GermGraph, x: np.ndarray) -> None:
    offset = germ.offset_of(x)
    if not germ.contains_offset(offset):
        raise LeftGermDomain(
            "iterate left the germ's validity radius",
            offset=max(abs(o) for o in offset),
            radius=germ.radius,
        )


def _at_waypoint(error: TrackingError, waypoint: int) -> TrackingError:
    context = {k: v for k, v in error.context.items() if k != "waypoint"}
    return type(error)(error.message, waypoint=waypoint, **context)
