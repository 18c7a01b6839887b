"""
Trace and Norm Sampling

Tr_V(f)(a) = sum_j f(p_j(a)) and N_V(f)(a) = prod_j f(p_j(a)), evaluated by tracking
every germ from a0 to a. Grid helpers sample these functions over the constants a_0.
"""

import math
from itertools import product as cartesian
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.algebra.polynomial import MultiPoly
from src.curves.family import ParamPoint
from src.traces.problem import TraceProblem
from src.utils.exceptions import GridNodeError, InvariantViolation, TrackingError
from src.utils.logger import get_logger

logger = get_logger(__name__)

FLAVORS = ("trace", "norm")
PROBE_MAX_RADIUS = 1.0
PROBE_ITERATIONS = 12

Node = Tuple[float, ...]


def tracked_points(prob: TraceProblem, a: ParamPoint) -> List[np.ndarray]:
    """p_0(a), ..., p_{N-1}(a); tracker errors are tagged with the germ index."""
    points = []
    for j in range(prob.size):
        try:
            points.append(prob.track(j, a))
        except TrackingError as error:
            raise error.tagged(germ_index=j) from error
    return points


def trace(prob: TraceProblem, f: MultiPoly, a: ParamPoint) -> complex:
    """
    Tr(f)(a), the sum of f over the germ points tracked to ``a``.

    Raises:
        TrackingError: some germ cannot be continued to ``a``, tagged with its index
    """
    return complex(sum(f(p) for p in tracked_points(prob, a)))


def norm(prob: TraceProblem, f: MultiPoly, a: ParamPoint) -> complex:
    """Product of f over the tracked points."""
    return complex(math.prod(f(p) for p in tracked_points(prob, a)))


def combine(points: Sequence[np.ndarray], f: MultiPoly, flavor: str) -> complex:
    """Trace or norm of ``f`` over already tracked points."""
    if flavor == "trace":
        return complex(sum(f(p) for p in points))
    if flavor == "norm":
        return complex(math.prod(f(p) for p in points))
    raise InvariantViolation("unknown flavor", invariant="flavor in (trace, norm)", flavor=flavor)


def constant_grid(num_axes: int, radius: float, size: int) -> List[Node]:
    """Tensor grid of real offsets in [-radius, radius]^num_axes, ``size`` per axis."""
    axis = np.linspace(-radius, radius, size)
    return [tuple(float(v) for v in node) for node in cartesian(axis, repeat=num_axes)]


def axis_grid(num_axes: int, k: int, radius: float, size: int) -> List[Node]:
    """Offsets moving only the constant a_k0."""
    nodes = []
    for value in np.linspace(-radius, radius, size):
        node = [0.0] * num_axes
        node[k] = float(value)
        nodes.append(tuple(node))
    return nodes


def sample_nodes(
    prob: TraceProblem,
    fs: Sequence[MultiPoly],
    nodes: Sequence[Node],
    flavor: str = "trace",
) -> np.ndarray:
    """
    Values of the trace (or norm) of each ``f`` at a0 shifted by each node offset.

    Returns an array of shape (len(nodes), len(fs)).

    Raises:
        GridNodeError: tracking failed at a node
    """
    values = np.zeros((len(nodes), len(fs)), dtype=complex)
    for row, node in enumerate(nodes):
        try:
            points = tracked_points(prob, prob.base.shifted(node))
        except TrackingError as error:
            raise GridNodeError(
                f"tracking failed at grid node: {error}", node=node, reason=error.reason
            ) from error
        for col, f in enumerate(fs):
            values[row, col] = combine(points, f, flavor)
    return values


def probe_tracking_radius(prob: TraceProblem, max_radius: float = PROBE_MAX_RADIUS) -> float:
    """
    Largest box radius around a0_0 (found by bisection) whose corners all track.

    Raises:
        GridNodeError: not even a tiny box can be tracked
    """

    def reachable(radius: float) -> bool:
        corners = cartesian((-radius, radius), repeat=prob.fam.num_equations)
        try:
            for corner in corners:
                tracked_points(prob, prob.base.shifted(corner))
        except TrackingError:
            return False
        return True

    if reachable(max_radius):
        return max_radius
    low, high = 0.0, max_radius
    for _ in range(PROBE_ITERATIONS):
        middle = 0.5 * (low + high)
        if reachable(middle):
            low = middle
        else:
            high = middle
    if low == 0.0:
        raise GridNodeError("no trackable neighborhood of the base parameter", node=None)
    logger.debug("tracking_radius_probed", radius=low)
    return low


def default_grid_radius(prob: TraceProblem, fraction: float = 0.25) -> float:
    """Configured grid radius, or ``fraction`` of the probed tracking radius."""
    configured: Optional[float] = prob.tolerances.grid_radius
    if configured is not None:
        return configured
    return fraction * probe_tracking_radius(prob)
