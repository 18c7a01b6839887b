"""
Traces Module

Trace problems, trace and norm sampling, and their analysis in the curve parameters.
"""

from src.traces.analysis import (
    AffinenessReport,
    DegreeProfile,
    FitVerdict,
    affineness_test,
    degree_in_param,
    degree_profile,
    pde_check,
    power_trace_relation_check,
    trace_degree_bound_check,
)
from src.traces.problem import TraceProblem
from src.traces.sampling import norm, probe_tracking_radius, trace, tracked_points

__all__ = [
    "AffinenessReport",
    "DegreeProfile",
    "FitVerdict",
    "TraceProblem",
    "affineness_test",
    "degree_in_param",
    "degree_profile",
    "norm",
    "pde_check",
    "power_trace_relation_check",
    "probe_tracking_radius",
    "trace",
    "trace_degree_bound_check",
    "tracked_points",
]
