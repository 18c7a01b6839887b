"""
Curves Module

Moving curve families C_a and continuation of their intersections with germs.
"""

from src.curves.family import (
    CurveFamily,
    ParamPoint,
    bilinear_family,
    curve_residual,
    line_family,
    on_curve_check,
    transversality_check,
)
from src.curves.tracking import track_point

__all__ = [
    "CurveFamily",
    "ParamPoint",
    "bilinear_family",
    "curve_residual",
    "line_family",
    "on_curve_check",
    "track_point",
    "transversality_check",
]
