"""
Reconstruct Module

Interpolating hypersurfaces from trace data and the Picard class certificate.
"""

from src.reconstruct.certificate import (
    CertificateReport,
    ClassSpec,
    DivisorReport,
    DivisorSpec,
    class_certificate,
)
from src.reconstruct.interpolation import (
    CharPoly,
    InterpolationResult,
    characteristic_poly,
    choose_linear_form,
    interpolate,
    is_admissible,
)

__all__ = [
    "CertificateReport",
    "CharPoly",
    "ClassSpec",
    "DivisorReport",
    "DivisorSpec",
    "InterpolationResult",
    "characteristic_poly",
    "choose_linear_form",
    "class_certificate",
    "interpolate",
    "is_admissible",
]
