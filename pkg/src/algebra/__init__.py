"""
Algebra Module

Sparse polynomials, analytic germs, Newton identities and least-squares fitting.
"""

from src.algebra.fitting import PolyFit, fit_poly, monomial_exponents
from src.algebra.germ import GermGraph, LinearForm, germ_eval, germ_from_polynomial
from src.algebra.polynomial import MultiPoly, distance_up_to_scale, poly_diff, poly_eval
from src.algebra.symmetric import newton_to_elementary, power_sums

__all__ = [
    "GermGraph",
    "LinearForm",
    "MultiPoly",
    "PolyFit",
    "distance_up_to_scale",
    "fit_poly",
    "germ_eval",
    "germ_from_polynomial",
    "monomial_exponents",
    "newton_to_elementary",
    "poly_diff",
    "poly_eval",
    "power_sums",
]
