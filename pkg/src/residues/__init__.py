"""
Residues Module

Square systems, global residue sums and the residue form of trace derivatives.
"""

from src.residues.residue import (
    DerivativeCheck,
    khovanskii_predict,
    local_derivative_residue,
    residue_sum,
    residue_terms,
    trace_derivative_check,
)
from src.residues.solver import SquareSystem, newton_polish, solve_square

__all__ = [
    "DerivativeCheck",
    "SquareSystem",
    "khovanskii_predict",
    "local_derivative_residue",
    "newton_polish",
    "residue_sum",
    "residue_terms",
    "solve_square",
    "trace_derivative_check",
]
