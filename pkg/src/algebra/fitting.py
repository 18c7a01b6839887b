"""
Least-Squares Polynomial Fitting

Multivariate polynomial fits of sampled complex values. The fit is computed in centered
and scaled variables by an SVD-based least-squares solve, then mapped back to the
original variables.
"""

from dataclasses import dataclass
from itertools import product as cartesian
from typing import Dict, List, Sequence, Tuple

import numpy as np

from src.algebra.polynomial import Exponent, MultiPoly, Scalar
from src.utils.exceptions import DimensionMismatchError, RankDeficientDesignError

Sample = Tuple[Sequence[Scalar], Scalar]


@dataclass(frozen=True)
class PolyFit:
    """Result of :func:`fit_poly`."""

    poly: MultiPoly
    centered: MultiPoly
    center: Tuple[complex, ...]
    scale: Tuple[float, ...]
    residual: float
    max_total_degree: int

    @property
    def coefficients(self) -> Dict[Exponent, complex]:
        return dict(self.poly.terms)

    def centered_leading_magnitude(self) -> float:
        """Largest coefficient magnitude among top-degree terms in the centered basis."""
        top = [abs(c) for e, c in self.centered.terms.items() if sum(e) == self.max_total_degree]
        return max(top, default=0.0)


def monomial_exponents(num_vars: int, max_total_degree: int) -> List[Exponent]:
    """All exponent vectors of total degree <= ``max_total_degree`` in graded order."""
    exponents = [
        e for e in cartesian(range(max_total_degree + 1), repeat=num_vars)
        if sum(e) <= max_total_degree
    ]
    return sorted(exponents, key=lambda e: (sum(e), tuple(-k for k in e)))


def fit_poly(samples: Sequence[Sample], max_total_degree: int) -> PolyFit:
    """
    Fit a polynomial of total degree <= ``max_total_degree`` to ``samples``.

    Args:
        samples: (parameter vector, value) pairs sharing one vector length
        max_total_degree: Highest total degree of the fitted monomials

    Returns:
        PolyFit with the polynomial and the maximum absolute error over the samples

    Raises:
        RankDeficientDesignError: too few samples or a numerically singular design
    """
    if not samples:
        raise RankDeficientDesignError("no samples to fit")
    points = np.array([[complex(v) for v in p] for p, _ in samples], dtype=complex)
    values = np.array([complex(v) for _, v in samples], dtype=complex)
    if points.ndim != 2:
        raise DimensionMismatchError("parameter vectors must share one length")
    num_vars = points.shape[1]
    exponents = monomial_exponents(num_vars, max_total_degree)
    if len(samples) < len(exponents):
        raise RankDeficientDesignError(
            "fewer samples than monomials", samples=len(samples), monomials=len(exponents)
        )

    center = points.mean(axis=0)
    spread = np.max(np.abs(points - center), axis=0)
    scale = np.where(spread > 0, spread, 1.0)
    t = (points - center) / scale

    design = np.array(
        [[np.prod([row[i] ** k for i, k in enumerate(e)]) for e in exponents] for row in t],
        dtype=complex,
    )
    norms = np.linalg.norm(design, axis=0)
    if np.any(norms == 0):
        raise RankDeficientDesignError("a monomial vanishes on every sample")
    solution, _, rank, _ = np.linalg.lstsq(design / norms, values, rcond=None)
    if rank < len(exponents):
        raise RankDeficientDesignError(
            "sample design is rank deficient", rank=int(rank), monomials=len(exponents)
        )
    coefficients = solution / norms
    residual = float(np.max(np.abs(design @ coefficients - values)))

    centered = MultiPoly(num_vars, dict(zip(exponents, coefficients)))
    substitution = [
        (MultiPoly.variable(num_vars, i) - complex(center[i])) / float(scale[i])
        for i in range(num_vars)
    ]
    poly = centered.compose(substitution)
    return PolyFit(
        poly=poly,
        centered=centered,
        center=tuple(complex(c) for c in center),
        scale=tuple(float(s) for s in scale),
        residual=residual,
        max_total_degree=max_total_degree,
    )
