"""
Exception Hierarchy

Every failure raised by the toolkit derives from AbelTraceError. Errors that encode a
mathematical negative (a criterion that does not hold) set ``negative = True`` so the
command line can tell results from operational failures.
"""

from typing import Any, Dict, Optional


class AbelTraceError(Exception):
    """Base class for all toolkit errors."""

    negative = False

    def __init__(self, message: str, **context: Any) -> None:
        super().__init__(message)
        self.message = message
        self.context: Dict[str, Any] = {k: v for k, v in context.items() if v is not None}

    @property
    def reason(self) -> str:
        return type(self).__name__

    def __str__(self) -> str:
        if not self.context:
            return self.message
        details = ", ".join(f"{k}={v}" for k, v in sorted(self.context.items()))
        return f"{self.message} ({details})"


# Shapes and arguments


class DimensionMismatchError(AbelTraceError, ValueError):
    """Vector or polynomial dimensions disagree."""


class IndexOutOfRangeError(AbelTraceError, IndexError):
    """A variable, coordinate or equation index is out of range."""


class InvariantViolation(AbelTraceError, ValueError):
    """A value type was constructed with data breaking one of its invariants."""

    def __init__(self, message: str, invariant: str, **context: Any) -> None:
        super().__init__(message, invariant=invariant, **context)
        self.invariant = invariant


# Algebra


class GermDomainError(AbelTraceError, ValueError):
    """An offset lies outside the validity polydisc of a germ."""


class RankDeficientDesignError(AbelTraceError):
    """The sample design of a least-squares fit is numerically rank deficient."""


# Polytopes


class PolytopeError(AbelTraceError, ValueError):
    """Invalid polytope input (zero polynomial, unsupported dimension, ...)."""


class DegeneratePolytopeError(PolytopeError):
    """A polytope that must be full-dimensional is not."""


# Continuation


class TrackingError(AbelTraceError):
    """Base class for continuation failures; ``waypoint`` locates the failing step."""

    def __init__(self, message: str, waypoint: Optional[int] = None, **context: Any) -> None:
        super().__init__(message, waypoint=waypoint, **context)
        self.waypoint = waypoint

    def tagged(self, **context: Any) -> "TrackingError":
        """Copy of this error with additional context (germ index, grid node)."""
        merged = dict(self.context)
        merged.update(context)
        merged.pop("waypoint", None)
        return type(self)(self.message, waypoint=self.waypoint, **merged)


class NewtonDivergence(TrackingError):
    """The Newton corrector failed to contract."""


class LeftGermDomain(TrackingError):
    """An iterate left the validity radius of the germ."""


class TransversalityLoss(TrackingError):
    """The Jacobian determinant fell below the transversality threshold."""


class GridNodeError(AbelTraceError):
    """Tracking failed at one node of a sampling grid."""

    def __init__(self, message: str, node: Any, **context: Any) -> None:
        super().__init__(message, node=node, **context)
        self.node = node


# Traces


class NoPolynomialFit(AbelTraceError):
    """No polynomial of the probed degrees reproduces the sampled function."""

    negative = True


class DegreeNotAttained(AbelTraceError):
    """The least fitting degree has a leading coefficient below the threshold."""

    negative = True


# Residues


class GenericityFailure(AbelTraceError):
    """Multiple, defective or missing zeros of a square system."""


class UnsupportedDimension(AbelTraceError, ValueError):
    """The built-in solver cannot handle the requested dimension."""


class ZeroJacobian(AbelTraceError):
    """The Jacobian determinant vanishes at a zero."""


class VanishingCoordinate(AbelTraceError):
    """A zero has a vanishing coordinate where the toric form needs a torus point."""


# Reconstruction


class LinearFormNotFound(AbelTraceError):
    """No admissible linear form was found within the allowed attempts."""


class FitResidualExceeded(AbelTraceError):
    """A characteristic-polynomial coefficient is not polynomial of the expected degree."""

    negative = True


class ValidationFailed(AbelTraceError):
    """The reconstructed polynomial does not vanish on the germs."""

    negative = True


class DegreeMismatch(AbelTraceError):
    """The Bernstein count of the interpolant differs from the number of germs."""

    negative = True


# Command line


class ProblemFileError(AbelTraceError, ValueError):
    """A problem, polynomial or polytope file cannot be parsed or validated."""


class MissingClassSpec(AbelTraceError):
    """class-check was requested on a file without a class_spec section."""
