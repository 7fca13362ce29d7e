"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class SobolevBoundsError(Exception):
    """Base class for all errors raised by :mod:`sobolev_bounds`."""


class DomainError(SobolevBoundsError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class SingularParameterError(DomainError):
    """Parameters hit a pole of a Gamma factor or a non-positive integer ``c`` in 2F1."""


class RouteError(DomainError):
    """The requested evaluation route does not apply to the given arguments."""


class RangeError(SobolevBoundsError, OverflowError):
    """The result is finite mathematically but not representable as a double."""


class ConvergenceError(SobolevBoundsError, ArithmeticError):
    """An iterative procedure failed to reach its tolerance.

    ``estimate`` and ``abs_error_estimate`` carry the best result obtained
    before giving up, so callers can decide whether it is usable anyway.
    """

    def __init__(self, message: str, estimate: float | None = None,
                 abs_error_estimate: float | None = None) -> None:
        super().__init__(message)
        self.estimate = estimate
        self.abs_error_estimate = abs_error_estimate


class BracketingError(ConvergenceError):
    """A minimisation bracket does not enclose a descent."""


class ConsistencyError(SobolevBoundsError, ArithmeticError):
    """Two independent evaluations of the same closed form disagree."""
