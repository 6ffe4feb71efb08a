"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class KatugampolaError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(KatugampolaError, ValueError):
    """An argument lies outside the domain of an operation.

    :attr field: name of the offending argument, if one can be singled out.
    """

    def __init__(self, message: str, field: str | None = None) -> None:
        super().__init__(message)
        self.field = field


class PoleError(DomainError):
    """The Gamma function was evaluated at one of its poles."""


class ToleranceNotReached(KatugampolaError, ArithmeticError):
    """Adaptive quadrature ran out of refinement depth.

    The best available estimate and its error estimate are kept so that
    callers can decide whether the result is still usable.
    """

    def __init__(self, message: str, estimate: float, error: float) -> None:
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class SingularPivotError(KatugampolaError, ArithmeticError):
    """The algebraic constraint of the marching scheme became singular."""


class ConsistencyError(DomainError):
    """The initial value is incompatible with the right-hand side at t = 0."""
