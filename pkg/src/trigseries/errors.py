"""Exception hierarchy.

The CLI maps :class:`ParseError` to exit code 2, :class:`DomainError` to exit
code 3 and :class:`InternalError` to exit code 4.
"""

from __future__ import annotations


class TDSError(Exception):
    """Base class for all errors raised by this package."""

    reason = "error"


class ParseError(TDSError, ValueError):
    """Malformed textual input (trig expressions, surds, matrices)."""

    reason = "parse"

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class DomainError(TDSError, ValueError):
    """A well-formed query outside the domain of the evaluator."""

    reason = "domain"


class RationalInput(DomainError):
    reason = "rational"


class NonRealInput(DomainError):
    reason = "nonreal"


class PerfectSquare(DomainError):
    reason = "square"


class ParityError(DomainError):
    reason = "parity"


class ConvergenceBound(DomainError):
    reason = "convergence"


class NotInGroup(DomainError):
    reason = "group"


class ResourceCap(DomainError):
    reason = "resource"


class PrecisionUnderflow(DomainError):
    reason = "precision"


class InternalError(TDSError, AssertionError):
    """An invariant that the mathematics guarantees has been violated."""

    reason = "internal"


class DegenerateDenominator(InternalError):
    reason = "degenerate"


class InsufficientPrecision(InternalError):
    reason = "truncation"
