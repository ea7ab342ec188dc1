"""Exception hierarchy.

Parse failures and domain failures are kept apart because the CLI maps them
to different exit codes (1 and 2).
"""

from __future__ import annotations


class VnfreeError(Exception):
    """Base class for every error raised by this package."""


class ParseError(VnfreeError):
    def __init__(self, message: str, line: int = 1, column: int = 1,
                 expected: frozenset[str] | set[str] = frozenset()):
        self.message = message
        self.line = line
        self.column = column
        self.expected = frozenset(expected)
        detail = f"{message} at line {line}, column {column}"
        if self.expected:
            detail += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(detail)


class DomainError(VnfreeError):
    """A well-formed request that the mathematics rejects."""


class WeightSumError(DomainError):
    pass


class EmptyAlgebra(DomainError):
    pass


class RangeError(DomainError):
    pass


class HypothesisViolation(DomainError):
    pass


class ExtrapolationRejected(DomainError):
    pass


class InternalInvariantViolation(DomainError):
    pass


class TypeMismatch(DomainError):
    pass


class UnknownGroup(DomainError):
    pass


class TableValidationError(DomainError):
    pass
