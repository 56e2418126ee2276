"""Exception types shared across the package.

Every error a caller is expected to handle derives from PermdegError.
InputError covers everything wrong with user-supplied text or parameters
(CLI exit code 3); BudgetExceededError signals an exhausted search or
enumeration budget (CLI exit code 2) and always carries the partial
information that was established before giving up.
"""

from __future__ import annotations


class PermdegError(Exception):
    """Base class for all package errors."""


class InputError(PermdegError):
    """Bad user input: malformed text, invalid prime, out-of-range parameter."""


class ParseError(InputError):
    """Presentation text could not be parsed; carries a line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class InconsistentPresentationError(PermdegError):
    """The relations collapse the group below its declared order."""


class OrderCapExceededError(PermdegError):
    """Refinement produced a group larger than the supported cap."""


class BudgetExceededError(PermdegError):
    """A search or enumeration ran out of budget.

    Attributes:
        count: how many nodes/subgroups were processed before stopping.
        best_bound: best lower bound (or incumbent value) established so far,
            None if nothing was established.  Never a fake answer.
    """

    def __init__(self, message: str, count: int, best_bound: int | None = None):
        self.count = count
        self.best_bound = best_bound
        super().__init__(message)


class VerificationError(PermdegError):
    """A certificate or catalog expectation failed to verify (CLI exit code 1)."""
