"""Exception types shared across the package.

Every error raised deliberately by this library derives from TreeDensityError,
so callers can catch one base class. The CLI maps the subclasses onto its
exit codes (2 for bad input, 3 for refused budgets, 4 for I/O trouble).
"""

from __future__ import annotations


class TreeDensityError(Exception):
    """Base class for all errors raised by treedensity."""


class ParseError(TreeDensityError, ValueError):
    """Malformed tree text. Carries the byte offset of the first bad character."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class StructureError(ParseError):
    """Text parsed but described an invalid tree (e.g. a one-child vertex)."""


class PreconditionError(TreeDensityError, ValueError):
    """An argument violated a documented precondition."""


class BudgetError(TreeDensityError, RuntimeError):
    """Work was refused because it would exceed a configured resource cap.

    The message always names the quantity that tripped the cap so the caller
    can decide whether to raise the cap and retry.
    """


class SingularityError(TreeDensityError, ZeroDivisionError):
    """A simplex functional was evaluated at a pole of its denominator."""


class CacheError(TreeDensityError, RuntimeError):
    """A persisted frontier cache file could not be read back consistently."""
