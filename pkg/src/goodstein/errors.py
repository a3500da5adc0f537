"""Shared exception types."""

from __future__ import annotations


class GoodsteinError(Exception):
    """Base class for all package errors."""


class ParseError(GoodsteinError):
    """Malformed ordinal expression; carries the offending position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class NumericBlowup(GoodsteinError):
    """An intermediate integer exceeded the configured digit cap."""


class UnknownBeyondPrefix(GoodsteinError):
    """A query needs bases beyond a prefix that cannot be extended."""


class InfiniteUpgrade(GoodsteinError):
    """A base change needed the upgrade of a value whose upgrade is infinite."""


class BudgetExceeded(GoodsteinError):
    """An iteration budget ran out (expected for fast-growing functions)."""


class SearchBudgetExceeded(BudgetExceeded):
    """A bounded search scanned more candidates than allowed."""


class HierarchyError(GoodsteinError):
    """Invalid base hierarchy or hierarchy specification."""
