"""Multi-base Goodstein processes with a certified ordinal calculus."""

from . import assignment, classify, hierarchy, ordinal, process, upgrade
from .errors import (
    BudgetExceeded,
    GoodsteinError,
    HierarchyError,
    InfiniteUpgrade,
    NumericBlowup,
    ParseError,
    SearchBudgetExceeded,
    UnknownBeyondPrefix,
)

__all__ = [
    "assignment",
    "classify",
    "hierarchy",
    "ordinal",
    "process",
    "upgrade",
    "BudgetExceeded",
    "GoodsteinError",
    "HierarchyError",
    "InfiniteUpgrade",
    "NumericBlowup",
    "ParseError",
    "SearchBudgetExceeded",
    "UnknownBeyondPrefix",
]
