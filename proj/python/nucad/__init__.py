"""Exact non-uniform cylindrical algebraic decomposition for real arithmetic."""

from ._core import (
    BudgetExceeded,
    NullificationFailure,
    ParseError,
    UnsupportedError,
    decide,
    parse,
    plot,
    qe,
    run_cli,
    solve,
    stats,
)

__all__ = [
    "BudgetExceeded",
    "NullificationFailure",
    "ParseError",
    "UnsupportedError",
    "decide",
    "parse",
    "plot",
    "qe",
    "run_cli",
    "solve",
    "stats",
]
