"""Exception hierarchy shared by every layer of the engine."""

from __future__ import annotations


class DdlError(Exception):
    """Base class for all engine errors."""


class ParseError(DdlError):
    def __init__(self, message: str, line: int, col: int, expected: frozenset[str] = frozenset()):
        self.line = line
        self.col = col
        self.expected = frozenset(expected)
        detail = f"{message} at line {line}, column {col}"
        if self.expected:
            detail += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(detail)
        self.message = message


class SortError(DdlError):
    """A variable is used at a sort other than the one its binder declares."""


class UnboundVariable(DdlError):
    pass


class UninterpretedSymbol(DdlError):
    pass


class UnexpandedMacro(DdlError):
    pass


class UnknownMacro(DdlError):
    pass


class ArityMismatch(DdlError):
    pass


class GroundingBlowup(DdlError):
    pass


class BudgetExceeded(DdlError):
    def __init__(self, message: str, stats: dict | None = None):
        super().__init__(message)
        self.stats = stats or {}


class UndeclaredSymbol(DdlError):
    pass


class UnknownSystem(DdlError):
    pass


class InconsistentAssumptions(DdlError):
    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result
