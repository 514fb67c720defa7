"""Dyadic deontic logic with a maxim-based universal-law axiom.

Bounded model finding and validity checking over finite Carmo-Jones models,
a macro layer for maxims, three axiom systems and a maxim judge.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import (
    ArityMismatch, BudgetExceeded, DdlError, GroundingBlowup, InconsistentAssumptions, ParseError,
    SortError, UnboundVariable, UndeclaredSymbol, UnexpandedMacro, UninterpretedSymbol,
    UnknownMacro, UnknownSystem,
)
from .harness import TestReport, render_table, run_suite
from .kantian import (
    System, custom_ful, distributive_background, expand, get_system, kroy_ful, unguarded_ful,
)
from .kernel import (
    FrameConditions, Model, check_frame, enumerate_frames, evaluate, extension, extension_mask,
    holds,
)
from .scenario import Scenario, Verdict, judge, load_scenario, parse_scenario, render_verdict
from .search import Bounds, Budget, SearchResult, check_valid, find_model, ground
from .syntax import free_sorts, parse, parse_many, pretty, to_sexpr

__all__ = [
    "ArityMismatch", "Bounds", "Budget", "BudgetExceeded", "DdlError", "FrameConditions",
    "GroundingBlowup", "InconsistentAssumptions", "Model", "ParseError", "Scenario",
    "SearchResult", "SortError", "System", "TestReport", "UnboundVariable", "UndeclaredSymbol",
    "UnexpandedMacro", "UninterpretedSymbol", "UnknownMacro", "UnknownSystem", "Verdict",
    "check_frame", "check_valid", "custom_ful", "distributive_background", "enumerate_frames",
    "evaluate", "expand", "extension", "extension_mask", "find_model", "free_sorts",
    "get_system", "ground", "holds", "judge", "kroy_ful", "load_scenario", "parse",
    "parse_many", "parse_scenario", "pretty", "render_table", "render_verdict", "run_suite",
    "to_sexpr", "unguarded_ful",
]
