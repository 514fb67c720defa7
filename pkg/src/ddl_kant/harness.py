"""Eight faithfulness tests run against the naive, kroy and custom systems.

A cell passes when the system behaves as the Kantian reading demands: the
validity tests pass when the sentence is valid at bounds, the scenario tests
pass when the maxim is judged prohibited, and so on.  The resulting grid is
compared against ``EXPECTED``.
"""

from __future__ import annotations

import dataclasses
import json
import time
from dataclasses import dataclass, field

from .errors import BudgetExceeded, InconsistentAssumptions
from .kantian import DEFAULT_WF_READING, SYSTEM_NAMES, System, distributive_background, get_system
from .scenario import corpus_path, judge, load_scenario
from .search import COUNTERMODEL, VALID, Bounds, Budget, check_valid
from .syntax import conj, parse, to_sexpr

PASS, FAIL, ERROR = "pass", "fail", "error"

OBLIGATION_UNIVERSALIZES = parse("""
(forall-open a (forall-term c (forall-subject (s p)
  (implies (ob (act a s) c) (ob (act a p) c)))))""")

NO_CONTRADICTORY_OBLIGATIONS = parse("""
(forall-term (a c) (not (and (ob a c) (ob (not a) c))))""")


@dataclass(frozen=True)
class FaithfulnessTest:
    id: str
    title: str
    kind: str  # validity | countermodel-existence | scenario | capability
    payload: object = None


TESTS = (
    FaithfulnessTest("T1", "FUL stronger than DDL", "countermodel-existence"),
    FaithfulnessTest("T2", "Obligation universalizes across people", "validity", OBLIGATION_UNIVERSALIZES),
    FaithfulnessTest("T3", "No contradictory obligations", "validity", NO_CONTRADICTORY_OBLIGATIONS),
    FaithfulnessTest("T4", "Distributive obligation", "validity", distributive_background()),
    FaithfulnessTest("T5", "Un-universalizable maxims prohibited", "scenario", "ununiversalizable.ked"),
    FaithfulnessTest("T6", "Robust to framing (evaluates maxims)", "capability"),
    FaithfulnessTest("T7", "Conventional acts (false promising)", "scenario", "false-promising.ked"),
    FaithfulnessTest("T8", "Natural acts (killing for sleep)", "scenario", "killing-for-sleep.ked"),
)

TEST_IDS = tuple(t.id for t in TESTS)
COLUMNS = {"naive": "Naive", "kroy": "Kroy", "custom": "Custom"}

EXPECTED: dict[str, dict[str, str]] = {
    t: {"naive": FAIL, "kroy": PASS if t in ("T1", "T2") else FAIL, "custom": PASS}
    for t in TEST_IDS
}


@dataclass
class Cell:
    result: str
    reason: str
    witness: dict | None = None

    def to_dict(self) -> dict:
        return {"result": self.result, "reason": self.reason, "witness": self.witness}

    @classmethod
    def from_dict(cls, d: dict) -> "Cell":
        return cls(d["result"], d["reason"], d.get("witness"))


@dataclass
class TestReport:
    __test__ = False  # not a pytest class

    cells: dict[str, dict[str, Cell]]
    bounds: Bounds
    runtime_ms: int
    wf_reading: str = DEFAULT_WF_READING
    warnings: list[str] = field(default_factory=list)
    axioms: dict[str, list[str]] = field(default_factory=dict)

    @property
    def matrix(self) -> dict[str, dict[str, str]]:
        return {t: {s: c.result for s, c in row.items()} for t, row in self.cells.items()}

    @property
    def matches_expected(self) -> bool:
        return self.matrix == EXPECTED

    def differences(self) -> list[tuple[str, str, str, str]]:
        """(test, system, expected, got) for every mismatching cell."""
        out = []
        for t in TEST_IDS:
            for s in SYSTEM_NAMES:
                got = self.cells[t][s].result
                if got != EXPECTED[t][s]:
                    out.append((t, s, EXPECTED[t][s], got))
        return out

    def passes(self, system: str) -> int:
        return sum(self.cells[t][system].result == PASS for t in TEST_IDS)

    def to_dict(self, timing: bool = True) -> dict:
        return {
            "matrix": self.matrix,
            "bounds": self.bounds.to_dict(),
            "runtime_ms": self.runtime_ms if timing else 0,
            "wf_reading": self.wf_reading,
            "matches_expected": self.matches_expected,
            "warnings": list(self.warnings),
            "axioms": self.axioms,
            "cells": {t: {s: c.to_dict() for s, c in row.items()} for t, row in self.cells.items()},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TestReport":
        b = d["bounds"]
        return cls(
            cells={t: {s: Cell.from_dict(c) for s, c in row.items()} for t, row in d["cells"].items()},
            bounds=Bounds(b["worlds"], b["subjects"]),
            runtime_ms=d["runtime_ms"],
            wf_reading=d.get("wf_reading", DEFAULT_WF_READING),
            warnings=list(d.get("warnings", [])),
            axioms=d.get("axioms", {}),
        )


def _run_cell(test: FaithfulnessTest, system: System, b: Bounds, budget: Budget | None,
              wf_reading: str, timing: bool) -> Cell:
    if test.kind == "capability":
        ok = system.evaluates_maxims
        return Cell(PASS if ok else FAIL, "judges maxims" if ok else "judges bare acts only")
    if test.kind == "countermodel-existence":
        if not system.axioms:
            return Cell(FAIL, "no added axioms, so the system holds in base DDL by definition")
        r = check_valid([], conj(system.axioms), b, budget=budget)
        if r.outcome == COUNTERMODEL:
            return Cell(PASS, "base DDL countermodel to the added axioms", r.to_dict(timing))
        return Cell(FAIL, f"added axioms {r.summary()} in base DDL", r.to_dict(timing))
    if test.kind == "validity":
        r = check_valid(list(system.axioms), test.payload, b, budget=budget)
        if r.outcome == VALID:
            return Cell(PASS, r.summary(), r.to_dict(timing))
        return Cell(FAIL, r.summary(), r.to_dict(timing))
    if test.kind == "scenario":
        sc = load_scenario(corpus_path(test.payload))
        sc = dataclasses.replace(sc, system=system.name,
                                 bounds=Bounds(b.n_w, b.n_s, sc.bounds.atoms, sc.bounds.action_atoms))
        try:
            v = judge(sc, budget=budget, wf_reading=wf_reading)
        except InconsistentAssumptions as e:
            return Cell(ERROR, str(e))
        ok = v.status == "Prohibited"
        return Cell(PASS if ok else FAIL, f"{test.payload}: {v.status}", v.to_dict(timing))
    raise ValueError(f"unknown test kind {test.kind!r}")


def run_suite(b: Bounds = Bounds(), budget: Budget | None = None,
              wf_reading: str = DEFAULT_WF_READING, timing: bool = True) -> TestReport:
    start = time.perf_counter()
    systems = {name: get_system(name, wf_reading) for name in SYSTEM_NAMES}
    cells: dict[str, dict[str, Cell]] = {}
    for test in TESTS:
        row = {}
        for name, system in systems.items():
            try:
                row[name] = _run_cell(test, system, b, budget, wf_reading, timing)
            except BudgetExceeded as e:
                row[name] = Cell(ERROR, f"budget exceeded: {e}")
        cells[test.id] = row
    warnings = []
    if b.n_s < 2:
        warnings.append("subjects bound below 2: obligation universalizing across people (T2) "
                        "holds trivially with a single subject, so T2 does not discriminate")
    if b.n_w < 2:
        warnings.append("worlds bound below 2: every proposition is rigid, so most tests do not "
                        "discriminate")
    axioms = {name: [to_sexpr(a) for a in s.axioms] for name, s in systems.items()}
    runtime = int((time.perf_counter() - start) * 1000)
    return TestReport(cells, Bounds(b.n_w, b.n_s), runtime, wf_reading, warnings, axioms)


# --------------------------------------------------------------------------
# Rendering
# --------------------------------------------------------------------------

_MARK = {PASS: "✓", FAIL: "×", ERROR: "!"}


def _titles() -> dict[str, str]:
    return {t.id: f"{t.id} {t.title}" for t in TESTS}


def render_table(r: TestReport, fmt: str = "text", timing: bool = True) -> str:
    if fmt == "json":
        return json.dumps(r.to_dict(timing), indent=2, ensure_ascii=False)
    titles = _titles()
    cols = [COLUMNS[s] for s in SYSTEM_NAMES]
    if fmt == "markdown":
        lines = ["| Test | " + " | ".join(cols) + " |",
                 "|---|" + "---|" * len(cols)]
        for t in TEST_IDS:
            lines.append(f"| {titles[t]} | "
                         + " | ".join(_MARK[r.cells[t][s].result] for s in SYSTEM_NAMES) + " |")
        lines.append("| passes | " + " | ".join(f"{r.passes(s)}/8" for s in SYSTEM_NAMES) + " |")
        return "\n".join(lines)
    width = max(len(v) for v in titles.values())
    lines = ["Test".ljust(width) + "  " + "  ".join(c.ljust(6) for c in cols)]
    for t in TEST_IDS:
        lines.append(titles[t].ljust(width) + "  "
                     + "  ".join(_MARK[r.cells[t][s].result].ljust(6) for s in SYSTEM_NAMES))
    lines.append("passes".ljust(width) + "  " + "  ".join(f"{r.passes(s)}/8".ljust(6) for s in SYSTEM_NAMES))
    lines.append("")
    lines.append(f"bounds: w={r.bounds.n_w}, s={r.bounds.n_s} (validity is bounded)   "
                 f"well-formedness reading: {r.wf_reading}"
                 + (f"   runtime: {r.runtime_ms} ms" if timing else ""))
    diffs = r.differences()
    if not diffs:
        lines.append("expected matrix: reproduced")
    else:
        lines.append("expected matrix: differs in " + ", ".join(
            f"{COLUMNS[s]} {t} (expected {_MARK[e]}, got {_MARK[g]})" for t, s, e, g in diffs))
        for t, s, _, _ in diffs:
            lines.append(f"  {COLUMNS[s]} {t}: {r.cells[t][s].reason}")
    for name in SYSTEM_NAMES:
        lines.append(f"axioms[{name}]: {len(r.axioms.get(name, []))} formula(s)")
    lines.extend(f"warning: {w}" for w in r.warnings)
    return "\n".join(lines)


__all__ = [
    "ERROR", "EXPECTED", "FAIL", "PASS", "TESTS", "TEST_IDS", "Cell", "FaithfulnessTest",
    "TestReport", "render_table", "run_suite",
]
