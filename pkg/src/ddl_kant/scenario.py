"""Scenario files (``.ked``) and the maxim judgement pipeline.

A scenario is a sequence of forms::

    (scenario lying)
    (declare-atom asked believed)
    (declare-action lie)
    (declare-subject s1)
    (system custom)
    (bounds :worlds 3 :subjects 2)
    (maxim asked lie believed)
    (assume <formula>)
    (query status)

The maxim is judged for a fresh subject constant about which the scenario
says nothing specific, so a verdict holds for every agent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import InconsistentAssumptions, ParseError, UndeclaredSymbol, UnknownSystem
from .kantian import SYSTEM_NAMES, expand, get_system
from .search import VALID, Bounds, Budget, SearchResult, check_valid, find_model
from .syntax import (
    CONST, IDENT_RE, MacroCall, MaximLit, SList, Subj, Tok, _pos, check_sorts, parse_item, pretty,
    read_sexprs, symbols, to_sexpr,
)

QUERIES = ("status", "check-prohibited", "check-permissible", "check-obligatory")
CLAIMS = ("prohibited", "obligatory", "permissible")
STATUS = {"prohibited": "Prohibited", "obligatory": "Obligatory", "permissible": "Permissible"}
UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class Scenario:
    name: str
    atoms: tuple[str, ...]
    actions: tuple[str, ...]
    subjects: tuple[str, ...]
    maxim: MaximLit
    assumptions: tuple = ()
    system: str = "custom"
    bounds: Bounds = Bounds()
    query: str = "status"

    @property
    def agent(self) -> str:
        """Fresh subject constant the maxim is judged for."""
        taken = set(self.atoms) | set(self.actions) | set(self.subjects)
        name, k = "agent", 0
        while name in taken:
            k += 1
            name = f"agent{k}"
        return name

    def to_text(self) -> str:
        """Canonical .ked text; loads back to an equal scenario."""
        lines = [f"(scenario {self.name})"]
        if self.atoms:
            lines.append(f"(declare-atom {' '.join(self.atoms)})")
        if self.actions:
            lines.append(f"(declare-action {' '.join(self.actions)})")
        if self.subjects:
            lines.append(f"(declare-subject {' '.join(self.subjects)})")
        lines.append(f"(system {self.system})")
        lines.append(f"(bounds :worlds {self.bounds.n_w} :subjects {self.bounds.n_s})")
        m = self.maxim
        lines.append(f"(maxim {to_sexpr(m.circ)} {m.act} {to_sexpr(m.goal)})")
        for a in self.assumptions:
            lines.append(f"(assume {pretty(a, indent=8)})")
        lines.append(f"(query {self.query})")
        return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Loading
# --------------------------------------------------------------------------

def _idents(form: SList, what: str) -> list[str]:
    out = []
    for item in form[1:]:
        if not isinstance(item, Tok) or not IDENT_RE.match(item.text):
            raise ParseError(f"expected {what}", *_pos(item), frozenset({what}))
        out.append(item.text)
    return out


def _bounds(form: SList) -> Bounds:
    vals = {":worlds": 3, ":subjects": 2}
    args = form[1:]
    if len(args) % 2:
        raise ParseError("bounds need :key value pairs", form.end_line, form.end_col, frozenset({"value"}))
    for key, val in zip(args[::2], args[1::2]):
        if not isinstance(key, Tok) or key.text not in vals:
            raise ParseError("unknown bounds key", *_pos(key), frozenset(vals))
        if not isinstance(val, Tok) or not val.text.isdigit() or int(val.text) < 1:
            raise ParseError("expected a positive integer", *_pos(val), frozenset({"integer"}))
        vals[key.text] = int(val.text)
    return Bounds(vals[":worlds"], vals[":subjects"])


def parse_scenario(text: str) -> Scenario:
    name = None
    atoms: list[str] = []
    actions: list[str] = []
    subjects: list[str] = []
    system = "custom"
    bounds = Bounds()
    maxim_form = None
    assume_forms: list = []
    query = "status"
    for form in read_sexprs(text):
        if not isinstance(form, SList) or not form or not isinstance(form[0], Tok):
            raise ParseError("expected a scenario form", *_pos(form), frozenset({"("}))
        head = form[0].text
        if head == "scenario":
            name = _idents(form, "scenario name")[0] if len(form) == 2 else None
            if name is None:
                raise ParseError("expected one scenario name", *_pos(form), frozenset({"name"}))
        elif head == "declare-atom":
            atoms += _idents(form, "atom")
        elif head == "declare-action":
            actions += _idents(form, "action")
        elif head == "declare-subject":
            subjects += _idents(form, "subject")
        elif head == "system":
            system = _idents(form, "system")[0] if len(form) == 2 else ""
            if system not in SYSTEM_NAMES:
                raise UnknownSystem(f"unknown system {system!r} (expected naive, kroy or custom)")
        elif head == "bounds":
            bounds = _bounds(form)
        elif head == "maxim":
            if len(form) != 4:
                raise ParseError("maxim needs circumstances, act and goal", *_pos(form),
                                 frozenset({"formula"}))
            maxim_form = form
        elif head == "assume":
            if len(form) != 2:
                raise ParseError("assume takes one formula", *_pos(form), frozenset({"formula"}))
            assume_forms.append(form[1])
        elif head == "query":
            query = _idents(form, "query")[0] if len(form) == 2 else ""
            if query not in QUERIES:
                raise ParseError(f"unknown query {query!r}", *_pos(form), frozenset(QUERIES))
        else:
            raise ParseError(f"unknown scenario form {head!r}", *_pos(form[0]),
                             frozenset({"scenario", "declare-atom", "declare-action", "declare-subject",
                                        "system", "bounds", "maxim", "assume", "query"}))
    if name is None:
        raise ParseError("missing (scenario <name>) header", 1, 1, frozenset({"scenario"}))
    if maxim_form is None:
        raise ParseError("missing (maxim <C> <A> <G>) form", 1, 1, frozenset({"maxim"}))
    act = maxim_form[2]
    if not isinstance(act, Tok) or not IDENT_RE.match(act.text):
        raise ParseError("expected action", *_pos(act), frozenset({"action"}))
    maxim = MaximLit(parse_item(maxim_form[1], closed=True), act.text,
                     parse_item(maxim_form[3], closed=True))
    assumptions = tuple(parse_item(f, closed=True) for f in assume_forms)
    sc = Scenario(name, tuple(atoms), tuple(actions), tuple(subjects), maxim, assumptions,
                  system, Bounds(bounds.n_w, bounds.n_s, tuple(atoms), tuple(actions)), query)
    _check_declared(sc)
    return sc


def _check_declared(sc: Scenario) -> None:
    atoms, actions, consts = set(), set(), set()
    for f in (sc.maxim.circ, sc.maxim.goal, *sc.assumptions):
        check_sorts(f, closed=True)
        a, ac, c = symbols(f)
        atoms |= a
        actions |= ac
        consts |= c
    actions.add(sc.maxim.act)
    for kind, used, declared in (("atom", atoms, sc.atoms), ("action", actions, sc.actions),
                                 ("subject", consts, sc.subjects)):
        missing = sorted(used - set(declared))
        if missing:
            raise UndeclaredSymbol(f"undeclared {kind} {missing[0]!r}")


def load_scenario(path) -> Scenario:
    return parse_scenario(Path(path).read_text(encoding="utf-8"))


def corpus_path(name: str) -> Path:
    """Path of a shipped corpus file, e.g. ``corpus_path("lying.ked")``."""
    return Path(str(resources.files("ddl_kant") / "corpus" / name))


def corpus_files() -> list[Path]:
    return sorted(Path(str(resources.files("ddl_kant") / "corpus")).glob("*.ked"))


# --------------------------------------------------------------------------
# Judging
# --------------------------------------------------------------------------

@dataclass
class Witness:
    claim: str
    formula: str
    result: SearchResult

    def to_dict(self, timing: bool = True) -> dict:
        return {"claim": self.claim, "formula": self.formula, **self.result.to_dict(timing)}

    @classmethod
    def from_dict(cls, d: dict) -> "Witness":
        return cls(d["claim"], d["formula"], SearchResult.from_dict(d))


@dataclass
class Verdict:
    scenario: str
    system: str
    agent: str
    status: str
    bounds: Bounds
    assumptions: list[str]
    witnesses: list[Witness] = field(default_factory=list)

    def headline(self) -> str:
        b = f"w={self.bounds.n_w}, s={self.bounds.n_s}"
        if self.status == UNDETERMINED:
            return f"UNDETERMINED (no claim valid at bounds {b})"
        return f"{self.status.upper()} (valid at bounds {b})"

    def to_dict(self, timing: bool = True) -> dict:
        return {
            "scenario": self.scenario,
            "system": self.system,
            "agent": self.agent,
            "status": self.status,
            "bounds": self.bounds.to_dict(),
            "assumptions": list(self.assumptions),
            "witnesses": [w.to_dict(timing) for w in self.witnesses],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Verdict":
        b = d["bounds"]
        return cls(d["scenario"], d["system"], d["agent"], d["status"],
                   Bounds(b["worlds"], b["subjects"]), list(d["assumptions"]),
                   [Witness.from_dict(w) for w in d["witnesses"]])


def judge(sc: Scenario, budget: Budget | None = None, wf_reading: str = "B") -> Verdict:
    """Prohibited, then obligatory, then permissible: the first claim valid at
    the scenario's bounds decides the status."""
    system = get_system(sc.system, wf_reading)
    axioms = list(system.axioms) + [expand(a, wf_reading) for a in sc.assumptions]
    base = find_model(axioms, [], sc.bounds, budget=budget)
    if base.model is None:
        raise InconsistentAssumptions(
            f"no model of the {sc.system} axioms and the scenario's assumptions at bounds "
            f"w={sc.bounds.n_w}, s={sc.bounds.n_s}", base)
    claims = CLAIMS if sc.query == "status" else (sc.query.removeprefix("check-"),)
    agent = Subj(sc.agent, CONST)
    witnesses = []
    status = UNDETERMINED
    for kind in claims:
        goal = expand(MacroCall(kind, (sc.maxim, agent)), wf_reading)
        r = check_valid(axioms, goal, sc.bounds, budget=budget)
        witnesses.append(Witness(kind, to_sexpr(goal), r))
        if r.outcome == VALID:
            status = STATUS[kind]
            break
    return Verdict(sc.name, sc.system, sc.agent, status, sc.bounds,
                   [to_sexpr(a) for a in sc.assumptions], witnesses)


def render_verdict(v: Verdict, fmt: str = "text", timing: bool = True) -> str:
    if fmt == "json":
        return json.dumps(v.to_dict(timing), indent=2)
    lines = [v.headline(), f"scenario: {v.scenario}   system: {v.system}   agent: {v.agent}"]
    lines.append("assumptions:" if v.assumptions else "assumptions: none")
    lines.extend(f"  {i}. {a}" for i, a in enumerate(v.assumptions, 1))
    lines.append("witnesses:")
    for w in v.witnesses:
        lines.append(f"  {w.claim}: {w.result.summary()}")
        lines.append(f"    claim: {w.formula}")
        if w.result.model is not None:
            lines.extend("    " + row for row in w.result.model.describe().splitlines())
    return "\n".join(lines)


__all__ = [
    "CLAIMS", "QUERIES", "UNDETERMINED", "Scenario", "Verdict", "Witness", "corpus_files",
    "corpus_path", "judge", "load_scenario", "parse_scenario", "render_verdict",
]
