"""Maxim macros and the three axiom systems (naive, kroy, custom).

A maxim is a (circumstances, act, goal) triple.  Macro calls over a maxim
and a subject expand into plain DDL:

    will(M, s)                 box(C -> A(s))
    universalized(M)           forall p. will(M, p)
    effective(M, s)            box(will(M, s) <-> G)
    not_universalizable(M, s)  box(universalized(M) -> not effective(M, s))
    well_formed(M, s)          not box(C -> G)  and  not box(C -> A(s))      (reading "B")
                               box(not (C -> G) and not (C -> A(s)))         (reading "A")
    prohibited(M, s)           O{not A(s) | C}
    permissible(M, s)          not prohibited(M, s)
    obligatory(M, s)           O{A(s) | C}
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ArityMismatch, SortError, UnknownMacro, UnknownSystem
from .syntax import (
    MACRO_ALIASES, MACRO_SIGNATURES, TRUE, VAR, And, Apply, Box, Circ, ForallMaxim, ForallOpen,
    ForallSubject, ForallTerm, Goal, Iff, Implies, MacroCall, MaximApply, MaximLit, MaximVar, Not,
    Ob, OpenApply, Or, Subj, TermVar, to_sexpr,
)

WF_READINGS = ("A", "B")
DEFAULT_WF_READING = "B"


@dataclass(frozen=True)
class _Parts:
    circ: object
    goal: object
    act_name: str
    act_kind: str  # "action", "open" or "maxim"

    def act(self, s: Subj):
        if self.act_kind == "action":
            return Apply(self.act_name, s)
        if self.act_kind == "open":
            return OpenApply(self.act_name, s)
        return MaximApply(self.act_name, s)


def _parts(m) -> _Parts:
    if isinstance(m, MaximVar):
        return _Parts(Circ(m.name), Goal(m.name), m.name, "maxim")
    if isinstance(m, MaximLit):
        return _Parts(m.circ, m.goal, m.act, m.act_sort)
    raise SortError(f"expected a maxim, got {m!r}")


_IDENT = re.compile(r"[a-z][a-z0-9_-]*")


class _Expander:
    def __init__(self, root, wf_reading: str):
        if wf_reading not in WF_READINGS:
            raise ValueError(f"unknown well-formedness reading {wf_reading!r}")
        self.wf_reading = wf_reading
        self.taken = set(_IDENT.findall(to_sexpr(root)))

    def fresh(self, base: str = "p") -> str:
        name, k = base, 0
        while name in self.taken:
            k += 1
            name = f"{base}{k}"
        self.taken.add(name)
        return name

    # -- templates ---------------------------------------------------------

    def will(self, mx: _Parts, s: Subj):
        return Box(Implies(mx.circ, mx.act(s)))

    def universalized(self, mx: _Parts):
        p = self.fresh()
        return ForallSubject(p, self.will(mx, Subj(p, VAR)))

    def effective(self, mx: _Parts, s: Subj):
        return Box(Iff(self.will(mx, s), mx.goal))

    def not_universalizable(self, mx: _Parts, s: Subj):
        return Box(Implies(self.universalized(mx), Not(self.effective(mx, s))))

    def well_formed(self, mx: _Parts, s: Subj):
        c, a, g = mx.circ, mx.act(s), mx.goal
        if self.wf_reading == "A":
            return Box(And(Not(Implies(c, g)), Not(Implies(c, a))))
        return And(Not(Box(Implies(c, g))), Not(Box(Implies(c, a))))

    def prohibited(self, mx: _Parts, s: Subj):
        # the single place that fixes what prohibition means
        return Ob(Not(mx.act(s)), mx.circ)

    def permissible(self, mx: _Parts, s: Subj):
        return Not(self.prohibited(mx, s))

    def obligatory(self, mx: _Parts, s: Subj):
        return Ob(mx.act(s), mx.circ)

    # -- traversal -----------------------------------------------------------

    def call(self, name: str, args: tuple):
        name = MACRO_ALIASES.get(name, name)
        if name not in MACRO_SIGNATURES:
            raise UnknownMacro(f"unknown macro {name!r}")
        sig = MACRO_SIGNATURES[name]
        if len(args) != len(sig):
            raise ArityMismatch(f"{name} takes {len(sig)} argument(s), got {len(args)}")
        m = args[0]
        if isinstance(m, MaximLit):
            m = MaximLit(self.go(m.circ), m.act, self.go(m.goal), m.act_sort)
        mx = _parts(m)
        if len(args) == 1:
            return getattr(self, name)(mx)
        s = args[1]
        if not isinstance(s, Subj):
            raise SortError(f"{name}: second argument must be a subject, got {s!r}")
        return getattr(self, name)(mx, s)

    def go(self, f):
        match f:
            case MacroCall(name, args):
                return self.call(name, args)
            case Not(g):
                return Not(self.go(g))
            case Box(g):
                return Box(self.go(g))
            case And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) | Ob(a, b):
                return type(f)(self.go(a), self.go(b))
            case ForallSubject(v, b) | ForallTerm(v, b) | ForallOpen(v, b) | ForallMaxim(v, b):
                return type(f)(v, self.go(b))
        return f


def expand(f, wf_reading: str = DEFAULT_WF_READING):
    """Replace every macro call in ``f`` by its definition."""
    return _Expander(f, wf_reading).go(f)


# --------------------------------------------------------------------------
# Axioms
# --------------------------------------------------------------------------

_M = MaximVar("m")
_S = Subj("s", VAR)


def custom_ful(wf_reading: str = DEFAULT_WF_READING):
    """Well-formed maxims that are not universalizable are prohibited."""
    body = Implies(
        Box(MacroCall("well_formed", (_M, _S))),
        Implies(MacroCall("not_universalizable", (_M, _S)), Box(MacroCall("prohibited", (_M, _S)))),
    )
    return expand(ForallMaxim("m", ForallSubject("s", body)), wf_reading)


def unguarded_ful():
    """The same rule with the well-formedness guard dropped."""
    body = Implies(MacroCall("not_universalizable", (_M, _S)), Box(MacroCall("prohibited", (_M, _S))))
    return expand(ForallMaxim("m", ForallSubject("s", body)))


def monadic_permissible(act: str, s: Subj):
    return Not(Ob(Not(OpenApply(act, s)), TRUE))


def kroy_ful():
    """If an act is permissible for someone it is permissible for everyone."""
    return ForallOpen("a", ForallSubject("s", Implies(
        monadic_permissible("a", _S),
        ForallSubject("p", monadic_permissible("a", Subj("p", VAR))),
    )))


def distributive_background():
    """O{A|C} and O{B|C} together amount to O{A and B|C}."""
    a, b, c = TermVar("a"), TermVar("b"), TermVar("c")
    return ForallTerm("a", ForallTerm("b", ForallTerm("c", Iff(
        And(Ob(a, c), Ob(b, c)), Ob(And(a, b), c)))))


# --------------------------------------------------------------------------
# Systems
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class System:
    name: str
    axioms: tuple
    evaluates_maxims: bool
    description: str = ""


def get_system(name: str, wf_reading: str = DEFAULT_WF_READING) -> System:
    if name == "naive":
        return System("naive", (), False, "base DDL, no added axioms")
    if name == "kroy":
        return System("kroy", (kroy_ful(),), False, "permissibility generalizes across subjects")
    if name == "custom":
        return System("custom", (custom_ful(wf_reading), distributive_background()), True,
                      "maxim-based universal-law axiom with the distributive background axiom")
    raise UnknownSystem(f"unknown system {name!r} (expected naive, kroy or custom)")


SYSTEM_NAMES = ("naive", "kroy", "custom")

__all__ = [
    "DEFAULT_WF_READING", "SYSTEM_NAMES", "System", "WF_READINGS", "custom_ful",
    "distributive_background", "expand", "get_system", "kroy_ful", "monadic_permissible",
    "unguarded_ful",
]
