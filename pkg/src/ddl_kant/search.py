"""Bounded model finding, bounded validity checking and quantifier grounding.

Search order (so the first model found is reproducible):

1. model size: ``n_w = 1 .. b.n_w`` and, inside that, ``n_s = 1 .. b.n_s``;
2. frame: the C1-C5 valid ob functions in the order of
   :func:`~ddl_kant.kernel.frames.enumerate_frames` (the empty frame first);
3. valuation: depth-first over decision groups, each tried in ascending
   value order: subject constants (sorted by name), then atoms (sorted),
   then (action, subject) pairs (action name, then subject index).

Each formula is checked as soon as every group it reads has a value; formulas
that read no group are checked once per frame.  Symbols that no formula
mentions stay empty.  Every model returned is re-checked with the kernel and
:func:`check_frame` before it leaves this module.
"""

from __future__ import annotations

import itertools
import logging
import os
import time
from array import array
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .errors import BudgetExceeded, GroundingBlowup, UninterpretedSymbol
from .kernel import (
    ALL_CONDITIONS, FrameConditions, Model, Shape, check_frame, compile_formula,
    default_subjects, default_worlds, enumerate_frames, extension_mask, run_program,
)
from .syntax import (
    ELEM, And, Apply, ApplyLit, Atom, Box, Circ, Const, ForallMaxim, ForallOpen, ForallSubject,
    ForallTerm, Goal, Iff, Implies, MaximApply, Not, Ob, OpenApply, Or, Subj, TermLit, TermVar,
    symbols,
)

log = logging.getLogger(__name__)

MODEL_FOUND = "ModelFound"
NO_MODEL = "NoModelAtBounds"
VALID = "ValidAtBounds"
COUNTERMODEL = "CountermodelFound"

DEFAULT_MAX_NODES = 10 ** 7
DEFAULT_MAX_MILLIS = 60_000
GROUNDING_CAP = 10 ** 6


@dataclass(frozen=True)
class Bounds:
    n_w: int = 3
    n_s: int = 2
    atoms: tuple[str, ...] = ()
    action_atoms: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.n_w < 1 or self.n_s < 1:
            raise ValueError("bounds need at least one world and one subject")

    def label(self) -> str:
        return f"w={self.n_w}, s={self.n_s}"

    def to_dict(self) -> dict:
        return {"worlds": self.n_w, "subjects": self.n_s}


@dataclass(frozen=True)
class Budget:
    max_nodes: int = DEFAULT_MAX_NODES
    max_millis: int = DEFAULT_MAX_MILLIS

    @classmethod
    def from_env(cls) -> "Budget":
        ms = os.environ.get("DDLKANT_BUDGET_MS")
        return cls(max_millis=int(ms)) if ms else cls()


@dataclass
class SearchResult:
    outcome: str
    model: Model | None
    stats: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.model is not None

    def summary(self) -> str:
        b = self.stats.get("bounds", {})
        at = f"(w={b.get('worlds')}, s={b.get('subjects')})"
        if self.outcome == VALID:
            return f"valid at bounds {at}"
        if self.outcome == NO_MODEL:
            return f"no model at bounds {at}"
        size = f"{self.model.n_w} world(s), {self.model.n_s} subject(s)"
        return f"{'countermodel' if self.outcome == COUNTERMODEL else 'model'} found: {size}"

    def to_dict(self, timing: bool = True) -> dict:
        stats = dict(self.stats)
        if not timing:
            stats["millis"] = 0
        return {
            "outcome": self.outcome,
            "model": self.model.to_dict() if self.model else None,
            "stats": stats,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SearchResult":
        model = Model.from_dict(d["model"]) if d.get("model") else None
        return cls(d["outcome"], model, dict(d.get("stats", {})))


class _Clock:
    def __init__(self, budget: Budget):
        self.budget = budget
        self.nodes = 0
        self.start = time.perf_counter()

    @property
    def millis(self) -> int:
        return int((time.perf_counter() - self.start) * 1000)

    def tick(self, bounds: Bounds) -> None:
        self.nodes += 1
        if self.nodes > self.budget.max_nodes or self.millis > self.budget.max_millis:
            raise BudgetExceeded(
                f"search budget exhausted after {self.nodes} nodes / {self.millis} ms",
                {"nodes": self.nodes, "millis": self.millis, "bounds": bounds.to_dict()})


@lru_cache(maxsize=None)
def frames_for(n_w: int, fc: FrameConditions = ALL_CONDITIONS) -> tuple[tuple[int, ...], ...]:
    """Valid ob functions on ``n_w`` worlds under ``fc``.  Partial condition
    sets are enumerated by brute force and are limited to two worlds."""
    if fc.all_enabled:
        return enumerate_frames(n_w)
    if n_w > 2:
        raise ValueError("partial frame conditions are only enumerable up to 2 worlds")
    n = 1 << n_w
    out = []
    for rows in itertools.product(range(1 << n), repeat=n):
        if not check_frame(rows, fc, n_w=n_w):
            out.append(rows)
    return tuple(out)


def _ob_table(ob: tuple[int, ...], n_w: int) -> bytes:
    n = 1 << n_w
    return bytes((ob[x] >> y) & 1 for x in range(n) for y in range(n))


class _SizedSearch:
    """DFS for one model size."""

    def __init__(self, formulas, atoms, actions, consts, n_w, n_s, fc, clock, bounds):
        self.n_w, self.n_s = n_w, n_s
        self.clock = clock
        self.bounds = bounds
        self.fc = fc
        self.shape = Shape(default_worlds(n_w), default_subjects(n_s), atoms, actions, consts)
        self.atoms_arr = array("q", [0] * len(atoms))
        self.acts_arr = array("q", [0] * (len(actions) * n_s))
        self.interp_arr = array("q", [0] * len(consts))
        self.programs = [compile_formula(f, self.shape) for f in formulas]
        self.full = (1 << n_w) - 1

        # decision groups: (kind, index, domain size)
        groups: list[tuple[str, int, int]] = []
        used_atoms, used_acts, used_consts = set(), set(), set()
        reads = []
        for f in formulas:
            a, ac, c = symbols(f)
            reads.append((a, ac, c))
            used_atoms |= a
            used_acts |= ac
            used_consts |= c
        group_of: dict[tuple, int] = {}
        for i, c in enumerate(consts):
            if c in used_consts:
                group_of[("c", c)] = len(groups)
                groups.append(("c", i, n_s))
        for i, a in enumerate(atoms):
            if a in used_atoms:
                group_of[("a", a)] = len(groups)
                groups.append(("a", i, 1 << n_w))
        for i, a in enumerate(actions):
            if a in used_acts:
                first = len(groups)
                for s in range(n_s):
                    groups.append(("x", i * n_s + s, 1 << n_w))
                group_of[("x", a)] = first + n_s - 1
        self.groups = groups
        # formulas to check once group k is assigned (k = -1: frame level)
        self.checks: list[list[int]] = [[] for _ in range(len(groups) + 1)]
        for idx, (a, ac, c) in enumerate(reads):
            level = max([group_of[("a", x)] for x in a] + [group_of[("x", x)] for x in ac]
                        + [group_of[("c", x)] for x in c], default=-1)
            self.checks[level + 1].append(idx)

    def holds(self, idx: int, ob: bytes) -> bool:
        return run_program(self.programs[idx], ob, self.atoms_arr, self.acts_arr,
                           self.interp_arr) == self.full

    def assign(self, kind: str, i: int, v: int) -> None:
        if kind == "c":
            self.interp_arr[i] = v
        elif kind == "a":
            self.atoms_arr[i] = v
        else:
            self.acts_arr[i] = v

    def run(self, frames) -> tuple[tuple[int, ...], ...] | None:
        for frame in frames:
            self.clock.tick(self.bounds)
            ob = _ob_table(frame, self.n_w)
            for k in range(len(self.groups)):
                self.assign(self.groups[k][0], self.groups[k][1], 0)
            if not all(self.holds(i, ob) for i in self.checks[0]):
                continue
            if self.dfs(0, ob):
                return frame
        return None

    def dfs(self, k: int, ob: bytes) -> bool:
        if k == len(self.groups):
            return True
        kind, i, size = self.groups[k]
        checks = self.checks[k + 1]
        for v in range(size):
            self.clock.tick(self.bounds)
            self.assign(kind, i, v)
            if all(self.holds(j, ob) for j in checks) and self.dfs(k + 1, ob):
                return True
        self.assign(kind, i, 0)
        return False

    def model(self, frame) -> Model:
        shape = self.shape
        return Model(
            worlds=shape.worlds,
            subjects=shape.subjects,
            ob=tuple(frame),
            val={a: self.atoms_arr[i] for i, a in enumerate(shape.atoms)},
            act_val={a: tuple(self.acts_arr[i * self.n_s:(i + 1) * self.n_s])
                     for i, a in enumerate(shape.actions)},
            subj_interp={c: self.interp_arr[i] for i, c in enumerate(shape.consts)},
        )


def _verify(m: Model, formulas, fc: FrameConditions) -> None:
    bad = check_frame(m, fc)
    if bad:
        raise RuntimeError(f"internal error: search returned a frame violating {bad[0]}")
    for f in formulas:
        if extension_mask(f, m) != m.full:
            raise RuntimeError("internal error: search returned a model falsifying a constraint")


def find_model(axioms: Sequence, constraints: Sequence = (), b: Bounds = Bounds(),
               fc: FrameConditions = ALL_CONDITIONS, budget: Budget | None = None) -> SearchResult:
    """Smallest model (in search order) where every formula is true at every world."""
    budget = budget or Budget.from_env()
    formulas = list(axioms) + list(constraints)
    atoms: set[str] = set(b.atoms)
    actions: set[str] = set(b.action_atoms)
    consts: set[str] = set()
    for f in formulas:
        a, ac, c = symbols(f)
        atoms |= a
        actions |= ac
        consts |= c
    atoms_t, actions_t, consts_t = tuple(sorted(atoms)), tuple(sorted(actions)), tuple(sorted(consts))
    clock = _Clock(budget)
    for n_w in range(1, b.n_w + 1):
        frames = frames_for(n_w, fc)
        for n_s in range(1, b.n_s + 1):
            try:
                search = _SizedSearch(formulas, atoms_t, actions_t, consts_t, n_w, n_s, fc, clock, b)
            except UninterpretedSymbol as e:
                # a world or subject element named in the input does not exist at this size
                log.debug("skipping size (%d, %d): %s", n_w, n_s, e)
                continue
            frame = search.run(frames)
            if frame is not None:
                m = search.model(frame)
                _verify(m, formulas, fc)
                return SearchResult(MODEL_FOUND, m, _stats(clock, b))
    return SearchResult(NO_MODEL, None, _stats(clock, b))


def check_valid(axioms: Sequence, goal, b: Bounds = Bounds(),
                fc: FrameConditions = ALL_CONDITIONS, budget: Budget | None = None) -> SearchResult:
    """ValidAtBounds, or a model of the axioms where ``goal`` fails at some world."""
    r = find_model(axioms, [Not(Box(goal))], b, fc, budget)
    if r.model is None:
        return SearchResult(VALID, None, r.stats)
    return SearchResult(COUNTERMODEL, r.model, r.stats)


def _stats(clock: _Clock, b: Bounds) -> dict:
    return {"nodes": clock.nodes, "millis": clock.millis, "bounds": b.to_dict()}


# --------------------------------------------------------------------------
# Grounding
# --------------------------------------------------------------------------

def _balanced(cls, parts: list):
    if len(parts) == 1:
        return parts[0]
    mid = len(parts) // 2
    return cls(_balanced(cls, parts[:mid]), _balanced(cls, parts[mid:]))


class Grounder:
    """Expands every quantifier over the domains of a model with exactly
    ``b.n_w`` worlds and ``b.n_s`` subjects.  ``instances`` counts emitted
    quantifier instances."""

    def __init__(self, b: Bounds, cap: int = GROUNDING_CAP):
        self.worlds = default_worlds(b.n_w)
        self.subjects = default_subjects(b.n_s)
        self.n_w, self.n_s = b.n_w, b.n_s
        self.cap = cap
        self.instances = 0

    def worldset(self, mask: int) -> frozenset[str]:
        return frozenset(w for i, w in enumerate(self.worlds) if mask >> i & 1)

    def table(self, packed: int) -> tuple[frozenset[str], ...]:
        full = (1 << self.n_w) - 1
        return tuple(self.worldset(packed >> (self.n_w * i) & full) for i in range(self.n_s))

    def count(self, k: int) -> None:
        self.instances += k
        if self.instances > self.cap:
            raise GroundingBlowup(f"grounding needs more than {self.cap} instances")

    def ground(self, f, env: dict):
        match f:
            case Subj(name, kind):
                return env.get(("subject", name), f) if kind != ELEM else f
            case Const() | TermLit() | Atom():
                return f
            case Circ(name) | Goal(name):
                if ("maxim", name) not in env:
                    return f
                circ, _, goal = env[("maxim", name)]
                return TermLit(circ if isinstance(f, Circ) else goal)
            case Apply(name, s):
                return Apply(name, self.ground(s, env))
            case ApplyLit(table, s):
                return ApplyLit(table, self.ground(s, env))
            case TermVar(name):
                return env.get(("term", name), f)
            case OpenApply(name, s):
                return ApplyLit(env[("open", name)], self.ground(s, env)) if ("open", name) in env else f
            case MaximApply(name, s):
                if ("maxim", name) in env:
                    return ApplyLit(env[("maxim", name)][1], self.ground(s, env))
                return f
            case Not(g):
                return Not(self.ground(g, env))
            case Box(g):
                return Box(self.ground(g, env))
            case And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) | Ob(a, b):
                return type(f)(self.ground(a, env), self.ground(b, env))
            case ForallSubject(v, body):
                values = [Subj(s, ELEM) for s in self.subjects]
                return self.instantiate(("subject", v), values, body, env)
            case ForallTerm(v, body):
                values = [TermLit(self.worldset(m)) for m in range(1 << self.n_w)]
                return self.instantiate(("term", v), values, body, env)
            case ForallOpen(v, body):
                values = (self.table(p) for p in range(1 << (self.n_w * self.n_s)))
                return self.instantiate(("open", v), values, body, env, 1 << (self.n_w * self.n_s))
            case ForallMaxim(v, body):
                full = (1 << self.n_w) - 1
                n = 1 << (self.n_w * (2 + self.n_s))
                values = ((self.worldset(p & full), self.table(p >> self.n_w),
                           self.worldset(p >> (self.n_w * (1 + self.n_s)) & full)) for p in range(n))
                return self.instantiate(("maxim", v), values, body, env, n)
        raise TypeError(f"cannot ground {f!r}")

    def instantiate(self, key, values, body, env, n: int | None = None):
        if n is None:
            values = list(values)
            n = len(values)
        self.count(n)
        # a binder hides outer bindings of the same name at every sort
        inner = {k: v for k, v in env.items() if k[1] != key[1]}
        parts = []
        for val in values:
            inner[key] = val
            parts.append(self.ground(body, inner))
        return _balanced(And, parts)


def ground(f, b: Bounds, cap: int = GROUNDING_CAP):
    """Quantifier-free equivalent of ``f`` on models of exactly ``b.n_w``
    worlds and ``b.n_s`` subjects."""
    return Grounder(b, cap).ground(f, {})


__all__ = [
    "COUNTERMODEL", "MODEL_FOUND", "NO_MODEL", "VALID", "Bounds", "Budget", "Grounder",
    "SearchResult", "check_valid", "find_model", "frames_for", "ground",
]
