"""Lower a closed, macro-free formula to a flat program for the evaluator.

Every node evaluates to a bitmask of worlds.  Quantified values live in
integer slots: a subject is its index, a term is a world mask, an open
sentence packs one mask per subject (subject ``i`` at bit ``n_w * i``) and a
maxim packs ``circ | act << n_w | goal << n_w * (1 + n_s)``.

Each node records ``dep``: the innermost binder slot it reads (slot 0 stands
for "nothing").  The evaluator caches rigid and quantified nodes and reuses a
cached value until that binder is reassigned, which hoists loop-invariant
subformulas out of quantifier loops.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass
from functools import lru_cache

from ..errors import SortError, UnboundVariable, UnexpandedMacro, UninterpretedSymbol
from ..syntax import (
    ELEM, VAR, And, Apply, ApplyLit, Atom, Box, Circ, Const, ForallMaxim, ForallOpen,
    ForallSubject, ForallTerm, Goal, Iff, Implies, MacroCall, MaximApply, Not, Ob, OpenApply,
    Or, Subj, TermLit, TermVar,
)
from .model import Shape

(CONST, ATOM, APPLY, OPENAPPLY, MAXIMAPPLY, APPLYLIT, TERMVAR, CIRC, GOAL, NOT, AND, OR,
 IMPLIES, IFF, BOX, OB, FORALL_SUBJ, FORALL_TERM, FORALL_OPEN, FORALL_MAXIM) = range(20)

S_CONST, S_VAR, S_ELEM = 0, 1, 2

CACHED_OPS = frozenset({BOX, OB, FORALL_SUBJ, FORALL_TERM, FORALL_OPEN, FORALL_MAXIM})

OP_NAMES = ("CONST ATOM APPLY OPENAPPLY MAXIMAPPLY APPLYLIT TERMVAR CIRC GOAL NOT AND OR "
            "IMPLIES IFF BOX OB FORALL_SUBJ FORALL_TERM FORALL_OPEN FORALL_MAXIM").split()


@dataclass(frozen=True)
class Program:
    op: array
    a: array
    b: array
    c: array
    dep: array
    n_slots: int
    root: int
    n_w: int
    n_s: int

    def __len__(self) -> int:
        return len(self.op)

    def dump(self) -> str:
        return "\n".join(
            f"{i:4d} {OP_NAMES[self.op[i]]:<12} {self.a[i]:>6} {self.b[i]:>6} {self.c[i]:>6}  dep={self.dep[i]}"
            for i in range(len(self.op)))


class _Compiler:
    def __init__(self, shape: Shape):
        self.shape = shape
        self.n_w = shape.n_w
        self.n_s = shape.n_s
        self.full = (1 << shape.n_w) - 1
        self.atom_idx = {a: i for i, a in enumerate(shape.atoms)}
        self.act_idx = {a: i for i, a in enumerate(shape.actions)}
        self.const_idx = {c: i for i, c in enumerate(shape.consts)}
        self.subj_idx = {s: i for i, s in enumerate(shape.subjects)}
        self.world_idx = {w: i for i, w in enumerate(shape.worlds)}
        self.op: list[int] = []
        self.a: list[int] = []
        self.b: list[int] = []
        self.c: list[int] = []
        self.dep: list[int] = []
        self.reads: list[frozenset] = []
        self.scope: list[tuple[str, str, int]] = []
        self.n_slots = 1

    def emit(self, op: int, a: int = 0, b: int = 0, c: int = 0, reads: frozenset = frozenset()) -> int:
        self.op.append(op)
        self.a.append(a)
        self.b.append(b)
        self.c.append(c)
        self.reads.append(reads)
        self.dep.append(max(reads, default=0))
        return len(self.op) - 1

    def var(self, name: str, sort: str) -> int:
        for n, s, slot in reversed(self.scope):
            if n == name:
                if s != sort:
                    raise SortError(f"{name!r} is bound as {s}, used as {sort}")
                return slot
        raise UnboundVariable(f"free {sort} variable {name!r}")

    def subject(self, s: Subj) -> tuple[int, int, frozenset]:
        """(kind, value, slots read) for a subject reference."""
        if s.kind == VAR:
            slot = self.var(s.name, "subject")
            return S_VAR, slot, frozenset({slot})
        if s.kind == ELEM:
            if s.name not in self.subj_idx:
                raise UninterpretedSymbol(f"no subject element {s.name!r}")
            return S_ELEM, self.subj_idx[s.name], frozenset()
        if s.name in self.const_idx:
            return S_CONST, self.const_idx[s.name], frozenset()
        if s.name in self.subj_idx:
            return S_ELEM, self.subj_idx[s.name], frozenset()
        raise UninterpretedSymbol(f"subject constant {s.name!r} is not interpreted")

    def world_mask(self, names) -> int:
        m = 0
        for w in names:
            if w not in self.world_idx:
                raise UninterpretedSymbol(f"no world {w!r}")
            m |= 1 << self.world_idx[w]
        return m

    def node(self, f) -> int:
        match f:
            case Const(value):
                return self.emit(CONST, self.full if value else 0)
            case Atom(name):
                if name not in self.atom_idx:
                    raise UninterpretedSymbol(f"atom {name!r} is not interpreted")
                return self.emit(ATOM, self.atom_idx[name])
            case Apply(name, s):
                if name not in self.act_idx:
                    raise UninterpretedSymbol(f"action {name!r} is not interpreted")
                kind, v, r = self.subject(s)
                return self.emit(APPLY, self.act_idx[name], kind, v, r)
            case OpenApply(name, s) | MaximApply(name, s):
                open_ = isinstance(f, OpenApply)
                slot = self.var(name, "open" if open_ else "maxim")
                kind, v, r = self.subject(s)
                return self.emit(OPENAPPLY if open_ else MAXIMAPPLY, slot, kind, v, r | {slot})
            case ApplyLit(table, s):
                if len(table) != self.n_s:
                    raise UninterpretedSymbol(f"open-sentence literal has {len(table)} rows, "
                                              f"model has {self.n_s} subjects")
                packed = 0
                for i, row in enumerate(table):
                    packed |= self.world_mask(row) << (self.n_w * i)
                kind, v, r = self.subject(s)
                return self.emit(APPLYLIT, packed, kind, v, r)
            case TermVar(name):
                slot = self.var(name, "term")
                return self.emit(TERMVAR, slot, reads=frozenset({slot}))
            case TermLit(ws):
                return self.emit(CONST, self.world_mask(ws))
            case Circ(name) | Goal(name):
                slot = self.var(name, "maxim")
                return self.emit(CIRC if isinstance(f, Circ) else GOAL, slot, reads=frozenset({slot}))
            case Not(g) | Box(g):
                i = self.node(g)
                return self.emit(NOT if isinstance(f, Not) else BOX, i, reads=self.reads[i])
            case And(x, y) | Or(x, y) | Implies(x, y) | Iff(x, y) | Ob(x, y):
                op = {And: AND, Or: OR, Implies: IMPLIES, Iff: IFF, Ob: OB}[type(f)]
                i = self.node(x)
                j = self.node(y)
                return self.emit(op, i, j, reads=self.reads[i] | self.reads[j])
            case ForallSubject(v, body) | ForallTerm(v, body) | ForallOpen(v, body) | ForallMaxim(v, body):
                op, sort = {
                    ForallSubject: (FORALL_SUBJ, "subject"), ForallTerm: (FORALL_TERM, "term"),
                    ForallOpen: (FORALL_OPEN, "open"), ForallMaxim: (FORALL_MAXIM, "maxim"),
                }[type(f)]
                slot = self.n_slots
                self.n_slots += 1
                self.scope.append((v, sort, slot))
                try:
                    i = self.node(body)
                finally:
                    self.scope.pop()
                return self.emit(op, slot, i, reads=self.reads[i] - {slot})
            case MacroCall(name, _):
                raise UnexpandedMacro(f"macro {name!r} must be expanded before evaluation")
        raise TypeError(f"not a formula: {f!r}")


@lru_cache(maxsize=4096)
def compile_formula(f, shape: Shape) -> Program:
    comp = _Compiler(shape)
    root = comp.node(f)
    return Program(
        op=array("q", comp.op), a=array("q", comp.a), b=array("q", comp.b),
        c=array("q", comp.c), dep=array("q", comp.dep), n_slots=comp.n_slots,
        root=root, n_w=shape.n_w, n_s=shape.n_s,
    )
