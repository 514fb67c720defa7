"""Formula AST, s-expression reader, parser and canonical printer.

The concrete syntax is fully parenthesized::

    (ob (not (act lie s1)) c)
    (forall-maxim m (forall-subject s (implies (box (well_formed m s)) ...)))

Identifiers match ``[a-z][a-z0-9_-]*``.  A bare identifier in formula
position is a propositional atom unless a ``forall-term`` binder is in scope
for it.  In the first argument of ``act`` it names an action atom, an open
sentence variable or (for maxim variables) the maxim's act.  Subject
positions take constants, bound subject variables, or ``#name`` domain
elements (the latter only appear in grounded formulas).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

from .errors import ParseError, SortError, UnboundVariable

SUBJECT, TERM, OPEN, MAXIM = "subject", "term", "open", "maxim"
SORTS = (SUBJECT, TERM, OPEN, MAXIM)

IDENT_RE = re.compile(r"[a-z][a-z0-9_-]*\Z")
MAX_DEPTH = 200

# Macro name -> argument sorts.  Expansions live in kantian.py.
MACRO_SIGNATURES: dict[str, tuple[str, ...]] = {
    "will": (MAXIM, SUBJECT),
    "universalized": (MAXIM,),
    "effective": (MAXIM, SUBJECT),
    "not_universalizable": (MAXIM, SUBJECT),
    "well_formed": (MAXIM, SUBJECT),
    "prohibited": (MAXIM, SUBJECT),
    "permissible": (MAXIM, SUBJECT),
    "obligatory": (MAXIM, SUBJECT),
}
MACRO_ALIASES = {name.replace("_", "-"): name for name in MACRO_SIGNATURES}

QUANTIFIERS = {
    "forall-subject": SUBJECT,
    "forall-term": TERM,
    "forall-open": OPEN,
    "forall-maxim": MAXIM,
}
RESERVED = frozenset({"true", "false"})


# --------------------------------------------------------------------------
# AST
# --------------------------------------------------------------------------

CONST, VAR, ELEM = "const", "var", "elem"


@dataclass(frozen=True, slots=True)
class Subj:
    """Reference to a subject: a declared constant, a bound variable, or a
    domain element (``#s2``) produced by grounding."""

    name: str
    kind: str = CONST


@dataclass(frozen=True, slots=True)
class Const:
    value: bool


@dataclass(frozen=True, slots=True)
class Atom:
    name: str


@dataclass(frozen=True, slots=True)
class Apply:
    action: str
    subject: Subj


@dataclass(frozen=True, slots=True)
class OpenApply:
    var: str
    subject: Subj


@dataclass(frozen=True, slots=True)
class MaximApply:
    """The act of maxim variable ``var`` performed by ``subject``."""

    var: str
    subject: Subj


@dataclass(frozen=True, slots=True)
class ApplyLit:
    """A literal open sentence (one world set per domain subject) applied to a subject."""

    table: tuple[frozenset[str], ...]
    subject: Subj


@dataclass(frozen=True, slots=True)
class TermVar:
    var: str


@dataclass(frozen=True, slots=True)
class TermLit:
    worlds: frozenset[str]


@dataclass(frozen=True, slots=True)
class Circ:
    var: str


@dataclass(frozen=True, slots=True)
class Goal:
    var: str


@dataclass(frozen=True, slots=True)
class Not:
    f: "Formula"


@dataclass(frozen=True, slots=True)
class And:
    f: "Formula"
    g: "Formula"


@dataclass(frozen=True, slots=True)
class Or:
    f: "Formula"
    g: "Formula"


@dataclass(frozen=True, slots=True)
class Implies:
    f: "Formula"
    g: "Formula"


@dataclass(frozen=True, slots=True)
class Iff:
    f: "Formula"
    g: "Formula"


@dataclass(frozen=True, slots=True)
class Box:
    f: "Formula"


@dataclass(frozen=True, slots=True)
class Ob:
    body: "Formula"
    context: "Formula"


@dataclass(frozen=True, slots=True)
class ForallSubject:
    var: str
    body: "Formula"


@dataclass(frozen=True, slots=True)
class ForallTerm:
    var: str
    body: "Formula"


@dataclass(frozen=True, slots=True)
class ForallOpen:
    var: str
    body: "Formula"


@dataclass(frozen=True, slots=True)
class ForallMaxim:
    var: str
    body: "Formula"


@dataclass(frozen=True, slots=True)
class MaximVar:
    name: str


@dataclass(frozen=True, slots=True)
class MaximLit:
    """A (circumstances, act, goal) triple.  ``act_sort`` is ``"action"`` for
    an action atom or ``"open"`` for a bound open-sentence variable."""

    circ: "Formula"
    act: str
    goal: "Formula"
    act_sort: str = "action"


MaximExpr = Union[MaximVar, MaximLit]


@dataclass(frozen=True, slots=True)
class MacroCall:
    name: str
    args: tuple


Formula = Union[
    Const, Atom, Apply, OpenApply, MaximApply, ApplyLit, TermVar, TermLit, Circ, Goal,
    Not, And, Or, Implies, Iff, Box, Ob,
    ForallSubject, ForallTerm, ForallOpen, ForallMaxim, MacroCall,
]

TRUE = Const(True)
FALSE = Const(False)

QUANTIFIER_NODES = {
    ForallSubject: SUBJECT, ForallTerm: TERM, ForallOpen: OPEN, ForallMaxim: MAXIM,
}
_QUANT_KEYWORD = {cls: kw for kw, sort in QUANTIFIERS.items()
                  for cls, s in QUANTIFIER_NODES.items() if s == sort}


def diamond(f: Formula) -> Formula:
    return Not(Box(Not(f)))


def conj(parts) -> Formula:
    parts = list(parts)
    if not parts:
        return TRUE
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = And(p, out)
    return out


# --------------------------------------------------------------------------
# Reader
# --------------------------------------------------------------------------

@dataclass(slots=True)
class Tok:
    text: str
    line: int
    col: int


class SList(list):
    """A parenthesized list remembering where it opened and closed."""

    def __init__(self, line: int, col: int):
        super().__init__()
        self.line = line
        self.col = col
        self.end_line = line
        self.end_col = col


_TOKEN_RE = re.compile(r"\s+|;[^\n]*|\(|\)|[^\s();]+")


def _tokens(text: str) -> Iterator[Tok]:
    line, line_start = 1, 0
    for m in _TOKEN_RE.finditer(text):
        s = m.group()
        if s[0].isspace() or s[0] == ";":
            nl = s.count("\n")
            if nl:
                line += nl
                line_start = m.start() + s.rindex("\n") + 1
            continue
        yield Tok(s, line, m.start() - line_start + 1)


def _end_position(text: str) -> tuple[int, int]:
    line = text.count("\n") + 1
    col = len(text) - (text.rfind("\n") + 1) + 1
    return line, col


def read_sexprs(text: str) -> list:
    """Read every top-level s-expression in ``text``."""
    top: list = []
    stack: list[SList] = []
    for tok in _tokens(text):
        if tok.text == "(":
            if len(stack) >= MAX_DEPTH:
                raise ParseError("nesting too deep", tok.line, tok.col)
            stack.append(SList(tok.line, tok.col))
        elif tok.text == ")":
            if not stack:
                raise ParseError("unexpected ')'", tok.line, tok.col, frozenset({"(", "identifier"}))
            done = stack.pop()
            done.end_line, done.end_col = tok.line, tok.col
            (stack[-1] if stack else top).append(done)
        else:
            (stack[-1] if stack else top).append(tok)
    if stack:
        line, col = _end_position(text)
        raise ParseError("unexpected end of input", line, col, frozenset({")"}))
    return top


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------

def _pos(item) -> tuple[int, int]:
    return item.line, item.col


class _Parser:
    def __init__(self) -> None:
        self.scope: list[tuple[str, str]] = []

    def lookup(self, name: str) -> str | None:
        for n, sort in reversed(self.scope):
            if n == name:
                return sort
        return None

    def ident(self, item, what: str = "identifier") -> str:
        if not isinstance(item, Tok):
            raise ParseError(f"expected {what}", *_pos(item), frozenset({what}))
        if not IDENT_RE.match(item.text) or item.text in RESERVED:
            raise ParseError(f"invalid {what} {item.text!r}", *_pos(item), frozenset({what}))
        return item.text

    def need(self, lst: SList, n: int, what: str) -> None:
        if len(lst) - 1 < n:
            raise ParseError(f"missing {what}", lst.end_line, lst.end_col, frozenset({what}))
        if len(lst) - 1 > n:
            extra = lst[n + 1]
            raise ParseError("too many arguments", *_pos(extra), frozenset({")"}))

    # -- formulas --------------------------------------------------------

    def formula(self, item) -> Formula:
        if isinstance(item, Tok):
            text = item.text
            if text == "true":
                return TRUE
            if text == "false":
                return FALSE
            name = self.ident(item, "formula")
            sort = self.lookup(name)
            if sort is None:
                return Atom(name)
            if sort == TERM:
                return TermVar(name)
            raise SortError(f"{sort} variable {name!r} used as a proposition "
                            f"at line {item.line}, column {item.col}")
        if not item:
            raise ParseError("empty list", *_pos(item), frozenset({"operator"}))
        head = item[0]
        if not isinstance(head, Tok):
            raise ParseError("expected operator", *_pos(head), frozenset({"operator"}))
        op = head.text
        args = item[1:]
        if op == "not":
            self.need(item, 1, "formula")
            return Not(self.formula(args[0]))
        if op in ("and", "or"):
            if len(args) < 2:
                raise ParseError("missing formula", item.end_line, item.end_col, frozenset({"formula"}))
            cls = And if op == "and" else Or
            parts = [self.formula(a) for a in args]
            out = parts[-1]
            for p in reversed(parts[:-1]):
                out = cls(p, out)
            return out
        if op in ("implies", "iff"):
            self.need(item, 2, "formula")
            cls = Implies if op == "implies" else Iff
            return cls(self.formula(args[0]), self.formula(args[1]))
        if op == "box":
            self.need(item, 1, "formula")
            return Box(self.formula(args[0]))
        if op == "diamond":
            self.need(item, 1, "formula")
            return diamond(self.formula(args[0]))
        if op == "ob":
            if len(args) == 1:
                return Ob(self.formula(args[0]), TRUE)
            self.need(item, 2, "formula")
            return Ob(self.formula(args[0]), self.formula(args[1]))
        if op in QUANTIFIERS:
            return self.quantifier(item, QUANTIFIERS[op])
        if op == "act":
            self.need(item, 2, "subject")
            return self.act(args[0], args[1])
        if op in ("circ", "goal"):
            self.need(item, 1, "maxim variable")
            name = self.maxim_var_name(args[0])
            return Circ(name) if op == "circ" else Goal(name)
        if op == "worlds":
            return TermLit(frozenset(self.ident(a, "world") for a in args))
        name = MACRO_ALIASES.get(op, op)
        if name in MACRO_SIGNATURES:
            sig = MACRO_SIGNATURES[name]
            self.need(item, len(sig), sig[-1])
            out = []
            for sort, a in zip(sig, args):
                out.append(self.maxim_arg(a) if sort == MAXIM else self.subject(a))
            return MacroCall(name, tuple(out))
        raise ParseError(f"unknown operator {op!r}", *_pos(head), frozenset({"operator"}))

    def quantifier(self, item: SList, sort: str) -> Formula:
        self.need(item, 2, "formula")
        binder = item[1]
        if isinstance(binder, SList):
            if not binder:
                raise ParseError("empty variable list", *_pos(binder), frozenset({"variable"}))
            names = [self.ident(b, "variable") for b in binder]
        else:
            names = [self.ident(binder, "variable")]
        for n in names:
            self.scope.append((n, sort))
        try:
            body = self.formula(item[2])
        finally:
            del self.scope[len(self.scope) - len(names):]
        cls = {SUBJECT: ForallSubject, TERM: ForallTerm, OPEN: ForallOpen, MAXIM: ForallMaxim}[sort]
        for n in reversed(names):
            body = cls(n, body)
        return body

    def subject(self, item) -> Subj:
        if isinstance(item, Tok) and item.text.startswith("#"):
            name = item.text[1:]
            if not IDENT_RE.match(name):
                raise ParseError(f"invalid subject element {item.text!r}", *_pos(item),
                                 frozenset({"subject"}))
            return Subj(name, ELEM)
        name = self.ident(item, "subject")
        sort = self.lookup(name)
        if sort is None:
            return Subj(name, CONST)
        if sort == SUBJECT:
            return Subj(name, VAR)
        raise SortError(f"{sort} variable {name!r} used as a subject "
                        f"at line {item.line}, column {item.col}")

    def act(self, fn, subj) -> Formula:
        if isinstance(fn, SList):
            if not fn or not isinstance(fn[0], Tok) or fn[0].text != "open":
                raise ParseError("expected action or open sentence", *_pos(fn), frozenset({"action"}))
            table = []
            for row in fn[1:]:
                if not isinstance(row, SList):
                    raise ParseError("expected world list", *_pos(row), frozenset({"("}))
                table.append(frozenset(self.ident(w, "world") for w in row))
            return ApplyLit(tuple(table), self.subject(subj))
        name = self.ident(fn, "action")
        sort = self.lookup(name)
        s = self.subject(subj)
        if sort is None:
            return Apply(name, s)
        if sort == OPEN:
            return OpenApply(name, s)
        if sort == MAXIM:
            return MaximApply(name, s)
        raise SortError(f"{sort} variable {name!r} used as an act "
                        f"at line {fn.line}, column {fn.col}")

    def maxim_var_name(self, item) -> str:
        name = self.ident(item, "maxim variable")
        sort = self.lookup(name)
        if sort not in (None, MAXIM):
            raise SortError(f"{sort} variable {name!r} used as a maxim "
                            f"at line {item.line}, column {item.col}")
        return name

    def maxim_arg(self, item) -> MaximExpr:
        if isinstance(item, Tok):
            return MaximVar(self.maxim_var_name(item))
        if item and isinstance(item[0], Tok) and item[0].text == "maxim":
            self.need(item, 3, "goal")
            circ = self.formula(item[1])
            act_tok = item[2]
            act = self.ident(act_tok, "action")
            sort = self.lookup(act)
            if sort is None:
                act_sort = "action"
            elif sort == OPEN:
                act_sort = "open"
            else:
                raise SortError(f"{sort} variable {act!r} used as an act "
                                f"at line {act_tok.line}, column {act_tok.col}")
            return MaximLit(circ, act, self.formula(item[3]), act_sort)
        raise ParseError("expected maxim", *_pos(item), frozenset({"maxim"}))


def parse_item(item, closed: bool = False) -> Formula:
    f = _Parser().formula(item)
    if closed:
        _require_closed(f)
    return f


def parse(text: str, closed: bool = False) -> Formula:
    """Parse exactly one formula.  With ``closed=True`` free variables raise
    :class:`UnboundVariable`."""
    items = read_sexprs(text)
    if not items:
        line, col = _end_position(text)
        raise ParseError("unexpected end of input", line, col, frozenset({"formula"}))
    if len(items) > 1:
        raise ParseError("expected end of input", *_pos(items[1]), frozenset({"end of input"}))
    return parse_item(items[0], closed)


def parse_many(text: str, closed: bool = False) -> list[Formula]:
    return [parse_item(item, closed) for item in read_sexprs(text)]


def _require_closed(f: Formula) -> None:
    free = free_sorts(f)
    if free:
        name, sort = sorted(free.items())[0]
        raise UnboundVariable(f"free {sort} variable {name!r}")


# --------------------------------------------------------------------------
# Printer
# --------------------------------------------------------------------------

_WORLD_KEY = re.compile(r"(\d+)")


def world_key(name: str):
    """Natural sort key, so ``w2`` sorts before ``w10``."""
    return [int(p) if p.isdigit() else p for p in _WORLD_KEY.split(name)]


def _subj(s: Subj) -> str:
    return "#" + s.name if s.kind == ELEM else s.name


def _worlds(ws) -> str:
    return " ".join(sorted(ws, key=world_key))


def to_sexpr(f) -> str:
    """Canonical single-line text; ``parse(to_sexpr(f)) == f`` for well-sorted f."""
    out: list[str] = []
    _emit(f, out)
    return "".join(out)


def _emit(f, out: list[str]) -> None:
    match f:
        case Const(value):
            out.append("true" if value else "false")
        case Atom(name) | TermVar(name):
            out.append(name)
        case Apply(name, s) | OpenApply(name, s) | MaximApply(name, s):
            out.append(f"(act {name} {_subj(s)})")
        case ApplyLit(table, s):
            rows = " ".join(f"({_worlds(r)})" for r in table)
            out.append(f"(act (open {rows}) {_subj(s)})" if rows else f"(act (open) {_subj(s)})")
        case TermLit(ws):
            out.append(f"(worlds {_worlds(ws)})" if ws else "(worlds)")
        case Circ(v):
            out.append(f"(circ {v})")
        case Goal(v):
            out.append(f"(goal {v})")
        case Not(g):
            out.append("(not ")
            _emit(g, out)
            out.append(")")
        case Box(g):
            out.append("(box ")
            _emit(g, out)
            out.append(")")
        case And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) | Ob(a, b):
            kw = {And: "and", Or: "or", Implies: "implies", Iff: "iff", Ob: "ob"}[type(f)]
            out.append(f"({kw} ")
            _emit(a, out)
            out.append(" ")
            _emit(b, out)
            out.append(")")
        case ForallSubject(v, body) | ForallTerm(v, body) | ForallOpen(v, body) | ForallMaxim(v, body):
            out.append(f"({_QUANT_KEYWORD[type(f)]} {v} ")
            _emit(body, out)
            out.append(")")
        case MacroCall(name, args):
            out.append(f"({name}")
            for a in args:
                out.append(" ")
                _emit(a, out)
            out.append(")")
        case MaximVar(name):
            out.append(name)
        case MaximLit(circ, act, goal, _):
            out.append("(maxim ")
            _emit(circ, out)
            out.append(f" {act} ")
            _emit(goal, out)
            out.append(")")
        case Subj():
            out.append(_subj(f))
        case _:
            raise TypeError(f"not a formula: {f!r}")


def pretty(f, width: int = 88, indent: int = 0) -> str:
    """Indented rendering for humans; still parses back to ``f``."""
    flat = to_sexpr(f)
    if len(flat) + indent <= width:
        return flat
    pad = " " * (indent + 2)
    match f:
        case Not(g) | Box(g):
            kw = "not" if isinstance(f, Not) else "box"
            return f"({kw}\n{pad}{pretty(g, width, indent + 2)})"
        case And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) | Ob(a, b):
            kw = {And: "and", Or: "or", Implies: "implies", Iff: "iff", Ob: "ob"}[type(f)]
            return (f"({kw}\n{pad}{pretty(a, width, indent + 2)}"
                    f"\n{pad}{pretty(b, width, indent + 2)})")
        case ForallSubject(v, body) | ForallTerm(v, body) | ForallOpen(v, body) | ForallMaxim(v, body):
            return f"({_QUANT_KEYWORD[type(f)]} {v}\n{pad}{pretty(body, width, indent + 2)})"
    return flat


# --------------------------------------------------------------------------
# Sorts
# --------------------------------------------------------------------------

def _walk(f, scope: dict[str, str], free: dict[str, str]) -> None:
    def use(name: str, sort: str) -> None:
        if name in scope:
            if scope[name] != sort:
                raise SortError(f"{scope[name]} variable {name!r} used at sort {sort}")
            return
        if free.get(name, sort) != sort:
            raise SortError(f"free variable {name!r} used at sorts {free[name]} and {sort}")
        free[name] = sort

    def shadow(name: str, what: str) -> None:
        if name in scope:
            raise SortError(f"{what} {name!r} is shadowed by a bound {scope[name]} variable")

    def subj(s: Subj) -> None:
        if s.kind == VAR:
            use(s.name, SUBJECT)
        elif s.kind == CONST:
            shadow(s.name, "subject constant")

    match f:
        case Const() | TermLit():
            pass
        case Atom(name):
            shadow(name, "atom")
        case TermVar(v):
            use(v, TERM)
        case Apply(name, s):
            shadow(name, "action")
            subj(s)
        case OpenApply(v, s):
            use(v, OPEN)
            subj(s)
        case MaximApply(v, s):
            use(v, MAXIM)
            subj(s)
        case ApplyLit(_, s):
            subj(s)
        case Circ(v) | Goal(v) | MaximVar(v):
            use(v, MAXIM)
        case Not(g) | Box(g):
            _walk(g, scope, free)
        case And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) | Ob(a, b):
            _walk(a, scope, free)
            _walk(b, scope, free)
        case ForallSubject(v, body) | ForallTerm(v, body) | ForallOpen(v, body) | ForallMaxim(v, body):
            inner = dict(scope)
            inner[v] = QUANTIFIER_NODES[type(f)]
            _walk(body, inner, free)
        case MacroCall(name, args):
            sig = MACRO_SIGNATURES.get(name)
            if sig is not None and len(sig) == len(args):
                for sort, a in zip(sig, args):
                    if sort == MAXIM and not isinstance(a, (MaximVar, MaximLit)):
                        raise SortError(f"macro {name} expects a maxim, got {a!r}")
                    if sort == SUBJECT and not isinstance(a, Subj):
                        raise SortError(f"macro {name} expects a subject, got {a!r}")
            for a in args:
                _walk(a, scope, free)
        case MaximLit(circ, act, goal, act_sort):
            _walk(circ, scope, free)
            if act_sort == "open":
                use(act, OPEN)
            else:
                shadow(act, "action")
            _walk(goal, scope, free)
        case Subj():
            subj(f)
        case _:
            raise TypeError(f"not a formula: {f!r}")


def free_sorts(f) -> dict[str, str]:
    """Free variables of ``f`` with their sorts; empty iff ``f`` is closed."""
    free: dict[str, str] = {}
    _walk(f, {}, free)
    return free


def check_sorts(f, closed: bool = False) -> None:
    """Raise :class:`SortError` on a cross-sort variable use (and
    :class:`UnboundVariable` on free variables when ``closed``)."""
    free = free_sorts(f)
    if closed and free:
        name, sort = sorted(free.items())[0]
        raise UnboundVariable(f"free {sort} variable {name!r}")


def symbols(f) -> tuple[set[str], set[str], set[str]]:
    """(atoms, actions, subject constants) mentioned by ``f``."""
    atoms: set[str] = set()
    actions: set[str] = set()
    consts: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        match g:
            case Atom(name):
                atoms.add(name)
            case Apply(name, s):
                actions.add(name)
                stack.append(s)
            case OpenApply(_, s) | MaximApply(_, s) | ApplyLit(_, s):
                stack.append(s)
            case Subj(name, kind):
                if kind == CONST:
                    consts.add(name)
            case Not(a) | Box(a):
                stack.append(a)
            case And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) | Ob(a, b):
                stack.extend((a, b))
            case ForallSubject(_, b) | ForallTerm(_, b) | ForallOpen(_, b) | ForallMaxim(_, b):
                stack.append(b)
            case MacroCall(_, args):
                stack.extend(args)
            case MaximLit(circ, act, goal, act_sort):
                if act_sort == "action":
                    actions.add(act)
                stack.extend((circ, goal))
    return atoms, actions, consts


def has_macros(f) -> bool:
    stack = [f]
    while stack:
        g = stack.pop()
        match g:
            case MacroCall():
                return True
            case Not(a) | Box(a):
                stack.append(a)
            case And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) | Ob(a, b):
                stack.extend((a, b))
            case ForallSubject(_, b) | ForallTerm(_, b) | ForallOpen(_, b) | ForallMaxim(_, b):
                stack.append(b)
    return False
