"""Finite Carmo-Jones models.

World sets are bitmasks: bit ``i`` stands for ``worlds[i]``.  ``ob[X]`` is a
bitset over candidate world sets, so ``Y in ob(X)`` iff ``ob[X] >> Y & 1``.
"""

from __future__ import annotations

import json
from array import array
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from ..syntax import world_key


def mask_of(names: Iterable[str], worlds: tuple[str, ...]) -> int:
    index = {w: i for i, w in enumerate(worlds)}
    m = 0
    for n in names:
        m |= 1 << index[n]
    return m


def names_of(mask: int, worlds: tuple[str, ...]) -> list[str]:
    return [w for i, w in enumerate(worlds) if mask >> i & 1]


def default_worlds(n: int) -> tuple[str, ...]:
    return tuple(f"w{i + 1}" for i in range(n))


def default_subjects(n: int) -> tuple[str, ...]:
    return tuple(f"s{i + 1}" for i in range(n))


@dataclass(frozen=True)
class Shape:
    """Everything the compiler needs to know about a model except its data."""

    worlds: tuple[str, ...]
    subjects: tuple[str, ...]
    atoms: tuple[str, ...]
    actions: tuple[str, ...]
    consts: tuple[str, ...]

    @property
    def n_w(self) -> int:
        return len(self.worlds)

    @property
    def n_s(self) -> int:
        return len(self.subjects)


@dataclass(frozen=True)
class Model:
    worlds: tuple[str, ...]
    subjects: tuple[str, ...]
    ob: tuple[int, ...]
    val: Mapping[str, int] = field(default_factory=dict)
    act_val: Mapping[str, tuple[int, ...]] = field(default_factory=dict)
    subj_interp: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.worlds or not self.subjects:
            raise ValueError("a model needs at least one world and one subject")
        if len(self.ob) != 1 << len(self.worlds):
            raise ValueError("ob must have one entry per world set")
        for name, row in self.act_val.items():
            if len(row) != len(self.subjects):
                raise ValueError(f"action {name!r} needs one world set per subject")

    @property
    def n_w(self) -> int:
        return len(self.worlds)

    @property
    def n_s(self) -> int:
        return len(self.subjects)

    @property
    def full(self) -> int:
        return (1 << len(self.worlds)) - 1

    def obligatory(self, body: int, context: int) -> bool:
        return bool(self.ob[context] >> body & 1)

    @cached_property
    def shape(self) -> Shape:
        return Shape(self.worlds, self.subjects, tuple(sorted(self.val)),
                     tuple(sorted(self.act_val)), tuple(sorted(self.subj_interp)))

    @cached_property
    def ob_table(self) -> bytes:
        n = 1 << self.n_w
        return bytes((self.ob[x] >> y) & 1 for x in range(n) for y in range(n))

    @cached_property
    def arrays(self) -> tuple[bytes, array, array, array]:
        shape = self.shape
        atoms = array("q", (self.val[a] for a in shape.atoms))
        acts = array("q", (m for a in shape.actions for m in self.act_val[a]))
        interp = array("q", (self.subj_interp[c] for c in shape.consts))
        return self.ob_table, atoms, acts, interp

    # -- JSON ----------------------------------------------------------

    def to_dict(self) -> dict:
        ws = self.worlds
        ob = []
        for x, row in enumerate(self.ob):
            if row:
                ob.append({
                    "context": names_of(x, ws),
                    "obligatory": [names_of(y, ws) for y in range(1 << self.n_w) if row >> y & 1],
                })
        return {
            "worlds": list(ws),
            "subjects": list(self.subjects),
            "ob": ob,
            "val": {a: names_of(self.val[a], ws) for a in sorted(self.val)},
            "act_val": {a: {s: names_of(m, ws) for s, m in zip(self.subjects, self.act_val[a])}
                        for a in sorted(self.act_val)},
            "subjects_interp": {c: self.subjects[self.subj_interp[c]] for c in sorted(self.subj_interp)},
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, d: Mapping) -> "Model":
        worlds = tuple(d["worlds"])
        subjects = tuple(d["subjects"])
        ob = [0] * (1 << len(worlds))
        for entry in d.get("ob", []):
            x = mask_of(entry["context"], worlds)
            for ys in entry["obligatory"]:
                ob[x] |= 1 << mask_of(ys, worlds)
        sidx = {s: i for i, s in enumerate(subjects)}
        return cls(
            worlds=worlds,
            subjects=subjects,
            ob=tuple(ob),
            val={a: mask_of(ws, worlds) for a, ws in d.get("val", {}).items()},
            act_val={a: tuple(mask_of(row.get(s, []), worlds) for s in subjects)
                     for a, row in d.get("act_val", {}).items()},
            subj_interp={c: sidx[s] for c, s in d.get("subjects_interp", {}).items()},
        )

    @classmethod
    def from_json(cls, text: str) -> "Model":
        return cls.from_dict(json.loads(text))

    def describe(self) -> str:
        """World/subject table used by the text renderers."""
        ws = self.worlds
        lines = [f"worlds: {' '.join(ws)}   subjects: {' '.join(self.subjects)}"]
        if self.subj_interp:
            lines.append("constants: " + ", ".join(
                f"{c}={self.subjects[i]}" for c, i in sorted(self.subj_interp.items())))
        header = ["symbol"] + list(ws)
        rows = []
        for a in sorted(self.val):
            rows.append([a] + ["T" if self.val[a] >> i & 1 else "." for i in range(self.n_w)])
        for a in sorted(self.act_val):
            for s, m in zip(self.subjects, self.act_val[a]):
                rows.append([f"{a}({s})"] + ["T" if m >> i & 1 else "." for i in range(self.n_w)])
        if rows:
            width = max(len(r[0]) for r in rows + [header])
            lines.append("  ".join([header[0].ljust(width)] + header[1:]))
            for r in rows:
                lines.append("  ".join([r[0].ljust(width)] + [c.rjust(len(w)) for c, w in zip(r[1:], ws)]))
        ob_lines = []
        for x, row in enumerate(self.ob):
            if row:
                sets = ["{" + ",".join(names_of(y, ws)) + "}"
                        for y in range(1 << self.n_w) if row >> y & 1 and (y & x) == y]
                ob_lines.append("  ob({" + ",".join(names_of(x, ws)) + "}) traces: " + " ".join(sets))
        lines.append("ob:" if ob_lines else "ob: empty everywhere")
        lines.extend(ob_lines)
        return "\n".join(lines)


def sorted_worlds(names: Iterable[str]) -> list[str]:
    return sorted(names, key=world_key)
