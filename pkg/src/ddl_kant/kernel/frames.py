"""Frame conditions C1-C5 on the ob function, and enumeration of the
frame-valid ob functions for a given number of worlds.

C1  the empty set is never obligatory
C2  if Y∩X = Z∩X then Y ∈ ob(X) iff Z ∈ ob(X)
C3  if Y, Z ∈ ob(X) and X∩Y∩Z ≠ ∅ then Y∩Z ∈ ob(X)
C4  if Y ⊆ X ⊆ Z and Y ∈ ob(X) then (Z∖X)∪Y ∈ ob(Z)
C5  if Y ⊆ X, Z ∈ ob(X) and Y∩Z ≠ ∅ then Z ∈ ob(Y)
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .model import Model, names_of


@dataclass(frozen=True)
class FrameConditions:
    c1: bool = True
    c2: bool = True
    c3: bool = True
    c4: bool = True
    c5: bool = True

    @property
    def all_enabled(self) -> bool:
        return self.c1 and self.c2 and self.c3 and self.c4 and self.c5

    def enabled(self) -> list[str]:
        return [c.upper() for c in ("c1", "c2", "c3", "c4", "c5") if getattr(self, c)]


ALL_CONDITIONS = FrameConditions()


@dataclass(frozen=True)
class Violation:
    condition: str
    sets: dict[str, list[str]]

    def __str__(self) -> str:
        parts = ", ".join(f"{k}={{{','.join(v)}}}" for k, v in self.sets.items())
        return f"{self.condition}: {parts}"


def _subsets_of(x: int):
    """All subsets of ``x`` in increasing numeric order."""
    return [y for y in range(x + 1) if y & ~x == 0]


def check_frame(m: Model | tuple[int, ...], fc: FrameConditions = ALL_CONDITIONS,
                n_w: int | None = None, worlds: tuple[str, ...] | None = None) -> list[Violation]:
    """Every violation of the enabled conditions; empty iff the frame is valid."""
    if isinstance(m, Model):
        ob, n_w, worlds = m.ob, m.n_w, m.worlds
    else:
        ob = m
        if n_w is None:
            n_w = (len(ob) - 1).bit_length()
        worlds = worlds or tuple(f"w{i + 1}" for i in range(n_w))
    n = 1 << n_w

    def names(**sets: int) -> dict[str, list[str]]:
        return {k: names_of(v, worlds) for k, v in sets.items()}

    def has(x: int, y: int) -> bool:
        return bool(ob[x] >> y & 1)

    out: list[Violation] = []
    for x in range(n):
        row = ob[x]
        members = [y for y in range(n) if row >> y & 1]
        if fc.c1 and row & 1:
            out.append(Violation("C1", names(X=x, Y=0)))
        if fc.c2:
            for y in members:
                for z in range(n):
                    if z & x == y & x and not has(x, z):
                        out.append(Violation("C2", names(X=x, Y=y, Z=z)))
        if fc.c3:
            for i, y in enumerate(members):
                for z in members[i:]:
                    if x & y & z and not has(x, y & z):
                        out.append(Violation("C3", names(X=x, Y=y, Z=z)))
        if fc.c4:
            for y in members:
                if y & ~x:
                    continue
                for z in range(n):
                    if x & ~z == 0 and not has(z, (z & ~x) | y):
                        out.append(Violation("C4", names(X=x, Y=y, Z=z)))
        if fc.c5:
            for z in members:
                for y in _subsets_of(x):
                    if y & z and not has(y, z):
                        out.append(Violation("C5", names(X=x, Y=y, Z=z)))
    return out


@lru_cache(maxsize=None)
def _trace_families(x: int) -> tuple[frozenset[int], ...]:
    """C1/C3-respecting families of traces (nonempty subsets of ``x``)."""
    subs = [y for y in _subsets_of(x) if y]
    fams = []
    for bits in range(1 << len(subs)):
        fam = [subs[i] for i in range(len(subs)) if bits >> i & 1]
        fs = frozenset(fam)
        if all((a & b) in fs for i, a in enumerate(fam) for b in fam[i + 1:] if a & b):
            fams.append(fs)
    return tuple(fams)


def _row(x: int, traces: frozenset[int], n: int) -> int:
    row = 0
    for y in range(n):
        if y & x in traces:
            row |= 1 << y
    return row


@lru_cache(maxsize=None)
def enumerate_frames(n_w: int) -> tuple[tuple[int, ...], ...]:
    """All ob functions satisfying C1-C5 on ``n_w`` worlds, in canonical
    (lexicographic by context, ascending row value) order.  The all-empty
    frame always comes first."""
    n = 1 << n_w
    options = []
    for x in range(n):
        fams = _trace_families(x)
        rows = sorted((_row(x, t, n), t) for t in fams)
        options.append(rows)
    chosen_traces: list[frozenset[int]] = [frozenset()] * n
    chosen_rows = [0] * n
    found: list[tuple[int, ...]] = []

    def compatible(x: int, traces: frozenset[int]) -> bool:
        for sub in _subsets_of(x):
            if sub == x:
                continue
            sub_tr = chosen_traces[sub]
            # C4 from a smaller context to x
            for y in sub_tr:
                if ((x & ~sub) | y) not in traces:
                    return False
            # C5 from x down to a smaller context
            for t in traces:
                r = t & sub
                if r and r not in sub_tr:
                    return False
        return True

    def go(x: int) -> None:
        if x == n:
            found.append(tuple(chosen_rows))
            return
        for row, traces in options[x]:
            if compatible(x, traces):
                chosen_traces[x] = traces
                chosen_rows[x] = row
                go(x + 1)
        chosen_traces[x] = frozenset()
        chosen_rows[x] = 0

    go(0)
    return tuple(found)
