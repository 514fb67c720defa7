"""Pure-Python evaluator for compiled programs.

Mirrors ``_ckernel.pyx`` operation for operation; used when the extension is
not built or when ``DDLKANT_PURE_PYTHON`` is set.
"""

from __future__ import annotations

from .compile import (
    AND, APPLY, APPLYLIT, ATOM, BOX, CACHED_OPS, CIRC, CONST, FORALL_MAXIM, FORALL_OPEN,
    FORALL_SUBJ, FORALL_TERM, GOAL, IFF, IMPLIES, MAXIMAPPLY, NOT, OB, OPENAPPLY, OR, S_CONST,
    S_VAR, TERMVAR, Program,
)


def run(prog: Program, ob: bytes, atoms, acts, interp) -> int:
    """World mask at which the program's root formula is true."""
    n_w = prog.n_w
    n_s = prog.n_s
    full = (1 << n_w) - 1
    op, A, B, C, dep = prog.op, prog.a, prog.b, prog.c, prog.dep
    n = len(op)
    cacheable = [o in CACHED_OPS for o in op]
    env = [0] * prog.n_slots
    stamp = [0] * prog.n_slots
    cval = [0] * n
    cst = [-1] * n
    counter = 1
    stamp[0] = 1
    maxim_goal_shift = n_w * (1 + n_s)
    sizes = {
        FORALL_SUBJ: n_s,
        FORALL_TERM: 1 << n_w,
        FORALL_OPEN: 1 << (n_w * n_s),
        FORALL_MAXIM: 1 << (n_w * (2 + n_s)),
    }

    def subj(kind: int, v: int) -> int:
        if kind == S_CONST:
            return interp[v]
        if kind == S_VAR:
            return env[v]
        return v

    def ev(i: int) -> int:
        nonlocal counter
        if cacheable[i]:
            st = stamp[dep[i]]
            if cst[i] == st:
                return cval[i]
        o = op[i]
        if o == CONST:
            return A[i]
        if o == ATOM:
            return atoms[A[i]]
        if o == APPLY:
            return acts[A[i] * n_s + subj(B[i], C[i])]
        if o == OPENAPPLY:
            return (env[A[i]] >> (n_w * subj(B[i], C[i]))) & full
        if o == MAXIMAPPLY:
            return (env[A[i]] >> (n_w + n_w * subj(B[i], C[i]))) & full
        if o == APPLYLIT:
            return (A[i] >> (n_w * subj(B[i], C[i]))) & full
        if o == TERMVAR:
            return env[A[i]]
        if o == CIRC:
            return env[A[i]] & full
        if o == GOAL:
            return (env[A[i]] >> maxim_goal_shift) & full
        if o == NOT:
            return ~ev(A[i]) & full
        if o == AND:
            x = ev(A[i])
            return x & ev(B[i]) if x else 0
        if o == OR:
            x = ev(A[i])
            return x | ev(B[i]) if x != full else full
        if o == IMPLIES:
            x = ev(A[i])
            return (~x & full) | ev(B[i]) if x else full
        if o == IFF:
            return ~(ev(A[i]) ^ ev(B[i])) & full
        if o == BOX:
            r = full if ev(A[i]) == full else 0
        elif o == OB:
            body = ev(A[i])
            ctx = ev(B[i])
            r = full if ob[(ctx << n_w) | body] else 0
        else:
            slot = A[i]
            body = B[i]
            r = full
            for v in range(sizes[o]):
                env[slot] = v
                counter += 1
                stamp[slot] = counter
                r &= ev(body)
                if not r:
                    break
        cst[i] = stamp[dep[i]]
        cval[i] = r
        return r

    return ev(prog.root)
