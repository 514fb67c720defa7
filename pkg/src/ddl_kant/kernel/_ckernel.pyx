# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled evaluator for programs produced by ``compile.py``.

Operation-for-operation twin of ``_pykernel.run``.
"""

from libc.stdint cimport int64_t
from libc.stdlib cimport free, malloc

cdef enum:
    CONST = 0
    ATOM = 1
    APPLY = 2
    OPENAPPLY = 3
    MAXIMAPPLY = 4
    APPLYLIT = 5
    TERMVAR = 6
    CIRC = 7
    GOAL = 8
    NOT = 9
    AND = 10
    OR = 11
    IMPLIES = 12
    IFF = 13
    BOX = 14
    OB = 15
    FORALL_SUBJ = 16
    FORALL_TERM = 17
    FORALL_OPEN = 18
    FORALL_MAXIM = 19

cdef enum:
    S_CONST = 0
    S_VAR = 1


cdef struct Ctx:
    const int64_t* op
    const int64_t* a
    const int64_t* b
    const int64_t* c
    const int64_t* dep
    const unsigned char* ob
    const int64_t* atoms
    const int64_t* acts
    const int64_t* interp
    int64_t* env
    int64_t* stamp
    int64_t* cval
    int64_t* cst
    int64_t counter
    int64_t full
    int n_w
    int n_s


cdef inline int64_t subj(Ctx* x, int64_t kind, int64_t v) noexcept nogil:
    if kind == S_CONST:
        return x.interp[v]
    if kind == S_VAR:
        return x.env[v]
    return v


cdef int64_t ev(Ctx* x, int64_t i) noexcept nogil:
    cdef int64_t o = x.op[i]
    cdef int64_t r, t, body, v, size, slot
    cdef bint cached = o >= BOX
    if cached and x.cst[i] == x.stamp[x.dep[i]]:
        return x.cval[i]
    if o == CONST:
        return x.a[i]
    elif o == ATOM:
        return x.atoms[x.a[i]]
    elif o == APPLY:
        return x.acts[x.a[i] * x.n_s + subj(x, x.b[i], x.c[i])]
    elif o == OPENAPPLY:
        return (x.env[x.a[i]] >> (x.n_w * subj(x, x.b[i], x.c[i]))) & x.full
    elif o == MAXIMAPPLY:
        return (x.env[x.a[i]] >> (x.n_w + x.n_w * subj(x, x.b[i], x.c[i]))) & x.full
    elif o == APPLYLIT:
        return (x.a[i] >> (x.n_w * subj(x, x.b[i], x.c[i]))) & x.full
    elif o == TERMVAR:
        return x.env[x.a[i]]
    elif o == CIRC:
        return x.env[x.a[i]] & x.full
    elif o == GOAL:
        return (x.env[x.a[i]] >> (x.n_w * (1 + x.n_s))) & x.full
    elif o == NOT:
        return ~ev(x, x.a[i]) & x.full
    elif o == AND:
        t = ev(x, x.a[i])
        if t == 0:
            return 0
        return t & ev(x, x.b[i])
    elif o == OR:
        t = ev(x, x.a[i])
        if t == x.full:
            return t
        return t | ev(x, x.b[i])
    elif o == IMPLIES:
        t = ev(x, x.a[i])
        if t == 0:
            return x.full
        return (~t & x.full) | ev(x, x.b[i])
    elif o == IFF:
        t = ev(x, x.a[i])
        return ~(t ^ ev(x, x.b[i])) & x.full
    elif o == BOX:
        r = x.full if ev(x, x.a[i]) == x.full else 0
    elif o == OB:
        body = ev(x, x.a[i])
        t = ev(x, x.b[i])
        r = x.full if x.ob[(t << x.n_w) | body] else 0
    else:
        if o == FORALL_SUBJ:
            size = x.n_s
        elif o == FORALL_TERM:
            size = (<int64_t>1) << x.n_w
        elif o == FORALL_OPEN:
            size = (<int64_t>1) << (x.n_w * x.n_s)
        else:
            size = (<int64_t>1) << (x.n_w * (2 + x.n_s))
        slot = x.a[i]
        body = x.b[i]
        r = x.full
        v = 0
        while v < size:
            x.env[slot] = v
            x.counter += 1
            x.stamp[slot] = x.counter
            r &= ev(x, body)
            if r == 0:
                break
            v += 1
    x.cst[i] = x.stamp[x.dep[i]]
    x.cval[i] = r
    return r


def run(prog, const unsigned char[::1] ob, const int64_t[::1] atoms,
        const int64_t[::1] acts, const int64_t[::1] interp):
    """World mask at which the program's root formula is true."""
    cdef const int64_t[::1] op = prog.op
    cdef const int64_t[::1] a = prog.a
    cdef const int64_t[::1] b = prog.b
    cdef const int64_t[::1] c = prog.c
    cdef const int64_t[::1] dep = prog.dep
    cdef int64_t n = op.shape[0]
    cdef int64_t n_slots = prog.n_slots
    cdef int64_t dummy = 0
    cdef Ctx x
    cdef int64_t k, result
    cdef int64_t root = prog.root
    if prog.n_w * (2 + prog.n_s) > 62:
        raise OverflowError("model too large for 64-bit packed values")
    x.op = &op[0]
    x.a = &a[0]
    x.b = &b[0]
    x.c = &c[0]
    x.dep = &dep[0]
    x.ob = &ob[0]
    x.atoms = &atoms[0] if atoms.shape[0] else &dummy
    x.acts = &acts[0] if acts.shape[0] else &dummy
    x.interp = &interp[0] if interp.shape[0] else &dummy
    x.n_w = prog.n_w
    x.n_s = prog.n_s
    x.full = ((<int64_t>1) << x.n_w) - 1
    x.env = <int64_t*>malloc(n_slots * sizeof(int64_t))
    x.stamp = <int64_t*>malloc(n_slots * sizeof(int64_t))
    x.cval = <int64_t*>malloc(n * sizeof(int64_t))
    x.cst = <int64_t*>malloc(n * sizeof(int64_t))
    if not x.env or not x.stamp or not x.cval or not x.cst:
        free(x.env); free(x.stamp); free(x.cval); free(x.cst)
        raise MemoryError()
    try:
        for k in range(n_slots):
            x.env[k] = 0
            x.stamp[k] = 0
        for k in range(n):
            x.cst[k] = -1
            x.cval[k] = 0
        x.counter = 1
        x.stamp[0] = 1
        with nogil:
            result = ev(&x, root)
    finally:
        free(x.env)
        free(x.stamp)
        free(x.cval)
        free(x.cst)
    return result
