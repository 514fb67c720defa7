from __future__ import annotations

import itertools
import json
import random
import threading

import pytest

from ddl_kant import kernel
from ddl_kant.errors import UnexpandedMacro, UninterpretedSymbol
from ddl_kant.kantian import custom_ful, distributive_background, kroy_ful
from ddl_kant.kernel import (
    FrameConditions, Model, _pykernel, check_frame, compile_formula, default_subjects,
    default_worlds, enumerate_frames, evaluate, extension, extension_mask, holds,
)
from ddl_kant.syntax import TRUE, Box, Not, Ob, TermLit, parse

from oracles import FormulaGen, brute_frame_ok, brute_frames, naive_extension, random_model

try:
    from ddl_kant.kernel import _ckernel
except ImportError:  # extension not built
    _ckernel = None


def one_world(ob_w=True, p=True) -> Model:
    return Model(("w1",), ("s1",), (0, 0b10 if ob_w else 0), {"p": 1 if p else 0})


def test_true_everywhere():
    m = random_model(random.Random(1), 3, 2)
    for w in m.worlds:
        assert evaluate(TRUE, m, w)


def test_one_world_obligation():
    m = one_world()
    assert evaluate(parse("(ob p true)"), m, "w1")
    assert not evaluate(parse("(ob (not p) true)"), m, "w1")


def test_extension_basics():
    rng = random.Random(2)
    m = random_model(rng, 3, 2)
    p = parse("p")
    assert extension(TRUE, m) == list(m.worlds)
    assert extension_mask(Not(p), m) == m.full & ~extension_mask(p, m)
    assert extension_mask(Box(p), m) in (0, m.full)


def test_rigidity_of_box_and_ob():
    rng = random.Random(3)
    gen = FormulaGen(rng)
    for _ in range(300):
        m = random_model(rng, 3, 2)
        a, b = gen.formula(3), gen.formula(3)
        assert extension_mask(Ob(a, b), m) in (0, m.full)
        assert extension_mask(Box(a), m) in (0, m.full)


def test_uninterpreted_and_macro_errors():
    m = one_world()
    with pytest.raises(UninterpretedSymbol):
        extension(parse("q"), m)
    with pytest.raises(UninterpretedSymbol):
        extension(parse("(act run s9)"), m)
    with pytest.raises(UnexpandedMacro):
        extension(parse("(will (maxim p run p) s1)"), m)


def _random_ob(rng, n_w):
    n = 1 << n_w
    return tuple(rng.randrange(1 << n) for _ in range(n))


def test_oracle_equivalence_random_formulas():
    """Optimized evaluator vs direct recursion, >= 10^4 formulas of depth <= 5."""
    rng = random.Random(4)
    trials = 0
    for _ in range(10_000):
        n_w, n_s = rng.randint(1, 2), rng.randint(1, 2)
        gen = FormulaGen(rng, worlds=default_worlds(n_w), subjects=default_subjects(n_s))
        f = gen.formula(rng.randint(1, 5))
        m = random_model(rng, n_w, n_s)
        if rng.random() < 0.5:
            m = Model(m.worlds, m.subjects, _random_ob(rng, n_w), m.val, m.act_val, m.subj_interp)
        assert extension_mask(f, m) == naive_extension(f, m), f
        trials += 1
    assert trials >= 10_000


@pytest.mark.skipif(_ckernel is None, reason="compiled kernel not built")
def test_backends_agree():
    rng = random.Random(5)
    for _ in range(3000):
        n_w, n_s = rng.randint(1, 3), rng.randint(1, 2)
        gen = FormulaGen(rng, worlds=default_worlds(n_w), subjects=default_subjects(n_s))
        f = gen.formula(rng.randint(1, 6))
        m = random_model(rng, n_w, n_s)
        prog = compile_formula(f, m.shape)
        assert _ckernel.run(prog, *m.arrays) == _pykernel.run(prog, *m.arrays)


@pytest.mark.skipif(_ckernel is None, reason="compiled kernel not built")
def test_backends_agree_on_axioms():
    for n_w in (1, 2, 3):
        for n_s in (1, 2):
            for ob in enumerate_frames(n_w):
                m = Model(default_worlds(n_w), default_subjects(n_s), ob)
                for f in (custom_ful(), kroy_ful(), distributive_background()):
                    prog = compile_formula(f, m.shape)
                    assert _ckernel.run(prog, *m.arrays) == _pykernel.run(prog, *m.arrays)


def test_forall_term_matches_explicit_subsets():
    rng = random.Random(6)
    ws = default_worlds(2)
    body = parse("(forall-term x (implies (ob x p) (ob (and x q) p)))").body
    from ddl_kant.search import Grounder, Bounds
    g = Grounder(Bounds(2, 1))
    for _ in range(200):
        m = random_model(rng, 2, 1)
        m = Model(m.worlds, m.subjects, _random_ob(rng, 2), m.val, m.act_val, m.subj_interp)
        quantified = extension_mask(parse("(forall-term x (implies (ob x p) (ob (and x q) p)))"), m)
        explicit = m.full
        for bits in range(4):
            inst = g.ground(body, {("term", "x"): TermLit(frozenset(w for i, w in enumerate(ws) if bits >> i & 1))})
            explicit &= extension_mask(inst, m)
        assert quantified == explicit


# -- frames -----------------------------------------------------------------

def test_empty_frame_is_valid():
    for n_w in (1, 2, 3):
        assert check_frame(tuple([0] * (1 << n_w)), n_w=n_w) == []


def test_empty_set_obligated_violates_c1():
    v = check_frame((0, 0b01), n_w=1)
    assert any(x.condition == "C1" for x in v)


def test_frame_count_one_world():
    # derived by filtering all 16 candidate ob maps
    assert len(brute_frames(1)) == 2
    assert len(enumerate_frames(1)) == 2


def test_enumeration_matches_brute_force():
    for n_w in (1, 2):
        assert list(enumerate_frames(n_w)) == sorted(brute_frames(n_w))
    assert [len(enumerate_frames(n)) for n in (1, 2, 3)] == [2, 5, 9]
    assert all(check_frame(ob, n_w=3) == [] for ob in enumerate_frames(3))
    assert enumerate_frames(3)[0] == (0,) * 8


def test_check_frame_sound_and_complete():
    """All 2^16 ob maps on two worlds, every condition separately."""
    for n_w in (1, 2):
        n = 1 << n_w
        for ob in itertools.product(range(1 << n), repeat=n):
            for c in ("C1", "C2", "C3", "C4", "C5"):
                fc = FrameConditions(**{k: k == c.lower() for k in ("c1", "c2", "c3", "c4", "c5")})
                assert (check_frame(ob, fc, n_w=n_w) == []) == brute_frame_ok(ob, n_w, (c,))


def test_violation_names_witness_sets():
    v = check_frame((0, 0b10, 0, 0b1000), n_w=2)  # ob({w1,w2}) = {{w1,w2}} but ob({w1}) lacks {w1}
    assert v
    assert all(set(x.sets) <= {"X", "Y", "Z"} for x in v)
    assert "C" in str(v[0])


# -- model JSON ---------------------------------------------------------------

def test_model_json_round_trip_and_shape():
    m = random_model(random.Random(7), 3, 2)
    d = json.loads(m.to_json())
    assert set(d) == {"worlds", "subjects", "ob", "val", "act_val", "subjects_interp"}
    for entry in d["ob"]:
        assert entry["context"] == sorted(entry["context"])
        assert all(ys == sorted(ys) for ys in entry["obligatory"])
    assert Model.from_json(m.to_json()) == m


def test_concurrent_evaluation_is_safe():
    rng = random.Random(8)
    m = random_model(rng, 3, 2)
    gen = FormulaGen(rng)
    fs = [gen.formula(4) for _ in range(200)]
    expected = [extension_mask(f, m) for f in fs]
    errors = []

    def work():
        for f, e in zip(fs, expected):
            if extension_mask(f, m) != e:
                errors.append(f)

    threads = [threading.Thread(target=work) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors


def test_backend_name():
    assert kernel.BACKEND in ("cython", "python")


def test_holds_means_every_world():
    m = Model(("w1", "w2"), ("s1",), (0,) * 4, {"p": 0b01})
    assert not holds(parse("p"), m)
    assert holds(parse("(or p (not p))"), m)
