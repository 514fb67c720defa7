from __future__ import annotations

import random

import pytest

from ddl_kant.errors import ArityMismatch, UnknownMacro, UnknownSystem
from ddl_kant.kantian import (
    SYSTEM_NAMES, custom_ful, distributive_background, expand, get_system, kroy_ful, unguarded_ful,
)
from ddl_kant.kernel import extension_mask, holds
from ddl_kant.scenario import corpus_path, load_scenario
from ddl_kant.search import COUNTERMODEL, MODEL_FOUND, NO_MODEL, VALID, Bounds, check_valid, find_model
from ddl_kant.syntax import (
    CONST, VAR, And, Apply, Atom, Box, ForallSubject, Iff, Implies, MacroCall, MaximLit, Not, Ob,
    Subj, free_sorts, parse, symbols,
)

from oracles import random_model

S1 = Subj("s1", CONST)


def test_will_expands_to_strict_implication():
    assert expand(parse("(will (maxim c a g) s1)")) == Box(Implies(Atom("c"), Apply("a", S1)))


def test_prohibited_and_obligatory_shapes():
    assert expand(parse("(prohibited (maxim c a g) s1)")) == Ob(Not(Apply("a", S1)), Atom("c"))
    assert expand(parse("(obligatory (maxim c a g) s1)")) == Ob(Apply("a", S1), Atom("c"))
    assert expand(parse("(permissible (maxim c a g) s1)")) == Not(Ob(Not(Apply("a", S1)), Atom("c")))


def test_universalized_binds_a_fresh_subject():
    f = expand(parse("(universalized (maxim p a g))"))
    assert isinstance(f, ForallSubject) and f.var not in ("p", "a", "g")
    assert f.body == Box(Implies(Atom("p"), Apply("a", Subj(f.var, VAR))))


def test_effective_expansion():
    f = expand(parse("(effective (maxim c a g) s1)"))
    assert f == Box(Iff(Box(Implies(Atom("c"), Apply("a", S1))), Atom("g")))


def test_well_formed_readings_differ():
    b = expand(parse("(well_formed (maxim c a g) s1)"), "B")
    a = expand(parse("(well_formed (maxim c a g) s1)"), "A")
    assert isinstance(b, And) and isinstance(a, Box)
    with pytest.raises(ValueError):
        expand(parse("(well_formed (maxim c a g) s1)"), "C")


def test_expansion_is_idempotent_and_closed():
    for f in (custom_ful(), custom_ful("A"), unguarded_ful(), kroy_ful(), distributive_background()):
        assert expand(f) == f
        assert free_sorts(f) == {}
    assert symbols(custom_ful()) == (set(), set(), set())


def test_macro_errors():
    with pytest.raises(UnknownMacro):
        expand(MacroCall("frobnicate", (MaximLit(Atom("c"), "a", Atom("g")), S1)))
    with pytest.raises(ArityMismatch):
        expand(MacroCall("will", (MaximLit(Atom("c"), "a", Atom("g")),)))


def test_unknown_system():
    with pytest.raises(UnknownSystem):
        get_system("utilitarian")
    assert set(SYSTEM_NAMES) == {"naive", "kroy", "custom"}
    assert get_system("naive").axioms == ()
    assert get_system("custom").evaluates_maxims and not get_system("kroy").evaluates_maxims


def test_breakfast_maxim_is_never_well_formed():
    wf = expand(parse("(well_formed (maxim eating eat eating) s1)"))
    rng = random.Random(21)
    for _ in range(500):
        m = random_model(rng, rng.randint(1, 3), rng.randint(1, 2), atoms=("eating",), actions=("eat",))
        assert extension_mask(wf, m) == 0
    sc = load_scenario(corpus_path("breakfast.ked"))
    assert sc.maxim.circ == sc.maxim.goal


def test_kroy_axiom_is_trivial_with_one_subject():
    assert check_valid([], kroy_ful(), Bounds(3, 1)).outcome == VALID
    r = check_valid([], kroy_ful(), Bounds(3, 2))
    assert r.outcome == COUNTERMODEL and r.model.n_s == 2


def test_distributive_background_is_not_a_ddl_theorem():
    r = check_valid([], distributive_background(), Bounds(3, 2))
    assert r.outcome == COUNTERMODEL
    assert not holds(distributive_background(), r.model)


def test_distributive_background_rules_out_clashing_obligations():
    clash = parse("(and (ob p c) (ob (not p) c))")
    assert find_model([distributive_background()], [clash], Bounds(3, 2)).outcome == NO_MODEL
    assert find_model([], [clash], Bounds(2, 1)).outcome == MODEL_FOUND


@pytest.mark.parametrize("reading", ["A", "B"])
def test_every_system_is_consistent(reading):
    for name in SYSTEM_NAMES:
        r = find_model(list(get_system(name, reading).axioms), b=Bounds(3, 2))
        assert r.outcome == MODEL_FOUND, name


def test_custom_models_have_one_world():
    """Every model of the custom system inside the default bounds is a
    single world: the universal-law axiom plus the distributive axiom
    rule out every frame on two or three worlds."""
    axioms = list(get_system("custom").axioms)
    for n_w in (2, 3):
        r = find_model(axioms, [parse("(diamond p)"), parse("(diamond (not p))")], Bounds(n_w, 2))
        assert r.outcome == NO_MODEL


def test_universal_law_without_guard_is_inconsistent():
    assert find_model([unguarded_ful()], b=Bounds(3, 2)).outcome == NO_MODEL
    assert find_model([custom_ful()], b=Bounds(3, 2)).outcome == MODEL_FOUND


def test_custom_and_kroy_are_incomparable_at_bounds():
    b = Bounds(3, 2)
    assert check_valid(list(get_system("custom").axioms), kroy_ful(), b).outcome == COUNTERMODEL
    assert check_valid(list(get_system("kroy").axioms), custom_ful(), b).outcome == COUNTERMODEL


def test_universal_law_is_stronger_than_base_ddl():
    r = check_valid([], custom_ful(), Bounds(1, 1))
    assert r.outcome == COUNTERMODEL
    assert r.model.ob == (0, 0)  # the empty frame
