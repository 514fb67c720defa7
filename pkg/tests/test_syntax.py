from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ddl_kant.errors import DdlError, ParseError, SortError, UnboundVariable
from ddl_kant.kantian import custom_ful
from ddl_kant.scenario import corpus_files, corpus_path, load_scenario, parse_scenario
from ddl_kant.syntax import (
    CONST, TRUE, VAR, And, Apply, Atom, Box, ForallSubject, ForallTerm, Implies, MacroCall,
    MaximVar, Not, Ob, Subj, TermVar, check_sorts, free_sorts, parse, parse_many, pretty, to_sexpr,
)

from oracles import FormulaGen


def test_parse_obligation_example():
    assert parse("(ob (not (act lie s1)) c)") == Ob(Not(Apply("lie", Subj("s1", CONST))), Atom("c"))


def test_parse_will_shape():
    f = parse("(box (implies c (act a s1)))")
    assert f == Box(Implies(Atom("c"), Apply("a", Subj("s1", CONST))))


def test_unbalanced_reports_end_of_input():
    with pytest.raises(ParseError) as e:
        parse("(and p")
    assert (e.value.line, e.value.col) == (1, 7)
    assert ")" in e.value.expected


def test_error_location_on_later_line():
    with pytest.raises(ParseError) as e:
        parse("(and p\n  (frob q))")
    assert e.value.line == 2 and e.value.col == 4


def test_print_atom_and_ob():
    assert to_sexpr(Atom("p")) == "p"
    assert to_sexpr(Ob(Atom("a"), Atom("c"))) == "(ob a c)"


def test_monadic_ob_and_diamond_sugar():
    assert parse("(ob p)") == Ob(Atom("p"), TRUE)
    assert parse("(diamond p)") == Not(Box(Not(Atom("p"))))


def test_nary_and_folds_right():
    assert parse("(and p q r)") == And(Atom("p"), And(Atom("q"), Atom("r")))


def test_free_sorts():
    assert free_sorts(custom_ful()) == {}
    assert free_sorts(TermVar("x")) == {"x": "term"}
    assert free_sorts(MacroCall("will", (MaximVar("m"), Subj("s1", CONST)))) == {"m": "maxim"}
    assert free_sorts(parse("(will m s1)")) == {"m": "maxim"}


def test_sort_errors():
    with pytest.raises(SortError):
        parse("(forall-subject x (and x p))")
    with pytest.raises(SortError):
        parse("(forall-term x (act a x))")
    with pytest.raises(SortError):
        check_sorts(And(TermVar("x"), Apply("a", Subj("x", VAR))))
    with pytest.raises(UnboundVariable):
        parse("(will m s1)", closed=True)


def test_bound_variable_capturing_an_atom_is_rejected():
    # Atom("x") under a binder for x would print as the variable
    with pytest.raises(SortError):
        check_sorts(ForallTerm("x", Atom("x")))
    with pytest.raises(SortError):
        check_sorts(ForallSubject("k", Apply("a", Subj("k", CONST))))


def test_pretty_parses_back():
    f = custom_ful()
    text = pretty(f, width=40)
    assert "\n" in text
    assert parse(text) == f


def test_corpus_formulas_round_trip():
    files = corpus_files()
    assert len(files) >= 4
    for path in files:
        sc = load_scenario(path)
        for f in (sc.maxim.circ, sc.maxim.goal, *sc.assumptions):
            assert parse(to_sexpr(f)) == f
            assert parse(pretty(f, width=30)) == f
        assert parse_scenario(sc.to_text()) == sc
    for f in parse_many(corpus_path("custom-ful.l").read_text()):
        assert parse(to_sexpr(f)) == f


def test_round_trip_fuzzed_asts():
    rng = random.Random(20240601)
    gen = FormulaGen(rng, worlds=("w1", "w2"), subjects=("s1", "s2"), max_quantifiers=3)
    for _ in range(10_000):
        f = gen.formula(rng.randint(0, 6))
        assert parse(to_sexpr(f)) == f


@st.composite
def formulas(draw, depth=4):
    seed = draw(st.integers(0, 2 ** 32 - 1))
    d = draw(st.integers(0, depth))
    return FormulaGen(random.Random(seed), worlds=("w1",), subjects=("s1",)).formula(d)


@settings(max_examples=300, deadline=None)
@given(formulas())
def test_round_trip_property(f):
    assert parse(to_sexpr(f)) == f


_ALPHABET = st.sampled_from(list("()pqab ;\n#") + ["not ", "and ", "ob ", "act ", "box ",
                                                    "forall-term ", "forall-subject ", "maxim ",
                                                    "will ", "x ", "s1 ", "(worlds w1)"])


@settings(max_examples=2000, deadline=None)
@given(st.lists(_ALPHABET, max_size=30).map("".join))
def test_parser_is_total(text):
    try:
        parse(text)
    except DdlError:
        pass


@settings(max_examples=500, deadline=None)
@given(st.text(max_size=40))
def test_parser_is_total_on_arbitrary_text(text):
    try:
        parse(text)
    except DdlError:
        pass


def test_deep_nesting_reports_error_instead_of_crashing():
    text = "(not " * 5000 + "p" + ")" * 5000
    with pytest.raises(DdlError):
        parse(text)
