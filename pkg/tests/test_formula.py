import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from navlogic.errors import EmptySet, FormulaSyntaxError
from navlogic.formula import (
    Atom,
    Implies,
    NavStatement,
    Not,
    atom,
    format_formula,
    parse_atom,
    parse_formula,
    parse_view_list,
)
from navlogic.testkit import random_formula


def test_parse_atom():
    assert parse_formula("{vA} |> {vE,vF}") == atom({"vA"}, {"vE", "vF"})


def test_parse_compound():
    f = parse_formula("!({vA}|>{vE}) -> ({vA}|>{vG})")
    assert f == Implies(Not(atom({"vA"}, {"vE"})), atom({"vA"}, {"vG"}))


def test_implication_is_right_associative():
    p, q, r = (atom({v}, {v}) for v in "pqr")
    assert parse_formula("{p}|>{p} -> {q}|>{q} -> {r}|>{r}") == Implies(p, Implies(q, r))
    assert parse_formula("({p}|>{p} -> {q}|>{q}) -> {r}|>{r}") == Implies(Implies(p, q), r)


def test_not_binds_tighter():
    p, q = atom({"p"}, {"p"}), atom({"q"}, {"q"})
    assert parse_formula("!{p}|>{p} -> {q}|>{q}") == Implies(Not(p), q)


def test_empty_set_rejected():
    with pytest.raises(EmptySet):
        parse_formula("{} |> {vA}")
    with pytest.raises(EmptySet):
        NavStatement(frozenset(), frozenset({"vA"}))


@pytest.mark.parametrize(
    "text",
    ["{vA |> {vB}", "{vA} |> ", "|> {vA}", "({vA}|>{vB}", "{vA}|>{vB})", "{vA,} |> {vB}",
     "{vA} {vB}", "{vA} |> {vB} ->", "{v-A} |> {vB}", ""],
)
def test_syntax_errors(text):
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula(text)
    assert "position" in str(info.value)


def test_format_sorted_members():
    assert format_formula(atom({"vB", "vA"}, {"vC"})) == "{vA,vB} |> {vC}"


def test_format_negation_parenthesized():
    assert format_formula(Not(atom({"vA"}, {"vC"}))) == "!({vA} |> {vC})"
    assert format_formula(Not(Not(atom({"vA"}, {"vC"})))) == "!!({vA} |> {vC})"


def test_format_left_nested_implication():
    p, q, r = (atom({v}, {v}) for v in "pqr")
    assert format_formula(Implies(Implies(p, q), r)) == "({p} |> {p} -> {q} |> {q}) -> {r} |> {r}"


def test_round_trip_seeded():
    rng = random.Random(7)
    for _ in range(1000):
        f = random_formula(rng)
        text = format_formula(f)
        assert parse_formula(text) == f
        assert format_formula(parse_formula(text)) == text


names = st.sampled_from(["vA", "vB", "vC", "x", "y_1", "@w:x+y:z"])
view_sets = st.frozensets(names, min_size=1, max_size=3)
formulas = st.recursive(
    st.builds(lambda a, b: Atom(NavStatement(a, b)), view_sets, view_sets),
    lambda sub: st.one_of(st.builds(Not, sub), st.builds(Implies, sub, sub)),
    max_leaves=8,
)


@given(formulas)
def test_round_trip_property(f):
    assert parse_formula(format_formula(f)) == f


@given(formulas)
def test_format_is_idempotent_on_noncanonical_text(f):
    text = format_formula(f).replace(" ", "   ").replace(",", " , ")
    once = format_formula(parse_formula(text))
    assert once == format_formula(parse_formula(once))


def test_parse_atom_rejects_compound():
    with pytest.raises(FormulaSyntaxError):
        parse_atom("!({x}|>{y})")


def test_parse_view_list():
    assert parse_view_list("vA,vB") == {"vA", "vB"}
    assert parse_view_list("{vA, vB}") == {"vA", "vB"}
    with pytest.raises(EmptySet):
        parse_view_list("{}")
