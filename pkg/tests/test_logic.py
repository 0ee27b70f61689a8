import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from proofforge.derivers import elk_derivable, eli_derivable
from proofforge.logic import (
    TOP, DialectError, Exists, Forall, Gci, Name, ParseError, Role, Theory, conj, entails, is_eli_normal,
    normalize_eli, parse_axiom, parse_concept, parse_theory, subconcepts,
)

from .strategies import NAMES, el_concepts, el_theories, eli_concepts, eli_theories

A, B, C = Name("A"), Name("B"), Name("C")
r = Role("r")


def test_parse_basic_shapes() -> None:
    assert parse_concept("top") == TOP
    assert parse_concept("ex r. A") == Exists(r, A)
    assert parse_concept("all inv(r). A") == Forall(r.inverse(), A)
    assert parse_concept("A and B and C") == conj(A, B, C)
    assert parse_concept("(C and A) and B") == parse_concept("B and (A and C)")


def test_conjunction_is_canonical() -> None:
    assert conj(A, TOP) == A
    assert conj(A, A) == A
    assert conj() == TOP
    assert conj(B, conj(A, C)) == conj(C, B, A)


def test_theory_file_with_comments_and_dialect() -> None:
    th = parse_theory("# a comment\nA <= B   # trailing\n\nB <= ex r. A\n")
    assert th.dialect == "EL"
    assert th.axioms == (Gci(A, B), Gci(B, Exists(r, A)))
    assert parse_theory("A <= all r. B\n").dialect == "ELI"
    assert parse_theory("dialect ELI\nA <= B\n").dialect == "ELI"


def test_syntax_errors_carry_line_numbers() -> None:
    with pytest.raises(ParseError) as exc:
        parse_theory("A <= B\nB <= ex r A\n")
    assert exc.value.line == 2
    assert exc.value.code == "syntax"
    with pytest.raises(ParseError) as exc:
        parse_theory("A <= B\n\nB <=\n")
    assert exc.value.line == 3


@pytest.mark.parametrize("text", ["A <= all r. B", "A <= ex inv(r). B"])
def test_el_dialect_rejects_eli_constructors(text: str) -> None:
    with pytest.raises(DialectError):
        parse_theory("dialect EL\n" + text)


def test_reserved_names_are_refused() -> None:
    with pytest.raises(ParseError):
        parse_axiom("_N1 <= A")
    with pytest.raises(ParseError):
        parse_axiom("ex <= A")


@given(el_concepts(), el_concepts())
def test_render_parse_round_trip(lhs, rhs) -> None:
    g = Gci(lhs, rhs)
    assert parse_axiom(g.render()) == parse_axiom(parse_axiom(g.render()).render())


@given(eli_concepts(), eli_concepts())
def test_eli_render_parse_round_trip(lhs, rhs) -> None:
    g = parse_axiom(Gci(lhs, rhs).render())
    assert parse_axiom(g.render()) == g


@given(el_theories())
def test_subconcepts_are_closed(case) -> None:
    theory, goal = case
    sub = subconcepts(theory, goal)
    for c in sub:
        if isinstance(c, Exists):
            assert c.filler in sub
        if hasattr(c, "conjuncts"):
            assert all(x in sub for x in c.conjuncts)
    assert goal.lhs in sub and goal.rhs in sub


@given(eli_theories())
def test_normal_form_shape(case) -> None:
    theory, _ = case
    normal, origin = normalize_eli(theory)
    assert normal.dialect == "ELI"
    assert all(is_eli_normal(ax) for ax in normal)
    assert set(origin.values()) <= set(range(len(theory)))


@settings(max_examples=60, deadline=None)
@given(el_theories())
def test_normalization_is_conservative_on_el(case) -> None:
    # the ELK route works on the original, the ELI route on the normal form
    theory, _ = case
    normal, _ = normalize_eli(Theory(theory.axioms, "ELI"))
    for a in NAMES:
        for b in NAMES:
            goal = Gci(Name(a), Name(b))
            assert elk_derivable(theory, goal) == eli_derivable(normal, goal)


@settings(max_examples=40, deadline=None)
@given(eli_theories(), st.data())
def test_normalizing_twice_changes_nothing_semantically(case, data) -> None:
    theory, goal = case
    once, _ = normalize_eli(theory)
    twice, _ = normalize_eli(once)
    assert eli_derivable(once, goal) == eli_derivable(twice, goal)


def test_fresh_names_avoid_existing_ones() -> None:
    once, _ = normalize_eli(parse_theory("A <= ex r. (B and ex s. C)\n"))
    twice, _ = normalize_eli(Theory(once.axioms + (Gci(A, Exists(r, conj(B, Exists(r, C)))),), "ELI"))
    assert len(twice.names()) > len(once.names())
    assert all(is_eli_normal(ax) for ax in twice)


def test_entails_small_cases() -> None:
    th = parse_theory("A <= B\nB <= ex r. C\n(ex r. C) <= D\n")
    assert entails(th, parse_axiom("A <= D"))
    assert not entails(th, parse_axiom("D <= A"))
    eli = parse_theory("A <= ex r. B\nB <= all inv(r). C\n")
    assert entails(eli, parse_axiom("A <= C"))
    wrong_role = parse_theory("A <= ex r. B\nB <= all inv(s). C\n")
    assert not entails(wrong_role, parse_axiom("A <= C"))
