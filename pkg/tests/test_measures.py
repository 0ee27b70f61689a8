from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from proofforge.logic import Gci, Name
from proofforge.measures import (
    LogDepth, MeasureUndefined, Measure, check_monotone, depth_measure, format_weight, log_depth_measure,
    measure_by_name, parse_weight, tree_size_measure,
)

from .strategies import weights

LABEL = (frozenset({Gci(Name("A"), Name("B"))}), Gci(Name("A"), Name("C")))


@pytest.mark.parametrize("text, value", [("3", Fraction(3)), ("7/2", Fraction(7, 2)), ("1.25", Fraction(5, 4)),
                                         (" 0 ", Fraction(0))])
def test_parse_weight(text: str, value: Fraction) -> None:
    assert parse_weight(text) == value


@pytest.mark.parametrize("text", ["-1", "x", "1/", "2e3", ""])
def test_parse_weight_rejects(text: str) -> None:
    with pytest.raises(ValueError):
        parse_weight(text)


@given(weights)
def test_weight_text_round_trip(w: Fraction) -> None:
    assert parse_weight(format_weight(w)) == w


def test_leaf_and_edge_values() -> None:
    d, t = depth_measure(), tree_size_measure()
    assert d.leaf(LABEL[1]) == 0 and t.leaf(LABEL[1]) == 1
    assert d.edge(LABEL, [Fraction(2), Fraction(5)]) == 6
    assert t.edge(LABEL, [Fraction(2), Fraction(5)]) == 8
    assert d.edge(LABEL, []) == 1 and t.edge(LABEL, []) == 1


def test_partial_edge_function_is_an_error() -> None:
    m = Measure("partial", lambda _l: Fraction(0), lambda _l, ws: None)
    with pytest.raises(MeasureUndefined):
        m.edge(LABEL, [Fraction(1)])


@given(st.lists(weights, max_size=4))
def test_depth_and_tree_size_are_monotone(ws) -> None:
    for m in (depth_measure(), tree_size_measure(), log_depth_measure()):
        assert check_monotone(m, [LABEL], [ws]) == []


def test_monotonicity_checker_catches_a_decreasing_edge() -> None:
    bad = Measure("bad", lambda _l: Fraction(0), lambda _l, ws: 10 - sum(ws, Fraction(0)))
    assert check_monotone(bad, [LABEL], [[Fraction(3)]])


@pytest.mark.parametrize("depth, bound, ok", [(8, 3, True), (9, 3, False), (0, 0, True), (1, 0, True),
                                              (2, 0, False), (3, Fraction(3, 2), False), (2, Fraction(3, 2), True)])
def test_log_depth_bound(depth: int, bound, ok: bool) -> None:
    assert log_depth_measure().within(Fraction(depth), Fraction(bound)) is ok


@given(st.fractions(min_value=0, max_value=12, max_denominator=5))
def test_depth_cap_is_the_largest_admissible_depth(b) -> None:
    m = log_depth_measure()
    cap = LogDepth.depth_cap(b)
    assert m.within(Fraction(cap), b)
    assert not m.within(Fraction(cap + 1), b)


def test_log_depth_display() -> None:
    m = log_depth_measure()
    assert m.display(Fraction(0)) == "0"
    assert m.display(Fraction(8)) == "3"


def test_measure_lookup() -> None:
    assert measure_by_name("treesize").name == "treesize"
    with pytest.raises(ValueError):
        measure_by_name("size")
