from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings

from proofforge.derivers import eli_materialize, lazy_view
from proofforge.generators import (
    Qbf, ReductionInstance, deep_eli_theory, enumerate_qbfs, load_sidecar, pad_depth_chain, pad_role_chain,
    parse_qbf, parse_tm, qbf_eval, qbf_threshold, qbf_to_eli, tm_run, tm_threshold, tm_to_eli,
)
from proofforge.logic import Gci, LogicError, Name, Theory, entails, normalize_eli, parse_theory
from proofforge.measures import depth_measure
from proofforge.optimizer import decide_depth_leq, decide_treesize_leq, dijkstra_optimal

from .strategies import el_theories, qbfs

DATA = Path(__file__).parent / "data"


def machine(name: str):
    return parse_tm((DATA / f"{name}.tm").read_text())


# --------------------------------------------------------------------------- QBF


@pytest.mark.parametrize("text, value", [
    ("E x : x", True),
    ("A x : x", False),
    ("A x : x | !x", True),
    ("E x A y : (x | !y) & x", True),
    ("A x E y : (x | !y) & x", False),
    ("A x E y : (x | y) & (!x | !y)", True),
    ("E y A x : (x | y) & (!x | !y)", False),
])
def test_qbf_eval_by_hand(text: str, value: bool) -> None:
    assert qbf_eval(parse_qbf(text)) is value


def test_qbf_syntax() -> None:
    f = parse_qbf("E x1 A x2 : x1 | !x2 & x2")
    assert f.matrix == ("or", ("lit", "x1", True), ("and", ("lit", "x2", False), ("lit", "x2", True)))
    assert parse_qbf(f.render()) == f
    for bad in ("E x : y", "x", "E x : (x", "E x E x : x", "Q x : x"):
        with pytest.raises(LogicError):
            qbf_eval(parse_qbf(bad))


def test_enumeration_small_counts() -> None:
    # one variable: 2 prefixes times (2 literals + 2 connectives x 3 unordered literal pairs)
    assert len(enumerate_qbfs(1, 1)) == 4
    assert len(enumerate_qbfs(1, 3)) == 16
    assert len(enumerate_qbfs(2, 3)) == 112


def test_enumerated_formulas_are_closed_and_small() -> None:
    fs = enumerate_qbfs(2, 5)
    assert len({f.render() for f in fs}) == len(fs)
    for f in fs:
        assert not f.free_variables()


def test_commuted_formulas_give_the_same_instance() -> None:
    f = parse_qbf("E x1 A x2 : (x2 | !x1) & (x1 | x2)")
    g = parse_qbf("E x1 A x2 : (x1 | x2) & (!x1 | x2)")
    assert qbf_to_eli(f).theory == qbf_to_eli(g).theory


@pytest.mark.parametrize("text", ["E x : x", "A x : x", "A x : x | !x", "E x A y : (x | !y) & x",
                                  "A x E y : (x | !y) & x", "A x1 E x2 A x3 : (x1 | x2) & (!x2 | x3)"])
def test_qbf_reduction_examples(text: str) -> None:
    f = parse_qbf(text)
    inst = qbf_to_eli(f)
    assert inst.measure_name == "depth"
    assert entails(inst.theory, inst.goal)
    view = lazy_view("ELI", inst.theory, inst.goal)
    assert bool(decide_depth_leq(view, None, inst.threshold)) == qbf_eval(f)


@settings(max_examples=40, deadline=None)
@given(qbfs())
def test_qbf_reduction_matches_evaluation(f: Qbf) -> None:
    inst = qbf_to_eli(f)
    view = lazy_view("ELI", inst.theory, inst.goal)
    assert bool(decide_depth_leq(view, None, inst.threshold)) == qbf_eval(f)


@pytest.mark.parametrize("text", ["E x : x", "E x A y : x | y", "A x E y A z : (x & !y) | z"])
def test_threshold_is_the_relaxed_optimum(text: str) -> None:
    # the relaxed twin always holds; its optimum, found by the decider, is the threshold
    from proofforge.generators import _qbf_axioms

    f = parse_qbf(text)
    q = qbf_threshold(f)
    view = lazy_view("ELI", Theory(tuple(_qbf_axioms(f, relaxed=True)), "ELI"), Gci(Name("A"), Name("B")))
    assert not decide_depth_leq(view, None, q - 1)
    assert decide_depth_leq(view, None, q)


# --------------------------------------------------------------------------- padding


@pytest.mark.parametrize("q", [0, 1, 2, 5, 8, 13])
def test_role_chain_is_deeper_than_its_bound(q: int) -> None:
    th = pad_role_chain(Theory((), "ELI"), "A", "B", Fraction(q))
    goal = Gci(Name("A"), Name("B"))
    d = eli_materialize(th, goal)
    assert dijkstra_optimal(d, depth_measure()).weight > q
    assert not decide_depth_leq(d, None, q)


def test_name_chain_collapses_under_eli() -> None:
    # the reason depth padding over ELI goes through a role chain
    names = ["A"] + [f"P{i}" for i in range(16)] + ["B"]
    th = parse_theory("dialect ELI\n" + "".join(f"{a} <= {b}\n" for a, b in zip(names, names[1:])))
    d = eli_materialize(th, Gci(Name("A"), Name("B")))
    assert dijkstra_optimal(d, depth_measure()).weight < 10


def test_padding_refuses_used_names() -> None:
    with pytest.raises(LogicError):
        pad_role_chain(parse_theory("dialect ELI\nA <= Link1\n"), "A", "B", Fraction(3))
    with pytest.raises(LogicError):
        pad_depth_chain(parse_theory("A <= Chain1\n"), "A", "B")


@pytest.mark.parametrize("n, depth", [(1, 3), (2, 9), (3, 18)])
def test_deep_theory_depths(n: int, depth: int) -> None:
    th, goal = deep_eli_theory(n)
    d = eli_materialize(th, goal)
    assert dijkstra_optimal(d, depth_measure()).weight == depth > 2**n
    assert not decide_depth_leq(d, None, depth - 1)
    assert decide_depth_leq(d, None, depth)


@settings(max_examples=60, deadline=None)
@given(el_theories())
def test_chain_reduction_matches_entailment(case) -> None:
    theory, goal = case
    inst = pad_depth_chain(theory, goal.lhs.name, goal.rhs.name)
    assert entails(inst.theory, inst.goal)
    view = lazy_view("EL", inst.theory, inst.goal)
    assert bool(decide_depth_leq(view, None, inst.threshold)) == entails(theory, goal)


# --------------------------------------------------------------------------- Turing machines


def test_threshold_formula() -> None:
    assert tm_threshold(2, 2, 1) == 165
    assert tm_threshold(3, 3, 2) == (3 * 9 + 1) * 44


@pytest.mark.parametrize("name, word, outcome", [
    ("scan", "", "reject"), ("scan", "1", "accept"), ("scan", "001", "accept"), ("scan", "000", "reject"),
    ("parity", "", "accept"), ("parity", "1", "reject"), ("parity", "101", "accept"), ("parity", "111", "reject"),
    ("loop", "0", "reject"), ("loop", "10", "accept"), ("loop", "01", "reject"),
    ("runaway", "", "space-exceeded"), ("runaway", "11", "space-exceeded"),
    ("back", "", "space-exceeded"), ("back", "1", "accept"), ("back", "111", "accept"),
])
def test_simulator_by_hand(name: str, word: str, outcome: str) -> None:
    assert tm_run(machine(name), word) == outcome


def test_machine_text_round_trip() -> None:
    m = machine("parity")
    assert parse_tm(m.render()) == m
    with pytest.raises(LogicError):
        parse_tm("states: a\nalphabet: 1\nblank: _\nstart: a\n")
    with pytest.raises(LogicError):
        tm_run(m, "2")


@pytest.mark.parametrize("name, word", [("scan", "1"), ("scan", "0"), ("parity", "11"), ("parity", "10"),
                                        ("loop", "0"), ("runaway", "1"), ("back", "1")])
def test_tm_reduction(name: str, word: str) -> None:
    m = machine(name)
    inst = tm_to_eli(m, word)
    assert inst.measure_name == "treesize"
    normal, _ = normalize_eli(inst.theory)
    view = lazy_view("ELI", normal, inst.goal)
    got = decide_treesize_leq(view, None, inst.threshold, debug_invariants=True)
    assert bool(got) == (tm_run(m, word) == "accept")


def test_deep_padding_variant_for_small_thresholds() -> None:
    m = machine("runaway")
    inst = tm_to_eli(m, "", padding="deep")
    assert inst.threshold == tm_threshold(2, 2, 0)
    normal, _ = normalize_eli(inst.theory)
    assert not decide_treesize_leq(lazy_view("ELI", normal, inst.goal), None, inst.threshold)


def test_sidecar_round_trip(tmp_path) -> None:
    inst = qbf_to_eli(parse_qbf("E x : x"))
    thy, side = inst.write(tmp_path / "q")
    assert parse_theory(thy.read_text()) == inst.theory
    data = load_sidecar(side)
    assert data == {"goal": "A <= B", "threshold": str(inst.threshold), "measure": "depth"}
    assert isinstance(inst, ReductionInstance)
