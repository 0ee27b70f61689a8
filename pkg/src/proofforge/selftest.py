"""Seeded invariant suites behind ``proofforge selftest``."""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import TextIO

from . import derivers, generators, optimizer
from .hypergraph import unravel
from .logic import Gci, Name, Role, Exists, Theory, conj
from .measures import depth_measure, evaluate, log_depth_measure, tree_size_measure


def small_case() -> tuple[Theory, Gci]:
    a, b, r = Name("A"), Name("B"), Role("r")
    theory = Theory((Gci(a, b), Gci(b, Exists(r, a))), "EL")
    return theory, Gci(a, conj(b, Exists(r, a)))


def suite_oracle(seed: int, runs: int) -> list[str]:
    rng = random.Random(seed)
    bad = []
    for i in range(runs):
        d = generators.random_structure(rng)
        for m in (depth_measure(), tree_size_measure()):
            try:
                fast = optimizer.dijkstra_optimal(d, m, debug=True).weight
            except optimizer.NoProof:
                fast = None
            try:
                slow = optimizer.brute_force_optimal(d, m).weight
            except optimizer.NoProof:
                slow = None
            if fast != slow:
                bad.append(f"case {i} {m.name}: dijkstra {fast} vs brute force {slow}")
    return bad


def suite_deciders(seed: int, runs: int) -> list[str]:
    rng = random.Random(seed + 1)
    bad = []
    for i in range(runs):
        d = generators.random_structure(rng)
        for m, decide in ((depth_measure(), optimizer.decide_depth_leq),
                          (tree_size_measure(), optimizer.decide_treesize_leq)):
            opt = optimizer.dijkstra_optimal(d, m).weight
            for q in (opt - 1, opt, opt + 1):
                if decide is optimizer.decide_treesize_leq:
                    got = decide(d, None, q, debug_invariants=True)
                else:
                    got = decide(d, None, q)
                if bool(got) != (opt <= q):
                    bad.append(f"case {i} {m.name} q={q}: decided {bool(got)}, optimum {opt}")
                elif got and m.within(evaluate(m, got.witness), q) is False:
                    bad.append(f"case {i} {m.name} q={q}: witness exceeds the bound")
    return bad


def suite_unravel(seed: int, runs: int) -> list[str]:
    rng = random.Random(seed + 2)
    bad = []
    for i in range(runs):
        d = generators.random_structure(rng)
        for p in optimizer.enumerate_proofs(d, cap=20):
            t = unravel(p)
            for m in (depth_measure(), tree_size_measure()):
                if evaluate(m, p) != evaluate(m, t):
                    bad.append(f"case {i} {m.name}: {evaluate(m, p)} before, {evaluate(m, t)} unravelled")
    return bad


def suite_logdepth(seed: int, runs: int) -> list[str]:
    rng = random.Random(seed + 3)
    bad = []
    for i in range(runs):
        d = generators.random_structure(rng)
        a = optimizer.dijkstra_optimal(d, depth_measure())
        b = optimizer.dijkstra_optimal(d, log_depth_measure())
        if evaluate(depth_measure(), b.proof) != a.weight:
            bad.append(f"case {i}: log-depth optimum has depth {evaluate(depth_measure(), b.proof)}, not {a.weight}")
    return bad


def suite_saturation(seed: int, runs: int) -> list[str]:
    """Materialized and lazy routes agree, and every edge is a sound inference."""
    rng = random.Random(seed + 4)
    bad = []
    sound = derivers.edge_oracle("EL")
    for i in range(max(1, runs // 4)):
        theory, goal = generators.random_el_theory(rng)
        d = derivers.materialize("EL", theory, goal)
        view = derivers.lazy_view("EL", theory, goal)
        mat = derivers.structure_view(d)
        if len(view) != len(mat):
            bad.append(f"case {i}: {len(view)} lazy vertices vs {len(mat)} materialized")
            continue
        for v in range(len(mat)):
            if view.label(v) != mat.label(v) or view.expand(v) != mat.expand(v):
                bad.append(f"case {i}: routes differ at {mat.label(v)}")
                break
        for e in d.graph.edges[:40]:
            prem, concl = d.graph.edge_label(e)
            if not sound(sorted(prem, key=lambda g: g.key), concl):
                bad.append(f"case {i}: unsound edge to {concl}")
    return bad


def suite_small(seed: int, runs: int) -> list[str]:
    theory, goal = small_case()
    d = derivers.materialize("EL", theory, goal)
    want = {"depth": 2, "treesize": 5}
    bad = []
    for m in (depth_measure(), tree_size_measure()):
        w = optimizer.dijkstra_optimal(d, m).weight
        if w != want[m.name]:
            bad.append(f"{m.name} {w}, expected {want[m.name]}")
    s = optimizer.brute_force_optimal(d, "size").weight
    if s != Fraction(4):
        bad.append(f"size {s}, expected 4")
    return bad


SUITES = {
    "small": suite_small,
    "oracle": suite_oracle,
    "deciders": suite_deciders,
    "unravel": suite_unravel,
    "logdepth": suite_logdepth,
    "saturation": suite_saturation,
}


def _run(job: tuple[str, int, int]) -> tuple[str, list[str]]:
    name, seed, runs = job
    return name, SUITES[name](seed, runs)


def run_suites(seed: int = 0, runs: int = 200, jobs: int = 1, out: TextIO | None = None) -> int:
    """Run every suite; print one line each and return the number of failing suites."""
    work = [(name, seed, runs) for name in SUITES]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run, work))
    else:
        results = [_run(w) for w in work]
    failed = 0
    for name, bad in results:
        if out is not None:
            status = "pass" if not bad else f"FAIL ({len(bad)})"
            print(f"{status} {name}", file=out)
            for line in bad[:5]:
                print(f"  {line}", file=out)
        failed += bool(bad)
    return failed
