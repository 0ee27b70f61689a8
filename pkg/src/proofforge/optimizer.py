"""Proof search: the Dijkstra-like optimizer, two budget deciders and a brute-force oracle."""

from __future__ import annotations

import heapq
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Callable, Iterator, Union

from .derivers import DerivationStructure, DeriverView, structure_view
from .hypergraph import Edge, Hypergraph, Proof, VertexId, is_acyclic
from .logic import Gci
from .measures import Measure, evaluate, size


class NoProof(LookupError):
    code = "no-proof"


class InvariantViolation(AssertionError):
    code = "invariant"


class EnumerationCap(RuntimeError):
    code = "budget"


@dataclass
class SearchResult:
    weight: Fraction
    proof: Proof
    stats: dict = field(default_factory=dict)


@dataclass
class Decision:
    holds: bool
    witness: Proof | None = None
    stats: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.holds


def _goal_vertex(d: DerivationStructure, goal: Gci | None) -> VertexId:
    g = d.goal if goal is None else goal
    v = d.graph.vertex_with_label(g)
    if v is None:
        raise NoProof(f"no vertex labelled {g} in the derivation structure")
    return v


def _proof_from_edges(d: Hypergraph, sink: VertexId, choice: dict[VertexId, Edge | None], check: bool = True) -> Proof:
    verts: set[VertexId] = set()
    stack = [sink]
    while stack:
        v = stack.pop()
        if v in verts:
            continue
        verts.add(v)
        e = choice[v]
        if e is not None:
            stack.extend(e.sources)
    edges = [choice[v] for v in verts if choice[v] is not None]
    return Proof(d.subgraph(verts, edges), sink, check=check)


# --------------------------------------------------------------------------- optimal search


def dijkstra_optimal(d: DerivationStructure, m: Measure, goal: Gci | None = None, debug: bool = False) -> SearchResult:
    """Optimal proof for a monotone recursive measure.

    ``P(v)`` is kept as its vertex set plus the incoming edge chosen for ``v``;
    popped vertices are final, so the union of premise proofs is consistent.
    With ``debug`` the pop order, single pops, the weight of every assigned
    proof and the incremental acyclicity test are all re-checked.
    """
    if not m.monotone:
        raise ValueError(f"{m.name} is not declared monotone")
    g = d.graph
    sink = _goal_vertex(d, goal)
    weight: dict[VertexId, Fraction] = {}
    verts: dict[VertexId, frozenset] = {}
    choice: dict[VertexId, Edge | None] = {}
    k = {e: 0 for e in g.edges}
    heap: list[tuple[Fraction, VertexId]] = []
    in_q: set[VertexId] = set()
    stats = {"edges_relaxed": 0, "vertices_popped": 0, "peak_memory_items": 0}
    pops: list[tuple[VertexId, Fraction]] = []

    def assign(v: VertexId, w: Fraction, vs: frozenset, e: Edge | None) -> None:
        weight[v], verts[v], choice[v] = w, vs, e
        in_q.add(v)
        heapq.heappush(heap, (w, v))

    for v in g.vertices:
        if d.is_axiom(v):
            assign(v, m.leaf(g.label(v)), frozenset((v,)), None)
        else:
            taut = [e for e in g.incoming(v) if not e.sources]
            if taut:
                assign(v, m.edge(g.edge_label(taut[0]), []), frozenset((v,)), taut[0])

    popped: set[VertexId] = set()
    while heap:
        stats["peak_memory_items"] = max(stats["peak_memory_items"], len(heap) + len(weight))
        w, v = heapq.heappop(heap)
        if v not in in_q or weight[v] != w:
            continue  # stale entry
        in_q.discard(v)
        stats["vertices_popped"] += 1
        if debug:
            if pops and w < pops[-1][1]:
                raise InvariantViolation(f"pop weight {w} after {pops[-1][1]}")
            if v in popped:
                raise InvariantViolation(f"vertex {v} popped twice")
        pops.append((v, w))
        popped.add(v)
        for e in g.outgoing(v):
            k[e] += 1
            if k[e] != len(e.sources):
                continue
            stats["edges_relaxed"] += 1
            t = e.target
            union = frozenset().union(*(verts[s] for s in e.sources))
            acyclic = t not in union
            if debug:
                cand = dict(choice)
                cand[t] = e
                h = Hypergraph({x: g.label(x) for x in union | {t}},
                               [cand[x] for x in union | {t} if cand.get(x) is not None])
                if is_acyclic(h) != acyclic:
                    raise InvariantViolation(f"incremental acyclicity test disagrees at edge {e}")
            if not acyclic:
                continue
            cw = m.edge(g.edge_label(e), [weight[s] for s in e.sources])
            if t not in weight or weight[t] > cw:
                assign(t, cw, union | {t}, e)
                if debug:
                    p = _proof_from_edges(g, t, choice)
                    if evaluate(m, p) != cw:
                        raise InvariantViolation(f"stored weight {cw} differs from evaluated {evaluate(m, p)}")
    if sink not in weight:
        raise NoProof(f"{g.label(sink)} has no proof in the derivation structure")
    proof = _proof_from_edges(g, sink, choice)
    stats["pop_trace"] = pops
    return SearchResult(weight[sink], proof, stats)


# --------------------------------------------------------------------------- brute force


class ProofList(list):
    truncated: bool = False


def _assignments(g: Hypergraph, sink: VertexId, is_axiom: Callable[[VertexId], bool],
                 cap: int) -> Iterator[dict[VertexId, Edge | None]]:
    """Every choice of one incoming edge (or leaf, for axioms) per needed vertex."""
    count = 0

    def reaches(src: VertexId, dst: VertexId, choice) -> bool:
        # does src have a path to dst through chosen edges (backwards from dst)?
        stack, seen = [dst], set()
        while stack:
            x = stack.pop()
            if x == src:
                return True
            if x in seen:
                continue
            seen.add(x)
            e = choice.get(x)
            if e is not None:
                stack.extend(e.sources)
        return False

    def rec(choice: dict, pending: list[VertexId]) -> Iterator[dict]:
        nonlocal count
        if not pending:
            count += 1
            if count > cap:
                raise EnumerationCap(f"more than {cap} proofs")
            yield dict(choice)
            return
        v, rest = pending[0], pending[1:]
        options: list[Edge | None] = [None] if is_axiom(v) else []
        options += g.incoming(v)
        for e in options:
            choice[v] = e
            ok = True
            new = []
            if e is not None:
                for s in sorted(e.sources):
                    if s in choice:
                        if reaches(v, s, choice):
                            ok = False
                            break
                    elif s not in rest and s not in new:
                        new.append(s)
            if ok:
                yield from rec(choice, sorted(set(rest) | set(new)))
            del choice[v]

    yield from rec({}, [sink])


def _is_proof_choice(choice: dict[VertexId, Edge | None]) -> bool:
    h_edges = {v: e for v, e in choice.items()}
    indeg = {v: 0 for v in choice}
    out: dict[VertexId, list[VertexId]] = {v: [] for v in choice}
    for v, e in h_edges.items():
        if e is not None:
            for s in e.sources:
                out[s].append(v)
                indeg[v] += 1
    ready = [v for v, n in indeg.items() if n == 0]
    seen = 0
    while ready:
        v = ready.pop()
        seen += 1
        for t in out[v]:
            indeg[t] -= 1
            if indeg[t] == 0:
                ready.append(t)
    return seen == len(choice)


def _choice_weight(g: Hypergraph, sink: VertexId, choice: dict, m: Measure) -> Fraction:
    memo: dict[VertexId, Fraction] = {}

    def w(v: VertexId) -> Fraction:
        if v not in memo:
            e = choice[v]
            memo[v] = m.leaf(g.label(v)) if e is None else m.edge(g.edge_label(e), [w(s) for s in e.sources])
        return memo[v]

    return w(sink)


def brute_force_optimal(d: DerivationStructure, m: Measure | Callable[[Proof], Fraction] | str,
                        goal: Gci | None = None, cap: int = 10**6) -> SearchResult:
    """Minimum of ``m`` over every proof in ``d`` with the goal as sink.

    ``m`` may be a recursive measure, ``"size"`` or any callable on proofs.
    Ties go to the lexicographically smallest vertex-id sequence.
    """
    g = d.graph
    sink = _goal_vertex(d, goal)
    if m == "size":
        m = size
    best: tuple | None = None
    n = 0
    for choice in _assignments(g, sink, d.is_axiom, cap):
        if not _is_proof_choice(choice):
            continue
        n += 1
        if isinstance(m, Measure):
            w = _choice_weight(g, sink, choice, m)
        elif m is size:
            w = Fraction(len(choice))
        else:
            w = Fraction(m(_proof_from_edges(g, sink, choice)))
        key = (w, tuple(sorted(choice)), tuple(sorted(e.sort_key for e in choice.values() if e is not None)))
        if best is None or key < best[0]:
            best = (key, choice)
    if best is None:
        raise NoProof(f"{g.label(sink)} has no proof in the derivation structure")
    return SearchResult(best[0][0], _proof_from_edges(g, sink, best[1]), {"proofs_enumerated": n})


def enumerate_proofs(d: DerivationStructure, goal: Gci | None = None, cap: int = 10**4) -> ProofList:
    out = ProofList()
    g = d.graph
    v = g.vertex_with_label(d.goal if goal is None else goal)
    if v is None:
        return out
    try:
        for choice in _assignments(g, v, d.is_axiom, 10**9):
            if not _is_proof_choice(choice):
                continue
            if len(out) >= cap:
                out.truncated = True
                break
            out.append(_proof_from_edges(g, v, choice))
    except EnumerationCap:
        out.truncated = True
    return out


# --------------------------------------------------------------------------- deciders


def _as_view(x: DeriverView | DerivationStructure) -> DeriverView:
    return structure_view(x) if isinstance(x, DerivationStructure) else x


def _witness(view: DeriverView, sink: VertexId, choice: dict[VertexId, frozenset | None]) -> Proof:
    verts: set[VertexId] = set()
    stack = [sink]
    while stack:
        v = stack.pop()
        if v not in verts:
            verts.add(v)
            stack.extend(choice[v] or ())
    edges = [Edge(choice[v], v) for v in verts if choice[v] is not None]
    rules = {}
    for v in verts:
        if choice[v] is not None:
            rules[v] = next(r for ps, r in view.expand(v) if ps == choice[v])
    edges = [Edge(e.sources, e.target, rules[e.target]) for e in edges]
    return Proof(Hypergraph({v: view.label(v) for v in verts}, edges), sink)


def _deep_recursion() -> None:
    if sys.getrecursionlimit() < 20000:
        sys.setrecursionlimit(20000)


def decide_depth_leq(view: DeriverView | DerivationStructure, goal: Gci | None, q: Fraction | int) -> Decision:
    """Is there an admissible proof of depth at most ``q``?

    Depth-first over ``expand`` with the current branch blocked. A failure is
    memoised (monotonically in the budget) only when no branch block was hit
    below it, so the memo never hides a proof.
    """
    _deep_recursion()
    view = _as_view(view)
    goal = view.goal if goal is None else goal
    stats = {"calls": 0}
    sink = view.id_of(goal)
    q = Fraction(q)
    if sink is None or q < 0:
        return Decision(False, None, stats)
    budget = floor(q)
    succ: dict[VertexId, tuple[int, frozenset | None]] = {}
    fail: dict[VertexId, int] = {}
    branch: set[VertexId] = set()

    def solve(v: VertexId, b: int) -> tuple[bool, bool]:
        stats["calls"] += 1
        hit = succ.get(v)
        if hit is not None and hit[0] <= b:
            return True, False
        if view.is_axiom(v):
            succ[v] = (0, None)
            return True, False
        if b <= 0 or fail.get(v, -1) >= b:
            return False, False
        if v in branch:
            return False, True
        branch.add(v)
        cut = False
        try:
            for prem, _rule in view.expand(v):
                ok = True
                for s in sorted(prem):
                    r, c = solve(s, b - 1)
                    cut = cut or c
                    if not r:
                        ok = False
                        break
                if ok:
                    dep = 1 + max((succ[s][0] for s in prem), default=0)
                    if v not in succ or succ[v][0] > dep:
                        succ[v] = (dep, prem)
                    return True, False
        finally:
            branch.discard(v)
        if not cut:
            fail[v] = max(fail.get(v, -1), b)
        return False, cut

    ok, _ = solve(sink, budget)
    if not ok:
        return Decision(False, None, stats)
    choice = {v: s[1] for v, s in succ.items()}
    stats["depth"] = succ[sink][0]
    return Decision(True, _witness(view, sink, choice), stats)


class _TreeSizeSolver:
    """Exact minimal tree size per vertex, explored under a budget."""

    def __init__(self, view: DeriverView) -> None:
        self.view = view
        self.exact: dict[VertexId, int] = {}
        self.best: dict[VertexId, frozenset | None] = {}
        self.lower: dict[VertexId, int] = {}  # tree size is known to exceed this
        self.calls = 0

    def lb(self, v: VertexId) -> int:
        if v in self.exact:
            return self.exact[v]
        return self.lower.get(v, 0) + 1

    def solve(self, v: VertexId, b: int) -> int | None:
        self.calls += 1
        if v in self.exact:
            return self.exact[v] if self.exact[v] <= b else None
        if b <= self.lower.get(v, 0):
            return None
        if self.view.is_axiom(v):
            self.exact[v], self.best[v] = 1, None
            return 1
        found: int | None = None
        arg: frozenset | None = None
        for prem, _rule in self.view.expand(v):
            limit = (b if found is None else found - 1) - 1  # room left for the premises
            ps = sorted(prem)
            if sum(self.lb(s) for s in ps) > limit:
                continue
            total = 0
            ok = True
            for i, s in enumerate(ps):
                # lower bounds only grow during the nested calls, so reread them
                rest = sum(self.lb(x) for x in ps[i + 1:])
                r = self.solve(s, limit - total - rest)
                if r is None:
                    ok = False
                    break
                total += r
            if ok and total > limit:
                raise InvariantViolation(f"premises of {v} cost {total}, limit {limit}")
            if ok:
                found, arg = 1 + total, prem
        if found is None:
            self.lower[v] = max(self.lower.get(v, 0), b)
            return None
        self.exact[v], self.best[v] = found, arg
        return found


def decide_treesize_leq(view: DeriverView | DerivationStructure, goal: Gci | None, q: Fraction | int,
                        debug_invariants: bool = False) -> Decision:
    """Is there an admissible proof of tree size at most ``q``?

    Only integer splits are explored since tree sizes are integers. With
    ``debug_invariants`` the tuple-set run is replayed and its tuple tree
    checked after every step.
    """
    _deep_recursion()
    view = _as_view(view)
    goal = view.goal if goal is None else goal
    sink = view.id_of(goal)
    q = Fraction(q)
    stats: dict = {}
    if sink is None or q < 1:
        return Decision(False, None, stats)
    budget = floor(q)
    solver = _TreeSizeSolver(view)
    r = solver.solve(sink, budget)
    stats["calls"] = solver.calls
    if debug_invariants:
        stats["replay"] = replay_tuple_set(view, sink, budget, solver, q)
    if r is None:
        return Decision(False, None, stats)
    stats["treesize"] = r
    return Decision(True, _witness(view, sink, solver.best), stats)


# --------------------------------------------------------------------------- tuple-set bookkeeping


@dataclass
class _Tup:
    vertex: VertexId
    budget: int
    seq: int
    group: int


@dataclass
class TupleNode:
    tup: _Tup | None  # None at the root
    children: list[TupleNode] = field(default_factory=list)


def build_tuple_tree(levels: list[list[_Tup]]) -> TupleNode:
    """Arrange pending tuples (grouped by creating expansion, shallow to deep) into a tree."""
    carry: list[TupleNode] = []
    for level in reversed(levels):
        nodes = [TupleNode(t) for t in sorted(level, key=lambda t: (t.budget, t.seq))]
        if len(carry) >= 2 and nodes:
            nodes[0].children = carry
            carry = nodes
        else:
            carry = nodes + carry
    return TupleNode(None, carry)


def tuple_tree_violations(root: TupleNode, pending: list[_Tup], p: int) -> list[str]:
    out: list[str] = []
    if root.tup is not None:
        out.append("S1: root carries a tuple")
    seen: list[int] = []

    def walk(n: TupleNode) -> None:
        for c in n.children:
            if c.tup is None:
                out.append("S1: inner node without a tuple")
                continue
            seen.append(c.tup.seq)
            walk(c)
        if n.tup is not None and len(n.children) == 1:
            out.append(f"S3: tuple {n.tup.seq} has exactly one child")
        if len(n.children) > p:
            out.append(f"S4: {len(n.children)} children exceed p={p}")
        if n.tup is not None:
            inner = [c for c in n.children if c.children]
            if len(inner) > 1:
                out.append(f"S5: tuple {n.tup.seq} has {len(inner)} non-leaf children")
            for c in inner:
                if 2 * c.tup.budget >= n.tup.budget:
                    out.append(f"S5: child budget {c.tup.budget} not below half of {n.tup.budget}")
            if n.children and sum(c.tup.budget for c in n.children) >= n.tup.budget:
                out.append(f"S6: children of tuple {n.tup.seq} sum to at least {n.tup.budget}")

    walk(root)
    if sorted(seen) != sorted(t.seq for t in pending) or len(set(seen)) != len(seen):
        out.append("S2: tree nodes and pending tuples differ")
    return out


def size_bound_holds(n: int, p: int, q: Fraction) -> bool:
    """|S| ≤ p·log₂q, decided exactly as 2^|S|·b^p ≤ a^p for q = a/b."""
    if n <= 1:
        return True
    q = Fraction(q)
    return 2**n * q.denominator**p <= q.numerator**p


def replay_tuple_set(view: DeriverView, sink: VertexId, budget: int, solver: _TreeSizeSolver,
                     q: Fraction) -> dict:
    """Run the tuple-set procedure, guided by the solver, checking the tuple tree each step.

    When a proof within budget exists the replay follows it with exact
    premise budgets and empties the set. Otherwise it takes the first
    feasible guess at each step until no guess fits.
    """
    p = max(1, view.p)
    seq = 0
    groups: list[list[_Tup]] = [[_Tup(sink, budget, 0, 0)]]
    info = {"steps": 0, "max_size": 1, "emptied": False}

    def check() -> None:
        pending = [t for grp in groups for t in grp]
        n = len(pending)
        info["max_size"] = max(info["max_size"], n)
        if not size_bound_holds(n, p, q):
            raise InvariantViolation(f"|S|={n} exceeds p·log2 q with p={p}, q={q}")
        for t in pending:
            if t.budget > budget:
                raise InvariantViolation(f"tuple budget {t.budget} exceeds {budget}")
        bad = tuple_tree_violations(build_tuple_tree(groups), pending, p)
        if bad:
            raise InvariantViolation("; ".join(bad))

    check()
    while True:
        while groups and not groups[-1]:
            groups.pop()
        if not groups:
            info["emptied"] = True
            return info
        pending = [t for grp in groups for t in grp]
        t = min(pending, key=lambda x: (x.budget, x.seq))
        if t not in groups[-1]:
            raise InvariantViolation("selected tuple is not in the deepest group")
        v, qq = t.vertex, t.budget
        plan: list[tuple[VertexId, int]] | None = None
        if view.is_axiom(v) and qq >= 1:
            plan = []
        elif v in solver.exact and solver.exact[v] <= qq:
            plan = [(s, solver.exact[s]) for s in sorted(solver.best[v] or ())]
        else:
            for prem, _rule in view.expand(v):
                lbs = [(s, solver.lb(s)) for s in sorted(prem)]
                if sum(b for _, b in lbs) + 1 <= qq:
                    plan = lbs
                    break
        if plan is None:
            return info
        if sum(b for _, b in plan) + 1 > qq:
            raise InvariantViolation("guessed split exceeds the tuple budget")
        groups[-1].remove(t)
        info["steps"] += 1
        if plan:
            new = []
            for s, b in plan:
                seq += 1
                new.append(_Tup(s, b, seq, len(groups)))
            groups.append(new)
        check()
