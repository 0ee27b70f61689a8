"""Shared hypothesis strategies and small random builders for the test-suite."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from proofforge.derivers import DerivationStructure
from proofforge.generators import Qbf
from proofforge.hypergraph import Edge, Hypergraph, Proof
from proofforge.logic import TOP, Exists, Forall, Gci, Name, Role, Theory, conj

NAMES = ["A", "B", "C", "D"]
ROLES = ["r", "s"]


# --------------------------------------------------------------------------- concepts and theories


def el_concepts(depth: int = 2) -> st.SearchStrategy:
    leaf = st.one_of(st.sampled_from(NAMES).map(Name), st.just(TOP))
    if depth == 0:
        return leaf
    sub = el_concepts(depth - 1)
    return st.one_of(
        leaf,
        st.tuples(sub, sub).map(lambda p: conj(*p)),
        st.tuples(st.sampled_from(ROLES), sub).map(lambda p: Exists(Role(p[0]), p[1])),
    )


def eli_concepts(depth: int = 2, lhs: bool = False) -> st.SearchStrategy:
    """ELI concepts; with ``lhs`` no value restrictions, which keeps axioms Horn."""
    leaf = st.sampled_from(NAMES).map(Name)
    if depth == 0:
        return leaf
    sub = eli_concepts(depth - 1, lhs)
    role = st.tuples(st.sampled_from(ROLES), st.booleans()).map(lambda p: Role(*p))
    options = [
        leaf,
        st.tuples(sub, sub).map(lambda p: conj(*p)),
        st.tuples(role, sub).map(lambda p: Exists(*p)),
    ]
    if not lhs:
        options.append(st.tuples(role, sub).map(lambda p: Forall(*p)))
    return st.one_of(*options)


@st.composite
def el_theories(draw, max_axioms: int = 5) -> tuple[Theory, Gci]:
    ax = draw(st.lists(st.tuples(el_concepts(), el_concepts()), min_size=1, max_size=max_axioms))
    a, b = draw(st.lists(st.sampled_from(NAMES), min_size=2, max_size=2, unique=True))
    return Theory(tuple(Gci(l, r) for l, r in ax), "EL"), Gci(Name(a), Name(b))


@st.composite
def eli_theories(draw, max_axioms: int = 4) -> tuple[Theory, Gci]:
    ax = draw(st.lists(st.tuples(eli_concepts(1, lhs=True), eli_concepts(1)), min_size=1, max_size=max_axioms))
    a, b = draw(st.lists(st.sampled_from(NAMES), min_size=2, max_size=2, unique=True))
    return Theory(tuple(Gci(l, r) for l, r in ax), "ELI"), Gci(Name(a), Name(b))


# --------------------------------------------------------------------------- derivation structures


@st.composite
def structures(draw, max_vertices: int = 10, max_premises: int = 3) -> DerivationStructure:
    """Grounded structures with distinct labels, extra edges may close cycles."""
    n = draw(st.integers(1, max_vertices))
    labels = [Gci(Name(f"V{i}"), Name(f"W{draw(st.integers(0, 2))}")) for i in range(n)]
    axioms = {0} | {v for v in range(1, n) if draw(st.booleans()) and draw(st.booleans())}
    edges = []
    for v in range(1, n):
        if v in axioms:
            continue
        for _ in range(draw(st.integers(1, 2))):
            k = draw(st.integers(1, min(max_premises, v)))
            prem = draw(st.lists(st.integers(0, v - 1), min_size=k, max_size=k, unique=True))
            edges.append(Edge(frozenset(prem), v, "R"))
    if n > 1:
        for t, prem in draw(st.lists(st.tuples(st.integers(0, n - 1),
                                               st.lists(st.integers(0, n - 1), min_size=1, max_size=max_premises,
                                                        unique=True)), max_size=5)):
            if t not in prem:
                edges.append(Edge(frozenset(prem), t, "X"))
    rest = [v for v in range(n) if v not in axioms]
    goal = labels[draw(st.sampled_from(rest))] if rest else labels[0]
    p = max([1] + [len(e.sources) for e in edges])
    return DerivationStructure(Hypergraph(labels, edges), Theory(tuple(labels[v] for v in sorted(axioms)), "EL"),
                               goal, frozenset(), p, "random")


def min_depths(d: DerivationStructure) -> dict[int, int]:
    """Least-fixpoint depth per vertex (Bellman-Ford style, no priority queue)."""
    inf = len(d.graph) + 1
    best = {v: (0 if d.is_axiom(v) else inf) for v in d.graph.vertices}
    changed = True
    while changed:
        changed = False
        for e in d.graph.edges:
            if d.is_axiom(e.target):
                continue
            w = 1 + max(best[s] for s in e.sources)
            if w < best[e.target]:
                best[e.target] = w
                changed = True
    return best


def random_tree_proof(rng, d: DerivationStructure, slack: int = 2) -> tuple[Proof, dict[int, int]] | None:
    """A tree-shaped proof together with its homomorphism into ``d``.

    Vertices of ``d`` may repeat along a path when ``d`` has cycles, so the
    image need not be a proof.
    """
    g = d.graph
    goal = g.vertex_with_label(d.goal)
    need = min_depths(d)
    if need[goal] > len(g):
        return None
    labels: dict[int, Gci] = {}
    back: dict[int, int] = {}
    edges: list[Edge] = []

    def grow(orig: int, budget: int) -> int:
        nid = len(labels)
        labels[nid] = g.label(orig)
        back[nid] = orig
        if d.is_axiom(orig) and (budget == 0 or rng.random() < 0.6):
            return nid
        fits = [e for e in g.incoming(orig) if all(need[s] <= budget - 1 for s in e.sources)]
        if not fits:
            return nid  # only reachable for axioms
        e = rng.choice(fits)
        kids = [grow(s, budget - 1) for s in sorted(e.sources)]
        edges.append(Edge(frozenset(kids), nid, e.rule))
        return nid

    root = grow(goal, need[goal] + rng.randint(0, slack))
    return Proof(Hypergraph(labels, edges), root), back


# --------------------------------------------------------------------------- QBFs and weights


@st.composite
def _matrices(draw, vs: list[str], nodes: int):
    if nodes < 3 or draw(st.booleans()):
        return ("lit", draw(st.sampled_from(vs)), draw(st.booleans()))
    left = draw(st.integers(1, nodes - 2))
    op = draw(st.sampled_from(["and", "or"]))
    return (op, draw(_matrices(vs, left)), draw(_matrices(vs, nodes - 1 - left)))


@st.composite
def qbfs(draw, max_vars: int = 3) -> Qbf:
    k = draw(st.integers(1, max_vars))
    vs = [f"x{i}" for i in range(1, k + 1)]
    prefix = tuple((draw(st.sampled_from(["exists", "forall"])), v) for v in vs)
    return Qbf(prefix, draw(_matrices(vs, 7)))


weights = st.fractions(min_value=0, max_value=50, max_denominator=12).map(Fraction)
