"""Labeled directed hypergraphs, proofs, homomorphisms and unraveling."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable, Iterable, Iterator, Mapping, Sequence

from .logic import Gci, Theory

if TYPE_CHECKING:
    from .measures import Measure

VertexId = int
EdgeOracle = Callable[[Sequence[Gci], Gci], bool]


@dataclass(frozen=True)
class Edge:
    sources: frozenset[VertexId]
    target: VertexId
    rule: str | None = field(default=None, compare=False)

    @property
    def sort_key(self) -> tuple:
        return (self.target, tuple(sorted(self.sources)))

    def __repr__(self) -> str:
        tag = f", {self.rule}" if self.rule else ""
        return f"Edge({sorted(self.sources)} -> {self.target}{tag})"


class Hypergraph:
    """H = (V, E, ℓ).  Built once, then treated as immutable."""

    def __init__(self, labels: Mapping[VertexId, Gci] | Sequence[Gci], edges: Iterable[Edge] = ()) -> None:
        if not isinstance(labels, Mapping):
            labels = dict(enumerate(labels))
        self.labels: dict[VertexId, Gci] = {v: labels[v] for v in sorted(labels)}
        self.vertices: tuple[VertexId, ...] = tuple(self.labels)
        uniq: dict[Edge, Edge] = {}
        for e in edges:
            if e.target not in self.labels or any(s not in self.labels for s in e.sources):
                raise ValueError(f"edge {e!r} mentions an unknown vertex")
            uniq.setdefault(e, e)  # duplicates are a silent no-op
        self.edges: tuple[Edge, ...] = tuple(sorted(uniq, key=lambda e: e.sort_key))
        self._in: dict[VertexId, list[Edge]] = {v: [] for v in self.vertices}
        self._out: dict[VertexId, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            self._in[e.target].append(e)
            for s in sorted(e.sources):
                self._out[s].append(e)

    def __repr__(self) -> str:
        return f"Hypergraph(|V|={len(self.vertices)}, |E|={len(self.edges)})"

    def __contains__(self, v: object) -> bool:
        return v in self.labels

    def __len__(self) -> int:
        return len(self.vertices)

    def label(self, v: VertexId) -> Gci:
        return self.labels[v]

    def incoming(self, v: VertexId) -> list[Edge]:
        return self._in[v]

    def outgoing(self, v: VertexId) -> list[Edge]:
        return self._out[v]

    def has_edge(self, sources: Iterable[VertexId], target: VertexId) -> bool:
        return Edge(frozenset(sources), target) in self._in.get(target, ())

    def leaves(self) -> list[VertexId]:
        return [v for v in self.vertices if not self._in[v]]

    def sinks(self) -> list[VertexId]:
        return [v for v in self.vertices if not self._out[v]]

    def edge_label(self, e: Edge) -> tuple[frozenset[Gci], Gci]:
        return frozenset(self.labels[s] for s in e.sources), self.labels[e.target]

    def label_size(self) -> int:
        """|H|: the summed label sizes over all hyperedges."""
        return sum(self.labels[e.target].size + sum(self.labels[s].size for s in e.sources)
                   for e in self.edges)

    def max_premises(self) -> int:
        return max((len(e.sources) for e in self.edges), default=0)

    def subgraph(self, vertices: Iterable[VertexId], edges: Iterable[Edge] | None = None) -> Hypergraph:
        keep = set(vertices)
        if edges is None:
            edges = [e for e in self.edges if e.target in keep and e.sources <= keep]
        return Hypergraph({v: self.labels[v] for v in keep}, edges)

    def ancestors(self, v: VertexId) -> set[VertexId]:
        """All vertices with a path to v, including v."""
        seen = {v}
        todo = [v]
        while todo:
            x = todo.pop()
            for e in self._in[x]:
                for s in e.sources:
                    if s not in seen:
                        seen.add(s)
                        todo.append(s)
        return seen

    def vertex_with_label(self, label: Gci) -> VertexId | None:
        for v, lab in self.labels.items():
            if lab == label:
                return v
        return None

    def structurally_equal(self, other: Hypergraph) -> bool:
        return self.labels == other.labels and set(self.edges) == set(other.edges)


# --------------------------------------------------------------------------- structure checks


def is_acyclic(h: Hypergraph) -> bool:
    indeg = {v: 0 for v in h.vertices}
    succ: dict[VertexId, set[VertexId]] = {v: set() for v in h.vertices}
    for e in h.edges:
        for s in e.sources:
            if e.target not in succ[s]:
                succ[s].add(e.target)
                indeg[e.target] += 1
    queue = deque(v for v, d in indeg.items() if d == 0)
    seen = 0
    while queue:
        v = queue.popleft()
        seen += 1
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return seen == len(h.vertices)


def proof_violations(h: Hypergraph, sink: VertexId | None = None) -> list[str]:
    """Structural part of the proof definition (no theory needed)."""
    out: list[str] = []
    sinks = h.sinks()
    if len(sinks) != 1:
        out.append(f"sink count ≠ 1 (found {len(sinks)})")
    elif sink is not None and sinks[0] != sink:
        out.append(f"declared sink {sink} is not the sink {sinks[0]}")
    if not is_acyclic(h):
        out.append("cycle")
    for v in h.vertices:
        if len(h.incoming(v)) > 1:
            out.append(f"multiple incoming edges at vertex {v}")
    return out


class Proof:
    """A hypergraph with one sink, no cycles and at most one incoming edge per vertex."""

    def __init__(self, graph: Hypergraph, sink: VertexId, check: bool = True) -> None:
        if check:
            bad = proof_violations(graph, sink)
            if bad:
                raise ValueError("not a proof: " + "; ".join(bad))
        self.graph = graph
        self.sink = sink

    def __repr__(self) -> str:
        return f"Proof(sink={self.sink}: {self.conclusion}, |V|={len(self.graph)})"

    @property
    def conclusion(self) -> Gci:
        return self.graph.label(self.sink)

    @property
    def vertices(self) -> tuple[VertexId, ...]:
        return self.graph.vertices

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self.graph.edges

    def label(self, v: VertexId) -> Gci:
        return self.graph.label(v)

    def in_edge(self, v: VertexId) -> Edge | None:
        es = self.graph.incoming(v)
        return es[0] if es else None

    def topological(self) -> list[VertexId]:
        """Vertices ordered premises-first."""
        order: list[VertexId] = []
        state: dict[VertexId, int] = {}
        for root in self.graph.vertices:
            if root in state:
                continue
            stack: list[tuple[VertexId, Iterator[VertexId]]] = [(root, iter(self._premises(root)))]
            state[root] = 1
            while stack:
                v, it = stack[-1]
                nxt = next(it, None)
                if nxt is None:
                    stack.pop()
                    state[v] = 2
                    order.append(v)
                elif nxt not in state:
                    state[nxt] = 1
                    stack.append((nxt, iter(self._premises(nxt))))
        return order

    def _premises(self, v: VertexId) -> list[VertexId]:
        e = self.in_edge(v)
        return sorted(e.sources) if e else []


def validate_derivation_structure(h: Hypergraph, theory: Theory | Iterable[Gci], entails: EdgeOracle) -> list[str]:
    axioms = theory if isinstance(theory, Theory) else set(theory)
    out: list[str] = []
    for v in h.leaves():
        if h.label(v) not in axioms:
            out.append(f"ungrounded leaf {v}: {h.label(v)}")
    for e in h.edges:
        premises = sorted((h.label(s) for s in e.sources), key=lambda g: g.key)
        if not entails(premises, h.label(e.target)):
            out.append(f"unsound edge {sorted(e.sources)} -> {e.target}: {h.label(e.target)}")
    return out


def validate_proof(h: Hypergraph | Proof, theory: Theory | Iterable[Gci], goal: Gci, entails: EdgeOracle) -> list[str]:
    g = h.graph if isinstance(h, Proof) else h
    out = validate_derivation_structure(g, theory, entails)
    out += proof_violations(g)
    sinks = g.sinks()
    if len(sinks) == 1 and g.label(sinks[0]) != goal:
        out.append(f"sink is labeled {g.label(sinks[0])}, expected {goal}")
    return out


# --------------------------------------------------------------------------- subproofs


def subproof_at(p: Proof, v: VertexId) -> Proof:
    if v not in p.graph:
        raise KeyError(f"unknown vertex {v}")
    keep = p.graph.ancestors(v)
    edges = [e for e in p.graph.edges if e.target in keep]
    return Proof(Hypergraph({u: p.graph.label(u) for u in keep}, edges), v)


def remove_subproof(p: Proof, v: VertexId) -> Hypergraph:
    """P⁻ᵛ: cut the derivation of v, keep whatever still reaches the sink."""
    if v not in p.graph:
        raise KeyError(f"unknown vertex {v}")
    edges = [e for e in p.graph.edges if e.target != v]
    pruned = Hypergraph(p.graph.labels, edges)
    keep = pruned.ancestors(p.sink)
    return Hypergraph({u: p.graph.label(u) for u in keep}, [e for e in edges if e.target in keep])


# --------------------------------------------------------------------------- homomorphisms


def is_homomorphism(g: Hypergraph, h: Hypergraph, mapping: Mapping[VertexId, VertexId]) -> bool:
    if set(mapping) != set(g.vertices):
        return False
    for v in g.vertices:
        w = mapping[v]
        if w not in h or h.label(w) != g.label(v):
            return False
    target_edges = set(h.edges)
    return all(Edge(frozenset(mapping[s] for s in e.sources), mapping[e.target]) in target_edges
               for e in g.edges)


def find_homomorphism(g: Hypergraph, h: Hypergraph) -> dict[VertexId, VertexId] | None:
    by_label: dict[Gci, list[VertexId]] = {}
    for w in h.vertices:
        by_label.setdefault(h.label(w), []).append(w)
    deg = {w: len(h.incoming(w)) + len(h.outgoing(w)) for w in h.vertices}
    cands: dict[VertexId, list[VertexId]] = {}
    for v in g.vertices:
        opts = by_label.get(g.label(v), [])
        if not opts:
            return None
        cands[v] = sorted(opts, key=lambda w: (-deg[w], w))

    # sinks first, then premises: edges close early
    order: list[VertexId] = []
    seen: set[VertexId] = set()
    for root in sorted(g.vertices, key=lambda v: (len(g.outgoing(v)) > 0, g.label(v).key, v)):
        queue = deque([root])
        while queue:
            x = queue.popleft()
            if x in seen:
                continue
            seen.add(x)
            order.append(x)
            for e in g.incoming(x):
                queue.extend(sorted(e.sources))
    pos = {v: i for i, v in enumerate(order)}
    # edges that become checkable once vertex order[i] is assigned
    check_at: dict[int, list[Edge]] = {}
    for e in g.edges:
        last = max(pos[x] for x in (*e.sources, e.target))
        check_at.setdefault(last, []).append(e)
    target_edges = set(h.edges)
    assign: dict[VertexId, VertexId] = {}

    def rec(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for w in cands[v]:
            assign[v] = w
            if all(Edge(frozenset(assign[s] for s in e.sources), assign[e.target]) in target_edges
                   for e in check_at.get(i, ())):
                if rec(i + 1):
                    return True
        del assign[v]
        return False

    return dict(assign) if rec(0) else None


def image(h: Hypergraph, mapping: Mapping[VertexId, VertexId], target: Hypergraph) -> Hypergraph:
    verts = {mapping[v] for v in h.vertices}
    edges = {Edge(frozenset(mapping[s] for s in e.sources), mapping[e.target]) for e in h.edges}
    rules = {(e.sources, e.target): e.rule for e in target.edges}
    return Hypergraph({w: target.label(w) for w in verts},
                      [Edge(e.sources, e.target, rules.get((e.sources, e.target))) for e in edges])


# --------------------------------------------------------------------------- unraveling


def unravel_with_map(p: Proof | Hypergraph, root: VertexId | None = None) -> tuple[Proof, dict[VertexId, VertexId]]:
    """Tree unraveling at ``root``; also returns the path → start-vertex homomorphism."""
    g = p.graph if isinstance(p, Proof) else p
    if root is None:
        if isinstance(p, Proof):
            root = p.sink
        else:
            sinks = g.sinks()
            if len(sinks) != 1:
                raise ValueError("unraveling needs a root vertex")
            root = sinks[0]
    if not is_acyclic(g):
        raise ValueError("unraveling is defined for acyclic hypergraphs")
    labels: dict[VertexId, Gci] = {}
    back: dict[VertexId, VertexId] = {}
    edges: list[Edge] = []
    counter = 0

    def fresh(orig: VertexId) -> VertexId:
        nonlocal counter
        nid = counter
        counter += 1
        labels[nid] = g.label(orig)
        back[nid] = orig
        return nid

    top = fresh(root)
    stack = [(top, root)]
    while stack:
        nid, orig = stack.pop()
        for e in g.incoming(orig):
            kids = []
            for s in sorted(e.sources):
                k = fresh(s)
                kids.append(k)
                stack.append((k, s))
            edges.append(Edge(frozenset(kids), nid, e.rule))
    return Proof(Hypergraph(labels, edges), top, check=isinstance(p, Proof)), back


def unravel(p: Proof) -> Proof:
    return unravel_with_map(p)[0]


def is_tree(p: Proof) -> bool:
    """Every non-root vertex reaches the root by exactly one path."""
    g = p.graph
    if proof_violations(g, p.sink):
        return False
    paths: dict[VertexId, int] = {}
    for v in reversed(p.topological()):  # sink side first
        paths[v] = 1 if v == p.sink else sum(paths[e.target] for e in g.outgoing(v))
    return all(n == 1 for n in paths.values())


# --------------------------------------------------------------------------- collapsing images


def collapse_image(p: Proof, h: Mapping[VertexId, VertexId], d: Hypergraph, measure: Measure) -> Proof:
    """Turn a homomorphic image h(P) into a proof inside ``d`` no heavier than ``p``."""
    from .measures import evaluate

    if not is_homomorphism(p.graph, d, h):
        raise ValueError("not a homomorphism into the target structure")
    cur, mapping = p, dict(h)
    while True:
        groups: dict[VertexId, list[VertexId]] = {}
        for v in cur.vertices:
            groups.setdefault(mapping[v], []).append(v)
        clash = next((vs for _, vs in sorted(groups.items()) if len(vs) > 1), None)
        if clash is None:
            break
        v, w = clash[0], clash[1]
        anc_w = cur.graph.ancestors(w)
        anc_v = cur.graph.ancestors(v)
        if v in anc_w:
            keep, drop = v, w          # path v → w: P_v ⊂ P_w
        elif w in anc_v:
            keep, drop = w, v
        else:
            mv = evaluate(measure, subproof_at(cur, v))
            mw = evaluate(measure, subproof_at(cur, w))
            keep, drop = (v, w) if mv <= mw else (w, v)
        cur = _replace_subproof(cur, keep, drop)
        mapping = {x: mapping[x] for x in cur.vertices}
    img = image(cur.graph, mapping, d)
    return Proof(img, mapping[cur.sink])


def _replace_subproof(p: Proof, keep: VertexId, drop: VertexId) -> Proof:
    rest = remove_subproof(p, drop)
    sub = subproof_at(p, keep)
    labels = dict(rest.labels)
    labels.update(sub.graph.labels)
    edges = set(rest.edges) | set(sub.graph.edges)
    labels.pop(drop, None)
    rewired = []
    for e in edges:
        if e.target == drop:
            continue
        srcs = frozenset(keep if s == drop else s for s in e.sources)
        rewired.append(Edge(srcs, e.target, e.rule))
    sink = keep if p.sink == drop else p.sink
    g = Hypergraph(labels, rewired)
    # anything cut off from the sink by the merge is dropped
    alive = g.ancestors(sink)
    return Proof(g.subgraph(alive, [e for e in g.edges if e.target in alive]), sink)
