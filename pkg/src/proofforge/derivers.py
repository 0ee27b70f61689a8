"""Derivers: ELK-style saturation for EL and the CR1-CR4 calculus for ELI.

Both come in two flavours. ``*_materialize`` saturates forward and records
every rule instance as a hyperedge. ``lazy_view`` saturates only the sentence
set and answers edge questions by matching rules backwards on demand. The two
are written independently so that each can check the other.
"""

from __future__ import annotations

import os
import threading
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable

from .hypergraph import Edge, Hypergraph, VertexId
from .logic import (
    TOP,
    And,
    Concept,
    DialectError,
    Exists,
    Forall,
    Gci,
    LogicError,
    Name,
    Role,
    Theory,
    UnsupportedGoal,
    _uses_eli,
    concept_key,
    conjunct_names,
    is_eli_normal,
    names_conj,
    subconcepts,
)

DEFAULT_MAX_VERTICES = 10**6
DEFAULT_MAX_PREMISE_SETS = 10**4


class BudgetExceeded(RuntimeError):
    code = "budget"


def default_max_vertices() -> int:
    env = os.environ.get("PROOFFORGE_MAX_VERTICES")
    return int(env) if env else DEFAULT_MAX_VERTICES


@dataclass(frozen=True)
class DerivationStructure:
    graph: Hypergraph
    theory: Theory
    goal: Gci
    universe: frozenset = field(default_factory=frozenset)
    p: int = 2
    kind: str = "custom"

    @property
    def goal_vertex(self) -> VertexId | None:
        return self.graph.vertex_with_label(self.goal)

    def is_axiom(self, v: VertexId) -> bool:
        return self.graph.label(v) in self.theory

    def assumption_violations(self) -> list[str]:
        out = []
        labels = [self.graph.label(v) for v in self.graph.vertices]
        if len(set(labels)) != len(labels):
            out.append("two vertices share a label")
        if self.graph.max_premises() > self.p:
            out.append(f"an edge has more than p={self.p} premises")
        return out


def _ordered_ids(axioms: Iterable, sentences: Iterable, key) -> dict:
    # axioms first in theory order, then the rest by ``key``; independent of
    # set iteration order, hence of hash seeding
    ids: dict = {}
    rest = set(sentences)
    for ax in axioms:
        if ax not in ids:
            ids[ax] = len(ids)
            rest.discard(ax)
    for s in sorted(rest, key=key):
        ids[s] = len(ids)
    return ids


def _build(theory: Theory, goal: Gci, universe, p: int, kind: str,
           edges: set[tuple[frozenset, Hashable, str]], sentences: Iterable, codec) -> DerivationStructure:
    ids = _ordered_ids(codec.axioms(theory), sentences, codec.key)
    hedges = [Edge(frozenset(ids[x] for x in prem), ids[c], rule) for prem, c, rule in edges]
    labels = {i: codec.to_gci(s) for s, i in ids.items()}
    return DerivationStructure(Hypergraph(labels, hedges), theory, goal, frozenset(universe), p, kind)


# =========================================================================== EL


class _ElkSaturator:
    """Forward saturation of the ELK rules over ``subconcepts(T, goal)``."""

    def __init__(self, theory: Theory, goal: Gci, record: bool, max_vertices: int) -> None:
        if theory.dialect != "EL":
            raise DialectError("the ELK deriver needs an EL theory")
        if _uses_eli(goal.lhs) or _uses_eli(goal.rhs):
            raise DialectError("the ELK deriver needs an EL goal")
        self.theory = theory
        self.goal = goal
        self.record = record
        self.max_vertices = max_vertices
        self.universe = subconcepts(theory, goal)
        self.order = sorted(self.universe, key=concept_key)
        self.parents: dict[Concept, list[And]] = defaultdict(list)
        for c in self.order:
            if isinstance(c, And):
                for x in c.conjuncts:
                    self.parents[x].append(c)
        self.ax_by_lhs: dict[Concept, list[Concept]] = defaultdict(list)
        for ax in theory.axioms:
            self.ax_by_lhs[ax.lhs].append(ax.rhs)
        self.p = max([2] + [len(c.conjuncts) for c in self.order if isinstance(c, And)])

        self.seen: set[tuple[Concept, Concept]] = set()
        self.sup: dict[Concept, set[Concept]] = defaultdict(set)
        self.ex_by_filler: dict[Concept, list[tuple[Concept, Role]]] = defaultdict(list)
        self.edges: set[tuple[frozenset, tuple, str]] = set()
        self.queue: deque = deque()

    def add(self, s: tuple[Concept, Concept], premises: tuple = (), rule: str = "") -> None:
        if s in premises:
            return
        if self.record and rule:
            self.edges.add((frozenset(premises), s, rule))
        if s not in self.seen:
            self.seen.add(s)
            if len(self.seen) > self.max_vertices:
                raise BudgetExceeded(f"derivation structure exceeds {self.max_vertices} vertices")
            self.queue.append(s)

    def run(self) -> _ElkSaturator:
        for ax in self.theory.axioms:
            self.add((ax.lhs, ax.rhs))
        for c in self.order:
            self.add((c, c), (), "R0")
            if c != TOP:
                self.add((c, TOP), (), "Rtop")
        while self.queue:
            self.process(self.queue.popleft())
        return self

    def process(self, s: tuple[Concept, Concept]) -> None:
        c, d = s
        self.sup[c].add(d)
        if isinstance(d, Exists):
            self.ex_by_filler[d.filler].append((c, d.role))
        for e in self.ax_by_lhs.get(d, ()):
            self.add((c, e), (s, (d, e)), "Rsub")
        if isinstance(d, And):
            for x in d.conjuncts:
                self.add((c, x), (s,), "Rand-")
        for y in self.parents.get(d, ()):
            if all(x in self.sup[c] for x in y.conjuncts):
                self.add((c, y), tuple((c, x) for x in y.conjuncts), "Rand+")
        if isinstance(d, Exists):
            for e in list(self.sup[d.filler]):
                t = Exists(d.role, e)
                if t in self.universe:
                    self.add((c, t), (s, (d.filler, e)), "Rex")
        for x, r in list(self.ex_by_filler.get(c, ())):
            t = Exists(r, d)
            if t in self.universe:
                self.add((x, t), ((x, Exists(r, c)), s), "Rex")


def _el_gci(s: tuple[Concept, Concept]) -> Gci:
    return Gci(s[0], s[1])


class _ElCodec:
    """Internal pairs ``(C, D)`` against printed sentences."""

    @staticmethod
    def axioms(theory: Theory) -> list:
        return [(a.lhs, a.rhs) for a in theory.axioms]

    @staticmethod
    def key(s: tuple) -> tuple:
        return (concept_key(s[0]), concept_key(s[1]))

    to_gci = staticmethod(_el_gci)

    @staticmethod
    def from_gci(g: Gci) -> tuple:
        return (g.lhs, g.rhs)


def elk_materialize(theory: Theory, goal: Gci, max_vertices: int | None = None) -> DerivationStructure:
    sat = _ElkSaturator(theory, goal, True, max_vertices or default_max_vertices()).run()
    return _build(theory, goal, sat.universe, sat.p, "elk", sat.edges, sat.seen, _ElCodec)


def elk_derivable(theory: Theory, goal: Gci) -> bool:
    sat = _ElkSaturator(theory, goal, False, default_max_vertices()).run()
    return (goal.lhs, goal.rhs) in sat.seen


# =========================================================================== ELI

# internal sentence shapes, all with frozenset name-set left-hand sides:
#   ("n", K, A)      K ⊑ A
#   ("e", K, r, M)   K ⊑ ∃r.M
#   ("a", K, r, A)   K ⊑ ∀r.A


def eli_tuple(s: Gci) -> tuple:
    k = conjunct_names(s.lhs)
    if k is None or not is_eli_normal(s):
        raise LogicError(f"not in ELI normal form: {s.render()}")
    r = s.rhs
    if isinstance(r, Name):
        return ("n", k, r.name)
    if isinstance(r, Exists):
        return ("e", k, r.role, conjunct_names(r.filler))
    return ("a", k, r.role, r.filler.name)


def eli_gci(t: tuple) -> Gci:
    lhs = names_conj(t[1])
    if t[0] == "n":
        return Gci(lhs, Name(t[2]))
    if t[0] == "e":
        return Gci(lhs, Exists(t[2], names_conj(t[3])))
    return Gci(lhs, Forall(t[2], Name(t[3])))


def _eli_rhs(t: tuple) -> tuple:
    return (t[0],) + t[2:]


class _EliCodec:
    """Internal ELI tuples against printed sentences."""

    @staticmethod
    def axioms(theory: Theory) -> list:
        return [eli_tuple(a) for a in theory.axioms]

    @staticmethod
    def key(t: tuple) -> tuple:
        tail = (t[2].render(), tuple(sorted(t[3]))) if t[0] == "e" else (
            (t[2].render(), (t[3],)) if t[0] == "a" else ("", (t[2],)))
        return (tuple(sorted(t[1])), t[0]) + tail

    to_gci = staticmethod(eli_gci)

    @staticmethod
    def from_gci(g: Gci):
        try:
            return eli_tuple(g)
        except LogicError:
            return None


class _EliSaturator:
    """Forward saturation of CR1-CR4; optionally records each rule instance."""

    def __init__(self, theory: Theory, goal: Gci, record: bool, max_vertices: int) -> None:
        if not (isinstance(goal.lhs, Name) and isinstance(goal.rhs, Name)):
            raise UnsupportedGoal("the ELI deriver handles goals A ⊑ B over concept names")
        self.theory = theory
        self.goal = goal
        self.record = record
        self.max_vertices = max_vertices
        self.axioms = [eli_tuple(a) for a in theory.axioms]
        self.p = max([len(t[1]) for t in self.axioms] + [1]) + 1

        self.seen: set[tuple] = set()
        self.appears: set[frozenset] = set()
        self.appear_order: list[frozenset] = []
        self.names_of: dict[frozenset, set[str]] = defaultdict(set)  # S(M)
        self.types_with: dict[str, set[frozenset]] = defaultdict(set)  # A -> appeared M with A ∈ S(M)
        self.rhs_of: dict[frozenset, list[tuple]] = defaultdict(list)  # K -> rhs of processed K ⊑ C
        self.lhs_with: dict[str, set[frozenset]] = defaultdict(set)  # A -> processed lhs K with A ∈ K
        self.ex_by_lhs: dict[frozenset, list[tuple[Role, frozenset]]] = defaultdict(list)
        self.ex_by_filler: dict[frozenset, list[tuple[frozenset, Role]]] = defaultdict(list)
        self.all_by_lhs: dict[frozenset, dict[Role, set[str]]] = defaultdict(lambda: defaultdict(set))
        self.edges: set[tuple[frozenset, tuple, str]] = set()
        self.queue: deque = deque()

    def add(self, s: tuple, premises: tuple = (), rule: str = "") -> None:
        if s in premises:
            return
        if self.record and rule:
            self.edges.add((frozenset(premises), s, rule))
        if s not in self.seen:
            self.seen.add(s)
            if len(self.seen) > self.max_vertices:
                raise BudgetExceeded(f"derivation structure exceeds {self.max_vertices} vertices")
            self.queue.append(("s", s))

    def appear(self, k: frozenset) -> None:
        if k not in self.appears:
            self.appears.add(k)
            self.appear_order.append(k)
            for a in self.names_of.get(k, ()):
                self.types_with[a].add(k)
            self.queue.append(("k", k))

    def run(self) -> _EliSaturator:
        for t in self.axioms:
            self.add(t)
        for t in self.axioms:
            self.appear(t[1])
            if t[0] == "e":
                self.appear(t[3])
        self.appear(frozenset((self.goal.lhs.name,)))
        while self.queue:
            kind, x = self.queue.popleft()
            if kind == "k":
                self.process_appear(x)
            else:
                self.process(x)
        return self

    def process_appear(self, m: frozenset) -> None:
        for a in sorted(m):
            self.add(("n", m, a), (), "CR1")
        # CR2 with K = ⊤ needs only ⊤ ⊑ C
        for rhs in list(self.rhs_of.get(frozenset(), ())):
            self.add((rhs[0], m) + rhs[1:], ((rhs[0], frozenset()) + rhs[1:],), "CR2")

    def cr2(self, m: frozenset, k: frozenset, rhs: tuple) -> None:
        s = (rhs[0], m) + rhs[1:]
        if not self.record:
            # premises are already seen, so a self-loop would be a no-op anyway
            if s not in self.seen:
                self.add(s)
            return
        prem = tuple(("n", m, a) for a in sorted(k)) + ((rhs[0], k) + rhs[1:],)
        self.add(s, prem, "CR2")

    def process(self, s: tuple) -> None:
        tag, k = s[0], s[1]
        rhs = _eli_rhs(s)
        self.rhs_of[k].append(rhs)
        for a in k:
            self.lhs_with[a].add(k)
        # s as the K ⊑ C premise of CR2
        if k:
            first, *more = sorted(k, key=lambda a: len(self.types_with[a]))
            cands = self.types_with[first].intersection(*(self.types_with[a] for a in more))
        else:
            cands = self.appears
        for m in list(cands):
            self.cr2(m, k, rhs)
        if tag == "n":
            a = s[2]
            self.names_of[k].add(a)
            if k in self.appears:
                self.types_with[a].add(k)
                # s as one of the M ⊑ A premises of CR2 (here M = k)
                sm = self.names_of[k]
                for kk in list(self.lhs_with[a]):
                    if kk <= sm:
                        for r2 in list(self.rhs_of[kk]):
                            self.cr2(k, kk, r2)
        elif tag == "e":
            r, filler = s[2], s[3]
            self.ex_by_lhs[k].append((r, filler))
            self.ex_by_filler[filler].append((k, r))
            self.appear(filler)
            for a in sorted(self.all_by_lhs[filler][r.inverse()]):
                self.add(("n", k, a), (s, ("a", filler, r.inverse(), a)), "CR3")
            for a in sorted(self.all_by_lhs[k][r]):
                if a not in filler:
                    self.add(("e", k, r, filler | {a}), (s, ("a", k, r, a)), "CR4")
        else:
            r, a = s[2], s[3]
            self.all_by_lhs[k][r].add(a)
            for m, r2 in list(self.ex_by_filler.get(k, ())):
                if r2.inverse() == r:
                    self.add(("n", m, a), (("e", m, r2, k), s), "CR3")
            for r2, mm in list(self.ex_by_lhs.get(k, ())):
                if r2 == r and a not in mm:
                    self.add(("e", k, r, mm | {a}), (("e", k, r, mm), s), "CR4")


def _eli_universe(sat: _EliSaturator) -> set:
    return {names_conj(k) for k in sat.appears}


def _check_eli(theory: Theory) -> None:
    if theory.dialect != "ELI":
        raise DialectError("the ELI deriver needs an ELI theory in normal form")


def eli_materialize(theory: Theory, goal: Gci, max_vertices: int | None = None) -> DerivationStructure:
    _check_eli(theory)
    sat = _EliSaturator(theory, goal, True, max_vertices or default_max_vertices()).run()
    return _build(theory, goal, _eli_universe(sat), sat.p, "eli", sat.edges, sat.seen, _EliCodec)


def eli_derivable(theory: Theory, goal: Gci) -> bool:
    sat = _EliSaturator(theory, goal, False, default_max_vertices()).run()
    return ("n", frozenset((goal.lhs.name,)), goal.rhs.name) in sat.seen


# =========================================================================== oracle views


class DeriverView:
    """Oracle access to a derivation structure by vertex id.

    ``expand(i)`` lists the incoming edges of vertex ``i`` as sorted
    ``(premise-id-set, rule)`` pairs.
    """

    theory: Theory
    goal: Gci
    p: int

    def __init__(self) -> None:
        self._lock = threading.RLock()

    # subclasses provide these
    def _labels(self) -> list[Gci]:
        raise NotImplementedError

    def _expand(self, i: VertexId) -> list[tuple[frozenset[VertexId], str]]:
        raise NotImplementedError

    def id_of(self, s: Gci) -> VertexId | None:
        raise NotImplementedError

    def label(self, i: VertexId) -> Gci:
        return self._labels()[i]

    def __len__(self) -> int:
        return len(self._labels())

    def label_query(self, i: VertexId, s: Gci) -> bool:
        labels = self._labels()
        return 0 <= i < len(labels) and labels[i] == s

    def is_axiom(self, i: VertexId) -> bool:
        return self.label(i) in self.theory

    def expand(self, i: VertexId) -> list[tuple[frozenset[VertexId], str]]:
        with self._lock:
            cache = self.__dict__.setdefault("_expand_cache", {})
            if i not in cache:
                cache[i] = self._expand(i)
            return cache[i]

    def edge_query(self, premises: Iterable[VertexId], conclusion: VertexId) -> bool:
        ps = frozenset(premises)
        return any(ps == q for q, _ in self.expand(conclusion))

    @property
    def goal_id(self) -> VertexId | None:
        return self.id_of(self.goal)


class StructureView(DeriverView):
    """A materialized structure behind the oracle interface."""

    def __init__(self, d: DerivationStructure) -> None:
        super().__init__()
        self.d = d
        self.theory = d.theory
        self.goal = d.goal
        self.p = d.p
        vs = d.graph.vertices
        if vs != tuple(range(len(vs))):
            raise ValueError("structure views need vertex ids 0..n-1")
        self._lab = [d.graph.label(v) for v in vs]
        self._ids = {g: i for i, g in enumerate(self._lab)}

    def _labels(self) -> list[Gci]:
        return self._lab

    def id_of(self, s: Gci) -> VertexId | None:
        return self._ids.get(s)

    def _expand(self, i: VertexId) -> list[tuple[frozenset[VertexId], str]]:
        return sorted(((e.sources, e.rule) for e in self.d.graph.incoming(i)), key=lambda x: (sorted(x[0]), x[1]))


def structure_view(d: DerivationStructure) -> StructureView:
    return StructureView(d)


class _LazyView(DeriverView):
    def __init__(self, theory: Theory, goal: Gci, sentences: Iterable, codec, max_premise_sets: int) -> None:
        super().__init__()
        self.theory = theory
        self.goal = goal
        self.max_premise_sets = max_premise_sets
        self._codec = codec
        self._ids = _ordered_ids(codec.axioms(theory), sentences, codec.key)
        self._sent = list(self._ids)
        self._lab: list[Gci] | None = None
        self._n_axioms = len(set(codec.axioms(theory)))

    def _labels(self) -> list[Gci]:
        if self._lab is None:
            self._lab = [self._codec.to_gci(x) for x in self._sent]
        return self._lab

    def label(self, i: VertexId) -> Gci:
        if self._lab is None:
            return self._codec.to_gci(self._sent[i])
        return self._lab[i]

    def __len__(self) -> int:
        return len(self._sent)

    def is_axiom(self, i: VertexId) -> bool:
        return i < self._n_axioms

    def id_of(self, s: Gci) -> VertexId | None:
        x = self._codec.from_gci(s)
        return None if x is None else self._ids.get(x)

    def _expand(self, i: VertexId) -> list[tuple[frozenset[VertexId], str]]:
        s = self._sent[i]
        out: dict[frozenset, str] = {}
        for prem, rule in self._match(s):
            if s in prem:
                continue
            key = frozenset(self._ids[x] for x in prem)
            out.setdefault(key, rule)
            if len(out) > self.max_premise_sets:
                raise BudgetExceeded(f"more than {self.max_premise_sets} premise sets for one conclusion")
        return sorted(out.items(), key=lambda x: (sorted(x[0]), x[1]))

    def _match(self, s):
        raise NotImplementedError


class ElkLazyView(_LazyView):
    def __init__(self, theory: Theory, goal: Gci, max_vertices: int | None = None,
                 max_premise_sets: int = DEFAULT_MAX_PREMISE_SETS) -> None:
        sat = _ElkSaturator(theory, goal, False, max_vertices or default_max_vertices()).run()
        super().__init__(theory, goal, sat.seen, _ElCodec, max_premise_sets)
        self.p = sat.p
        self.universe = sat.universe
        self.closure = sat.seen
        self.sup = sat.sup
        self.ax_by_rhs: dict[Concept, list[Concept]] = defaultdict(list)
        for ax in theory.axioms:
            self.ax_by_rhs[ax.rhs].append(ax.lhs)
        self.and_with: dict[Concept, list[And]] = defaultdict(list)
        for u in self.universe:
            if isinstance(u, And):
                for x in u.conjuncts:
                    self.and_with[x].append(u)

    def _match(self, s):
        c, e = s
        have = self.closure
        if c == e:
            yield (), "R0"
        if e == TOP and c != TOP:
            yield (), "Rtop"
        for d in self.ax_by_rhs.get(e, ()):
            if (c, d) in have:
                yield ((c, d), (d, e)), "Rsub"
        for y in self.and_with.get(e, ()):
            if (c, y) in have:
                yield ((c, y),), "Rand-"
        if isinstance(e, And) and all((c, x) in have for x in e.conjuncts):
            yield tuple((c, x) for x in e.conjuncts), "Rand+"
        if isinstance(e, Exists):
            for d in self.sup.get(c, ()):
                if isinstance(d, Exists) and d.role == e.role and (d.filler, e.filler) in have:
                    yield ((c, d), (d.filler, e.filler)), "Rex"


class EliLazyView(_LazyView):
    def __init__(self, theory: Theory, goal: Gci, max_vertices: int | None = None,
                 max_premise_sets: int = DEFAULT_MAX_PREMISE_SETS) -> None:
        _check_eli(theory)
        sat = _EliSaturator(theory, goal, False, max_vertices or default_max_vertices()).run()
        super().__init__(theory, goal, sat.seen, _EliCodec, max_premise_sets)
        self.p = sat.p
        self.closure = sat.seen
        self.appears = sat.appears
        self.names_of = sat.names_of
        self.by_rhs: dict[tuple, list[frozenset]] = defaultdict(list)
        self.ex_by_lhs: dict[frozenset, list[tuple[Role, frozenset]]] = defaultdict(list)
        for t in sat.seen:
            self.by_rhs[_eli_rhs(t)].append(t[1])
            if t[0] == "e":
                self.ex_by_lhs[t[1]].append((t[2], t[3]))

    def _match(self, s):
        have = self.closure
        tag, m = s[0], s[1]
        rhs = _eli_rhs(s)
        if tag == "n" and s[2] in m and m in self.appears:
            yield (), "CR1"
        if m in self.appears:
            sm = self.names_of.get(m, set())
            for k in self.by_rhs.get(rhs, ()):
                if k <= sm:
                    yield tuple(("n", m, a) for a in sorted(k)) + ((tag, k) + rhs[1:],), "CR2"
        if tag == "n":
            for r, l in self.ex_by_lhs.get(m, ()):
                if ("a", l, r.inverse(), s[2]) in have:
                    yield (("e", m, r, l), ("a", l, r.inverse(), s[2])), "CR3"
        elif tag == "e":
            r, filler = s[2], s[3]
            for a in sorted(filler):
                rest = filler - {a}
                if ("e", m, r, rest) in have and ("a", m, r, a) in have:
                    yield (("e", m, r, rest), ("a", m, r, a)), "CR4"


def lazy_view(kind: str, theory: Theory, goal: Gci, **budgets) -> DeriverView:
    kind = kind.upper()
    if kind == "EL":
        return ElkLazyView(theory, goal, **budgets)
    if kind == "ELI":
        return EliLazyView(theory, goal, **budgets)
    raise ValueError(f"unknown deriver kind {kind!r}")


def materialize(kind: str, theory: Theory, goal: Gci, max_vertices: int | None = None) -> DerivationStructure:
    kind = kind.upper()
    if kind == "EL":
        return elk_materialize(theory, goal, max_vertices)
    if kind == "ELI":
        return eli_materialize(theory, goal, max_vertices)
    raise ValueError(f"unknown deriver kind {kind!r}")


# =========================================================================== edge soundness


_probe = 0


def _probe_name(tag: str) -> Name:
    global _probe
    _probe += 1
    return Name(f"_P{tag}{_probe}")


def sentence_entailed(premises: Iterable[Gci], s: Gci, dialect: str = "ELI") -> bool:
    """Does the set ``premises`` entail ``s``? Semantic reference for edge soundness.

    EL sentences go to the ELK saturator. Normal-form ELI sentences are reduced
    to a name-to-name question with fresh names and answered by CR1-CR4.
    """
    from .logic import entails

    prem = tuple(dict.fromkeys(premises))
    if dialect == "EL" and not any(_uses_eli(x.lhs) or _uses_eli(x.rhs) for x in prem + (s,)):
        return elk_derivable(Theory(prem, "EL"), s)
    th = Theory(prem, "ELI")
    k = s.lhs
    x = _probe_name("X")
    extra = [Gci(x, k)] if not isinstance(k, Name) else []
    src = x if extra else k
    r = s.rhs
    if isinstance(r, Name):
        return entails(th.extend(extra), Gci(src, r))
    if isinstance(r, Exists):
        y = _probe_name("Y")
        return entails(th.extend(extra + [Gci(r, y)]), Gci(src, y))
    if isinstance(r, Forall):
        z = _probe_name("Z")
        return entails(th.extend([Gci(z, Exists(r.role.inverse(), k))]), Gci(z, r.filler))
    if isinstance(r, And):
        return all(sentence_entailed(prem, Gci(k, c), dialect) for c in r.conjuncts)
    if r == TOP:
        return True
    raise UnsupportedGoal(f"cannot decide {s.render()}")


def edge_oracle(dialect: str):
    def oracle(premises, conclusion) -> bool:
        return sentence_entailed(premises, conclusion, dialect)

    return oracle
