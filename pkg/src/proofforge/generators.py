"""Reduction instances and the semantic oracles they are checked against."""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import floor
from pathlib import Path
from typing import Union

from .logic import TOP, Exists, Forall, Gci, LogicError, Name, Role, Theory, conj, names_conj

# =========================================================================== instances


@dataclass
class ReductionInstance:
    theory: Theory
    goal: Gci
    threshold: Fraction
    measure_name: str
    meta: dict = field(default_factory=dict)

    def sidecar(self) -> dict:
        from .measures import format_weight

        return {"goal": self.goal.render(), "threshold": format_weight(self.threshold), "measure": self.measure_name}

    def write(self, stem: str | Path) -> tuple[Path, Path]:
        """Write ``<stem>.thy`` and ``<stem>.inst.json``."""
        stem = Path(stem)
        thy = stem.with_name(stem.name + ".thy")
        side = stem.with_name(stem.name + ".inst.json")
        thy.write_text(self.theory.render())
        side.write_text(json.dumps(self.sidecar(), sort_keys=True, indent=2) + "\n")
        return thy, side


def load_sidecar(path: str | Path) -> dict:
    data = json.loads(Path(path).read_text())
    missing = {"goal", "threshold", "measure"} - set(data)
    if missing:
        raise LogicError(f"sidecar lacks {sorted(missing)}")
    return data


def _check_fresh(theory: Theory, names: list[str]) -> None:
    clash = sorted(set(names) & theory.names())
    if clash:
        raise LogicError(f"fresh names already used by the theory: {', '.join(clash)}")


def chain_axioms(a: str, b: str, length: int, prefix: str = "Chain") -> list[Gci]:
    """``a ⊑ P1, P1 ⊑ P2, …, P_length ⊑ b``."""
    names = [a] + [f"{prefix}{i}" for i in range(1, length + 1)] + [b]
    return [Gci(Name(x), Name(y)) for x, y in zip(names, names[1:])]


def pad_depth_chain(theory: Theory, a: str, b: str) -> ReductionInstance:
    """Append a fresh chain from ``a`` to ``b`` that is one step too deep to matter.

    The bound q is the vertex count of the ELK structure for ``a ⊑ b``, which
    bounds the depth of every proof that stays inside ``theory``.
    """
    from .derivers import elk_materialize

    if theory.dialect != "EL":
        raise LogicError("pad_depth_chain expects an EL theory")
    goal = Gci(Name(a), Name(b))
    q = len(elk_materialize(theory, goal).graph)
    chain = chain_axioms(a, b, q + 2)
    _check_fresh(theory, [f"Chain{i}" for i in range(1, q + 3)])
    return ReductionInstance(theory.extend(chain), goal, Fraction(q), "depth",
                             {"construction": "chain", "chain_axioms": len(chain)})


def pad_role_chain(theory: Theory, a: str, b: str, q: Fraction, prefix: str = "Link") -> Theory:
    """ELI padding whose proofs of ``a ⊑ b`` all have depth above ``q``.

    ``a ⊑ ∃s.P1, P1 ⊑ ∃s.P2, …, PL ⊑ Done`` with ``Done`` flowing back along
    inverse s. A plain name chain would not do here: CR2 composes its links
    pairwise and reaches the end in logarithmic depth.
    """
    length = floor(q / 2) + 1
    s = Role(prefix.lower() + "s")
    names = [Name(f"{prefix}{i}") for i in range(1, length + 1)]
    done = Name(prefix + "Done")
    _check_fresh(theory, [x.name for x in names] + [done.name])
    if s.name in _roles(theory):
        raise LogicError(f"fresh role {s.name} already used by the theory")
    ax = [Gci(Name(a), Exists(s, names[0]))]
    ax += [Gci(x, Exists(s, y)) for x, y in zip(names, names[1:])]
    ax += [Gci(names[-1], done), Gci(done, Forall(s.inverse(), done)), Gci(done, Name(b))]
    return theory.extend(ax, "ELI")


def _roles(theory: Theory) -> set[str]:
    from .logic import iter_subconcepts

    out = set()
    for ax in theory.axioms:
        for side in (ax.lhs, ax.rhs):
            for c in iter_subconcepts(side):
                if isinstance(c, (Exists, Forall)):
                    out.add(c.role.name)
    return out


# =========================================================================== random structures


def random_structure(rng, max_vertices: int = 10, max_premises: int = 3, extra_edges: int = 6):
    """A grounded derivation structure with arbitrary (possibly cyclic) extra edges.

    Labels are ``Ai ⊑ Bj`` sentences; vertex 0 and a random subset are axioms,
    every other vertex gets at least one edge from lower-numbered vertices,
    and the goal is a random non-axiom when there is one.
    """
    from .derivers import DerivationStructure
    from .hypergraph import Edge, Hypergraph

    n = rng.randint(1, max_vertices)
    labels = [Gci(Name(f"A{i}"), Name(f"B{rng.randint(0, 3)}")) for i in range(n)]
    axioms = [0] + [v for v in range(1, n) if rng.random() < 0.3]
    edges = []
    for v in range(1, n):
        if v in axioms:
            continue
        for _ in range(rng.randint(1, 2)):
            k = rng.randint(1, min(max_premises, v))
            edges.append(Edge(frozenset(rng.sample(range(v), k)), v, "R"))
    for _ in range(rng.randint(0, extra_edges)):
        if n < 2:
            break
        t = rng.randrange(n)
        others = [v for v in range(n) if v != t]
        k = rng.randint(1, min(max_premises, len(others)))
        edges.append(Edge(frozenset(rng.sample(others, k)), t, "R"))
    rest = [v for v in range(n) if v not in axioms]
    goal = labels[rng.choice(rest)] if rest else labels[0]
    theory = Theory(tuple(labels[v] for v in axioms), "EL")
    p = max([1] + [len(e.sources) for e in edges])
    return DerivationStructure(Hypergraph(labels, edges), theory, goal, frozenset(), p, "random")


def random_concept(rng, names: list[str], roles: list[str], depth: int = 2):
    pick = rng.random()
    if depth <= 0 or pick < 0.45:
        return Name(rng.choice(names)) if rng.random() > 0.05 else TOP
    if pick < 0.75:
        return conj(random_concept(rng, names, roles, depth - 1), random_concept(rng, names, roles, depth - 1))
    return Exists(Role(rng.choice(roles)), random_concept(rng, names, roles, depth - 1))


def random_el_theory(rng, n_names: int = 4, n_axioms: int = 5) -> tuple[Theory, Gci]:
    """A small random EL theory and a goal ``A ⊑ B`` between two of its names."""
    names = [chr(ord("A") + i) for i in range(n_names)]
    roles = ["r", "s"]
    ax = []
    for _ in range(n_axioms):
        ax.append(Gci(random_concept(rng, names, roles), random_concept(rng, names, roles)))
    a, b = rng.sample(names, 2)
    return Theory(tuple(ax), "EL"), Gci(Name(a), Name(b))


# =========================================================================== deep ELI theory


def deep_eli_theory(n: int, prefix: str = "") -> tuple[Theory, Gci]:
    """An ELI theory whose proofs of ``A ⊑ B`` all have depth above 2ⁿ.

    An n-bit counter: ``A`` starts at zero, every value below 2ⁿ−1 has an
    r-successor holding the next value, the all-ones value implies ``B`` and
    ``B`` travels back along inverse r. Helper names keep it linear in n:
    ``O_i`` (bits 1..i are one), ``Z_j`` (some bit below j is zero) and
    ``L_i`` (bits 1..i are zero).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    p = prefix

    def nm(s: str) -> Name:
        return Name(p + s)

    r = Role(p + "r")
    one = {i: nm(f"X{i}") for i in range(1, n + 1)}
    zero = {i: nm(f"Y{i}") for i in range(1, n + 1)}
    ax: list[Gci] = [Gci(nm("A"), nm(f"L{n}"))]
    for i in range(1, n + 1):
        ax.append(Gci(nm(f"L{i}"), zero[i]))
        if i > 1:
            ax.append(Gci(nm(f"L{i}"), nm(f"L{i-1}")))
    ax.append(Gci(one[1], nm("O1")))
    for i in range(2, n + 1):
        ax.append(Gci(conj(nm(f"O{i-1}"), one[i]), nm(f"O{i}")))
    for j in range(2, n + 1):
        ax.append(Gci(zero[j - 1], nm(f"Z{j}")))
        if j > 2:
            ax.append(Gci(nm(f"Z{j-1}"), nm(f"Z{j}")))
        ax.append(Gci(conj(nm(f"Z{j}"), one[j]), Forall(r, one[j])))
        ax.append(Gci(conj(nm(f"Z{j}"), zero[j]), Forall(r, zero[j])))
    ax.append(Gci(zero[1], Exists(r, one[1])))
    for i in range(2, n + 1):
        ax.append(Gci(conj(nm(f"O{i-1}"), zero[i]), Exists(r, conj(one[i], nm(f"L{i-1}")))))
    ax.append(Gci(nm(f"O{n}"), nm("B")))
    ax.append(Gci(nm("B"), Forall(r.inverse(), nm("B"))))
    return Theory(tuple(ax), "ELI"), Gci(nm("A"), nm("B"))


def pad_with_deep(theory: Theory, a: str, b: str, q: Fraction, prefix: str = "Deep") -> tuple[Theory, int]:
    """Attach a deep theory with 2ⁿ ≥ q between ``a`` and ``b`` through fresh names."""
    n = 1
    while 2**n < q:
        n += 1
    deep, dg = deep_eli_theory(n, prefix)
    _check_fresh(theory, sorted(deep.names()))
    link = [Gci(Name(a), dg.lhs), Gci(dg.rhs, Name(b))]
    return theory.extend(list(deep.axioms) + link, "ELI"), n


# =========================================================================== QBF

Matrix = tuple  # ("lit", var, positive) | ("and", l, r) | ("or", l, r)


@dataclass(frozen=True)
class Qbf:
    prefix: tuple[tuple[str, str], ...]  # (("exists"|"forall"), var)
    matrix: Matrix

    def __post_init__(self) -> None:
        names = [v for _, v in self.prefix]
        if len(set(names)) != len(names):
            raise LogicError("a variable is quantified twice")
        for q, _ in self.prefix:
            if q not in ("exists", "forall"):
                raise LogicError(f"unknown quantifier {q!r}")

    @property
    def variables(self) -> list[str]:
        return [v for _, v in self.prefix]

    def free_variables(self) -> set[str]:
        return matrix_vars(self.matrix) - set(self.variables)

    def render(self) -> str:
        pre = " ".join(("E " if q == "exists" else "A ") + v for q, v in self.prefix)
        return f"{pre} : {render_matrix(self.matrix)}".strip()

    def canonical(self) -> Qbf:
        return Qbf(self.prefix, canonical_matrix(self.matrix))

    def __str__(self) -> str:
        return self.render()


def matrix_vars(m: Matrix) -> set[str]:
    if m[0] == "lit":
        return {m[1]}
    return matrix_vars(m[1]) | matrix_vars(m[2])


def matrix_size(m: Matrix) -> int:
    return 1 if m[0] == "lit" else 1 + matrix_size(m[1]) + matrix_size(m[2])


def render_matrix(m: Matrix) -> str:
    if m[0] == "lit":
        return m[1] if m[2] else "!" + m[1]
    op = " & " if m[0] == "and" else " | "
    return "(" + render_matrix(m[1]) + op + render_matrix(m[2]) + ")"


def canonical_matrix(m: Matrix) -> Matrix:
    if m[0] == "lit":
        return m
    a, b = canonical_matrix(m[1]), canonical_matrix(m[2])
    if render_matrix(b) < render_matrix(a):
        a, b = b, a
    return (m[0], a, b)


_QBF_TOKEN = re.compile(r"\s*(?:([EA])\s+(?=[A-Za-z_])|([A-Za-z_][A-Za-z0-9_]*)|([:()&|!]))")


def parse_qbf(text: str) -> Qbf:
    """Syntax: ``E x1 A x2 : (x1 | !x2) & x2``; ``&`` binds tighter than ``|``."""
    toks: list[tuple[str, str]] = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        mt = _QBF_TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            raise LogicError(f"bad QBF syntax at offset {pos}: {text[pos:pos+10]!r}")
        if mt.group(1):
            toks.append(("quant", mt.group(1)))
        elif mt.group(2):
            toks.append(("var", mt.group(2)))
        else:
            toks.append(("sym", mt.group(3)))
        pos = mt.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    prefix = []
    i = 0
    while i < len(toks) and toks[i][0] == "quant":
        if i + 1 >= len(toks) or toks[i + 1][0] != "var":
            raise LogicError("quantifier without a variable")
        prefix.append(("exists" if toks[i][1] == "E" else "forall", toks[i + 1][1]))
        i += 2
    if i >= len(toks) or toks[i] != ("sym", ":"):
        raise LogicError("expected ':' after the quantifier prefix")
    i += 1

    def expr(j: int, level: int) -> tuple[Matrix, int]:
        if level == 2:
            return atom(j)
        left, j = expr(j, level + 1)
        op = "|" if level == 0 else "&"
        while j < len(toks) and toks[j] == ("sym", op):
            right, j = expr(j + 1, level + 1)
            left = ("or" if op == "|" else "and", left, right)
        return left, j

    def atom(j: int) -> tuple[Matrix, int]:
        if j >= len(toks):
            raise LogicError("unexpected end of QBF matrix")
        t = toks[j]
        if t == ("sym", "!"):
            if j + 1 < len(toks) and toks[j + 1][0] == "var":
                return ("lit", toks[j + 1][1], False), j + 2
            raise LogicError("negation must stand directly before a variable (NNF)")
        if t[0] == "var":
            return ("lit", t[1], True), j + 1
        if t == ("sym", "("):
            inner, j = expr(j + 1, 0)
            if j >= len(toks) or toks[j] != ("sym", ")"):
                raise LogicError("unbalanced parentheses in QBF matrix")
            return inner, j + 1
        raise LogicError(f"unexpected token {t[1]!r} in QBF matrix")

    matrix, i = expr(i, 0)
    if i != len(toks):
        raise LogicError(f"trailing tokens in QBF: {' '.join(t[1] for t in toks[i:])}")
    return Qbf(tuple(prefix), matrix)


MAX_QBF_VARS = 20


def qbf_eval(f: Qbf) -> bool:
    if f.free_variables():
        raise LogicError(f"open formula: free {sorted(f.free_variables())}")
    if len(f.prefix) > MAX_QBF_VARS:
        raise LogicError(f"more than {MAX_QBF_VARS} variables")

    def value(m: Matrix, env: dict[str, bool]) -> bool:
        if m[0] == "lit":
            return env[m[1]] == m[2]
        if m[0] == "and":
            return value(m[1], env) and value(m[2], env)
        return value(m[1], env) or value(m[2], env)

    def go(i: int, env: dict[str, bool]) -> bool:
        if i == len(f.prefix):
            return value(f.matrix, env)
        q, v = f.prefix[i]
        results = (go(i + 1, {**env, v: b}) for b in (True, False))
        return any(results) if q == "exists" else all(results)

    return go(0, {})


def _lit_name(var: str, positive: bool) -> Name:
    return Name(("Pos_" if positive else "Neg_") + var)


def _qbf_axioms(f: Qbf, relaxed: bool = False) -> list[Gci]:
    """The QBF encoding; ``relaxed`` gives both literals to every successor."""
    r1, r2 = Role("r1"), Role("r2")
    a = [Name(f"A{i}") for i in range(len(f.prefix) + 1)]
    ax: list[Gci] = [Gci(Name("A"), a[0])]
    for i, (_q, v) in enumerate(f.prefix, start=1):
        pos, neg = _lit_name(v, True), _lit_name(v, False)
        both = (pos, neg) if relaxed else None
        ax.append(Gci(a[i - 1], Exists(r1, conj(a[i], *(both or (pos,))))))
        ax.append(Gci(a[i - 1], Exists(r2, conj(a[i], *(both or (neg,))))))
    for v in f.variables:
        for lit in (_lit_name(v, True), _lit_name(v, False)):
            ax.append(Gci(lit, Forall(r1, lit)))
            ax.append(Gci(lit, Forall(r2, lit)))
    subs: dict[str, Name] = {}

    def name_of(m: Matrix) -> Name:
        if m[0] == "lit":
            return _lit_name(m[1], m[2])
        return subs[render_matrix(m)]

    inner = sorted({render_matrix(s): s for s in _subformulas(f.matrix) if s[0] != "lit"}.items())
    for k, (key, _s) in enumerate(inner, start=1):
        subs[key] = Name(f"F{k}")
    for _key, s in inner:
        op = "and" if relaxed else s[0]
        if op == "and":
            ax.append(Gci(conj(name_of(s[1]), name_of(s[2])), name_of(s)))
        else:
            ax.append(Gci(name_of(s[1]), name_of(s)))
            ax.append(Gci(name_of(s[2]), name_of(s)))
    b, b1, b2 = Name("B"), Name("B1"), Name("B2")
    ax.append(Gci(name_of(f.matrix), b))
    for i, (q, _v) in enumerate(f.prefix, start=1):
        if q == "exists" and not relaxed:
            ax.append(Gci(conj(a[i], b), Forall(r1.inverse(), b)))
            ax.append(Gci(conj(a[i], b), Forall(r2.inverse(), b)))
        else:
            ax.append(Gci(conj(a[i], b), Forall(r1.inverse(), b1)))
            ax.append(Gci(conj(a[i], b), Forall(r2.inverse(), b2)))
    if relaxed or any(q == "forall" for q, _ in f.prefix):
        ax.append(Gci(conj(b1, b2), b))
    return list(dict.fromkeys(ax))


def _subformulas(m: Matrix):
    yield m
    if m[0] != "lit":
        yield from _subformulas(m[1])
        yield from _subformulas(m[2])


def _relaxed_key(f: Qbf) -> str:
    def strip(m: Matrix) -> Matrix:
        if m[0] == "lit":
            return ("lit", m[1], True)
        return ("and", strip(m[1]), strip(m[2]))

    return Qbf(tuple(("forall", v) for v in f.variables), canonical_matrix(strip(f.matrix))).render()


@lru_cache(maxsize=4096)
def _calibrated_depth(relaxed_key: str) -> int:
    from .derivers import eli_materialize
    from .measures import depth_measure
    from .optimizer import dijkstra_optimal

    g = parse_qbf(relaxed_key)
    th = Theory(tuple(_qbf_axioms(g, relaxed=True)), "ELI")
    goal = Gci(Name("A"), Name("B"))
    return int(dijkstra_optimal(eli_materialize(th, goal), depth_measure(), goal).weight)


def qbf_threshold(f: Qbf) -> int:
    """Minimal proof depth of the relaxed twin of ``f``.

    The twin quantifies everything universally, reads every disjunction as a
    conjunction and gives each successor both literals, so it is valid and
    does at least as much work as any valid formula of the same shape.
    """
    return _calibrated_depth(_relaxed_key(f))


def qbf_to_eli(f: Qbf) -> ReductionInstance:
    if f.free_variables():
        raise LogicError(f"open formula: free {sorted(f.free_variables())}")
    f = f.canonical()
    ax = _qbf_axioms(f)
    q = qbf_threshold(f)
    th = pad_role_chain(Theory(tuple(ax), "ELI"), "A", "B", Fraction(q))
    return ReductionInstance(th, Gci(Name("A"), Name("B")), Fraction(q), "depth",
                             {"construction": "qbf", "formula": f.render(), "core_axioms": len(ax)})


def enumerate_qbfs(max_vars: int = 3, max_nodes: int = 7) -> list[Qbf]:
    """Every closed NNF QBF over x1..xk (k ≤ max_vars) up to commutativity of ∧/∨."""
    out: dict[str, Qbf] = {}

    @lru_cache(maxsize=None)
    def trees(nodes: int, k: int) -> tuple[Matrix, ...]:
        res: list[Matrix] = []
        if nodes == 1:
            for i in range(1, k + 1):
                res += [("lit", f"x{i}", True), ("lit", f"x{i}", False)]
            return tuple(res)
        for left in range(1, nodes - 1, 2):
            right = nodes - 1 - left
            for a in trees(left, k):
                for b in trees(right, k):
                    for op in ("and", "or"):
                        res.append((op, a, b))
        return tuple(res)

    for k in range(1, max_vars + 1):
        for quants in itertools.product(("exists", "forall"), repeat=k):
            prefix = tuple(zip(quants, (f"x{i}" for i in range(1, k + 1))))
            for nodes in range(1, max_nodes + 1, 2):
                for m in trees(nodes, k):
                    f = Qbf(prefix, canonical_matrix(m))
                    out.setdefault(f.render(), f)
    return list(out.values())


# =========================================================================== Turing machines

Move = int


@dataclass(frozen=True)
class TuringMachine:
    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    blank: str
    input_alphabet: tuple[str, ...]
    delta: tuple[tuple[tuple[str, str], tuple[str, str, Move]], ...]
    start: str
    accept: tuple[str, ...]
    space: tuple[int, ...] = (0, 1)  # coefficients c0, c1, … of p(n)

    def __post_init__(self) -> None:
        if self.blank not in self.alphabet or self.blank in self.input_alphabet:
            raise LogicError("the blank must be a tape symbol outside the input alphabet")
        if not set(self.input_alphabet) <= set(self.alphabet):
            raise LogicError("input alphabet must be part of the tape alphabet")
        if self.start not in self.states or not set(self.accept) <= set(self.states):
            raise LogicError("start and accepting states must be states")
        keys = [k for k, _ in self.delta]
        if len(set(keys)) != len(keys):
            raise LogicError("transition function is not deterministic")
        for (q, a), (q2, b, d) in self.delta:
            if q not in self.states or q2 not in self.states or a not in self.alphabet or b not in self.alphabet:
                raise LogicError(f"transition {(q, a)} uses unknown states or symbols")
            if d not in (-1, 0, 1):
                raise LogicError("moves are -1, 0 or +1")
        for s in self.states + self.alphabet:
            if not re.fullmatch(r"[A-Za-z0-9_]+", s):
                raise LogicError(f"state and symbol names must be alphanumeric: {s!r}")
        if not self.space or any(c < 0 for c in self.space):
            raise LogicError("space polynomial needs non-negative coefficients")

    @property
    def step(self) -> dict[tuple[str, str], tuple[str, str, Move]]:
        return dict(self.delta)

    def space_bound(self, n: int) -> int:
        return sum(c * n**i for i, c in enumerate(self.space))

    def render(self) -> str:
        lines = [
            "states: " + " ".join(self.states),
            "alphabet: " + " ".join(self.alphabet),
            "blank: " + self.blank,
            "input: " + " ".join(self.input_alphabet),
            "start: " + self.start,
            "accept: " + " ".join(self.accept),
            "space: " + " ".join(str(c) for c in self.space),
        ]
        for (q, a), (q2, b, d) in self.delta:
            lines.append(f"delta: {q} {a} -> {q2} {b} {d:+d}" if d else f"delta: {q} {a} -> {q2} {b} 0")
        return "\n".join(lines) + "\n"


def parse_tm(text: str) -> TuringMachine:
    """Line format ``key: values``; transitions as ``delta: q a -> q' b d`` with d in -1/0/+1."""
    fields: dict[str, list[str]] = {}
    delta = []
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise LogicError(f"line {n}: expected 'key: value'")
        key, val = (x.strip() for x in line.split(":", 1))
        if key == "delta":
            mt = re.fullmatch(r"(\S+)\s+(\S+)\s*->\s*(\S+)\s+(\S+)\s+([+-]?[01])", val)
            if not mt:
                raise LogicError(f"line {n}: bad transition {val!r}")
            delta.append(((mt[1], mt[2]), (mt[3], mt[4], int(mt[5]))))
        elif key in ("states", "alphabet", "blank", "input", "start", "accept", "space"):
            fields[key] = val.split()
        else:
            raise LogicError(f"line {n}: unknown key {key!r}")
    for key in ("states", "alphabet", "blank", "start"):
        if key not in fields:
            raise LogicError(f"missing '{key}:' line")
    return TuringMachine(
        tuple(fields["states"]), tuple(fields["alphabet"]), fields["blank"][0], tuple(fields.get("input", [])),
        tuple(delta), fields["start"][0], tuple(fields.get("accept", [])),
        tuple(int(c) for c in fields.get("space", ["0", "1"])),
    )


def _check_word(m: TuringMachine, w: tuple[str, ...]) -> int:
    bad = [a for a in w if a not in m.input_alphabet]
    if bad:
        raise LogicError(f"word uses symbols outside the input alphabet: {bad}")
    k = m.space_bound(len(w))
    if len(w) > k + 1:
        raise LogicError(f"word of length {len(w)} does not fit into cells 0..{k}")
    return k


def tm_run(m: TuringMachine, w) -> str:
    """Simulate on cells 0..k; ``accept``, ``reject`` or ``space-exceeded``.

    A repeated configuration means the deterministic machine loops, which is
    a rejection.
    """
    w = tuple(w)
    k = _check_word(m, w)
    tape = list(w) + [m.blank] * (k + 1 - len(w))
    state, head = m.start, 0
    seen = set()
    step = m.step
    while True:
        if state in m.accept:
            return "accept"
        conf = (state, head, tuple(tape))
        if conf in seen:
            return "reject"
        seen.add(conf)
        move = step.get((state, tape[head]))
        if move is None:
            return "reject"
        state, tape[head], d = move[0], move[1], move[2]
        head += d
        if not 0 <= head <= k:
            return "space-exceeded"


def tm_threshold(n_states: int, n_symbols: int, k: int) -> int:
    return (n_states * n_symbols**k + 1) * (11 * k + 22)


def tm_axioms(m: TuringMachine, w) -> list[Gci]:
    w = tuple(w)
    k = _check_word(m, w)
    r = Role("r")

    def s(q: str) -> Name:
        return Name(f"S_{q}")

    def cell(i: int, a: str) -> Name:
        return Name(f"T{i}_{a}")

    def here(i: int) -> Name:
        return Name(f"H{i}")

    def away(i: int) -> Name:
        return Name(f"N{i}")

    start, accept = Name("Start"), Name("Accept")
    init = [s(m.start)] + [cell(i, w[i] if i < len(w) else m.blank) for i in range(k + 1)]
    init += [here(0)] + [away(i) for i in range(1, k + 1)]
    ax = [Gci(start, conj(*init))]
    for (q, a), (q2, b, d) in m.delta:
        for i in range(k + 1):
            j = i + d
            if not 0 <= j <= k:
                continue
            rhs = [Exists(r, s(q2)), Forall(r, cell(i, b)), Forall(r, here(j))]
            rhs += [Forall(r, away(x)) for x in range(k + 1) if x != j]
            ax.append(Gci(conj(s(q), cell(i, a), here(i)), conj(*rhs)))
    for i in range(k + 1):
        for a in m.alphabet:
            ax.append(Gci(conj(cell(i, a), away(i)), Forall(r, cell(i, a))))
    for f in m.accept:
        ax.append(Gci(s(f), accept))
    ax.append(Gci(accept, Forall(r.inverse(), accept)))
    return ax


def tm_to_eli(m: TuringMachine, w, padding: str = "chain") -> ReductionInstance:
    """Encoding of the run on ``w``, padded so that Start ⊑ Accept always holds.

    ``padding="deep"`` uses the binary counter with 2^n ≥ q; it is compact in
    the bit length of q but its closure explodes beyond a handful of bits.
    The default role chain is linear in q and cheap to saturate.
    """
    w = tuple(w)
    k = _check_word(m, w)
    q = tm_threshold(len(m.states), len(m.alphabet), k)
    core = Theory(tuple(tm_axioms(m, w)), "ELI")
    meta: dict = {"construction": "tm", "k": k, "word": list(w), "padding": padding}
    if padding == "deep":
        padded, meta["deep_bits"] = pad_with_deep(core, "Start", "Accept", Fraction(q))
    elif padding == "chain":
        padded = pad_role_chain(core, "Start", "Accept", Fraction(q))
    else:
        raise ValueError(f"unknown padding {padding!r}")
    return ReductionInstance(padded, Gci(Name("Start"), Name("Accept")), Fraction(q), "treesize", meta)
