"""Proof measures: recursive (leaf + edge function) and the plain vertex count."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .hypergraph import Proof
from .logic import Gci

Weight = Fraction
EdgeLabel = tuple[frozenset[Gci], Gci]


class MeasureUndefined(ValueError):
    code = "measure-undefined"


def parse_weight(text: str | int | Fraction) -> Fraction:
    """``"3"``, ``"7/2"`` or ``"1.25"`` to an exact non-negative rational."""
    if isinstance(text, (int, Fraction)):
        w = Fraction(text)
    else:
        t = text.strip()
        if not re.fullmatch(r"\d+(/\d+|\.\d+)?", t):
            raise ValueError(f"bad weight {text!r}; expected <num>[/<den>] or a decimal")
        w = Fraction(t)
    if w < 0:
        raise ValueError("weights are non-negative")
    return w


def format_weight(w: Fraction) -> str:
    w = Fraction(w)
    return str(w.numerator) if w.denominator == 1 else f"{w.numerator}/{w.denominator}"


@dataclass(frozen=True)
class Measure:
    name: str
    leaf_fn: Callable[[Gci], Fraction]
    edge_fn: Callable[[EdgeLabel, Sequence[Fraction]], Fraction | None]
    monotone: bool = True
    integral: bool = False  # every weight is an integer

    def leaf(self, label: Gci) -> Fraction:
        return Fraction(self.leaf_fn(label))

    def edge(self, label: EdgeLabel, weights: Sequence[Fraction]) -> Fraction:
        out = self.edge_fn(label, sorted(weights))
        if out is None:
            raise MeasureUndefined(f"{self.name} is undefined on the inference to {label[1]}")
        return Fraction(out)

    def within(self, w: Fraction, bound: Fraction) -> bool:
        return w <= bound

    def display(self, w: Fraction) -> str:
        return format_weight(w)


class LogDepth(Measure):
    """Stores depth; bounds and display go through log₂ (log₂ 0 read as 0)."""

    def within(self, w: Fraction, bound: Fraction) -> bool:
        # depth ≤ 2^(a/b)  <=>  depth^b ≤ 2^a, exact
        if w <= 1:
            return bound >= 0
        b = Fraction(bound)
        if b < 0:
            return False
        d = int(w)
        return d ** b.denominator <= 2 ** b.numerator

    def display(self, w: Fraction) -> str:
        return "0" if w <= 0 else f"{math.log2(w):.6g}"

    @staticmethod
    def depth_cap(bound: Fraction) -> int:
        """Largest depth d with log₂ d ≤ bound (-1 if none)."""
        b = Fraction(bound)
        if b < 0:
            return -1
        # d^den ≤ 2^num, searched by bisection on integers
        lo, hi = 1, 2 ** (b.numerator // b.denominator + 1)
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if mid ** b.denominator <= 2 ** b.numerator:
                lo = mid
            else:
                hi = mid - 1
        return lo


def _depth_edge(_label: EdgeLabel, ws: Sequence[Fraction]) -> Fraction:
    return 1 + max(ws, default=Fraction(0))


def depth_measure() -> Measure:
    return Measure("depth", lambda _l: Fraction(0), _depth_edge, True, True)


def tree_size_measure() -> Measure:
    return Measure("treesize", lambda _l: Fraction(1), lambda _l, ws: 1 + sum(ws, Fraction(0)), True, True)


def log_depth_measure() -> LogDepth:
    return LogDepth("logdepth", lambda _l: Fraction(0), _depth_edge, True, True)


def measure_by_name(name: str) -> Measure:
    table = {"depth": depth_measure, "treesize": tree_size_measure, "logdepth": log_depth_measure}
    if name not in table:
        raise ValueError(f"unknown recursive measure {name!r}")
    return table[name]()


def evaluate(m: Measure, p: Proof) -> Fraction:
    """Bottom-up over the unique incoming edge of every vertex."""
    w: dict[int, Fraction] = {}
    for v in p.topological():
        e = p.in_edge(v)
        if e is None:
            w[v] = m.leaf(p.label(v))
        else:
            w[v] = m.edge(p.graph.edge_label(e), [w[s] for s in e.sources])
    return w[p.sink]


def size(p: Proof) -> Fraction:
    return Fraction(len(p.vertices))


def check_monotone(m: Measure, labels: Iterable[EdgeLabel], multisets: Iterable[Sequence[Fraction]]) -> list[tuple]:
    """Lower one element of each sampled multiset and look for a rise in the edge value.

    Returns the offending ``(label, Q, index, lowered_to, before, after)`` tuples.
    """
    labels = list(labels)
    bad: list[tuple] = []
    for q in multisets:
        q = [Fraction(x) for x in q]
        for lab in labels:
            try:
                base = m.edge(lab, q)
            except MeasureUndefined:
                continue
            for i, x in enumerate(q):
                lowered = {Fraction(0), x / 2, *(y for y in q if y < x)}
                if x >= 1:
                    lowered.add(x - 1)
                for y in sorted(lowered):
                    if y > x:
                        continue
                    q2 = q[:i] + [y] + q[i + 1:]
                    try:
                        after = m.edge(lab, q2)
                    except MeasureUndefined:
                        continue
                    if after > base:
                        bad.append((lab, tuple(q), i, y, base, after))
    return bad
