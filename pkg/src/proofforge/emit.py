"""JSON and DOT output for structures and proofs."""

from __future__ import annotations

import json
from typing import Callable

from .hypergraph import Hypergraph, Proof, VertexId


def _parts(obj, is_axiom: Callable[[VertexId], bool] | None):
    sink = None
    if isinstance(obj, Proof):
        sink, g = obj.sink, obj.graph
    elif isinstance(obj, Hypergraph):
        g = obj
    else:  # a DerivationStructure
        g = obj.graph
        sink = obj.goal_vertex
        if is_axiom is None:
            is_axiom = obj.is_axiom
    return g, sink, is_axiom or (lambda _v: False)


def to_dict(obj, is_axiom: Callable[[VertexId], bool] | None = None) -> dict:
    g, sink, ax = _parts(obj, is_axiom)
    vertices = [{"id": v, "label": g.label(v).render(), "is_axiom": bool(ax(v))} for v in sorted(g.vertices)]
    edges = [{"sources": sorted(e.sources), "target": e.target, "rule": e.rule}
             for e in sorted(g.edges, key=lambda e: e.sort_key)]
    return {"vertices": vertices, "edges": edges, "sink": sink}


def to_json(obj, is_axiom: Callable[[VertexId], bool] | None = None) -> str:
    return json.dumps(to_dict(obj, is_axiom), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(obj, is_axiom: Callable[[VertexId], bool] | None = None, name: str = "proof") -> str:
    """Boxes for sentences, one point per hyperedge joining its premises to the conclusion."""
    g, sink, ax = _parts(obj, is_axiom)
    out = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=box];"]
    for v in sorted(g.vertices):
        attrs = [f"label={_quote(str(g.label(v)))}"]
        if ax(v):
            attrs.append("penwidth=2")
        if v == sink:
            attrs.append("style=rounded")
        out.append(f"  v{v} [{', '.join(attrs)}];")
    for i, e in enumerate(sorted(g.edges, key=lambda e: e.sort_key)):
        j = f"e{i}"
        tip = f", xlabel={_quote(e.rule)}" if e.rule else ""
        out.append(f"  {j} [shape=point{tip}];")
        for s in sorted(e.sources):
            out.append(f"  v{s} -> {j} [arrowhead=none];")
        out.append(f"  {j} -> v{e.target};")
    out.append("}")
    return "\n".join(out) + "\n"
