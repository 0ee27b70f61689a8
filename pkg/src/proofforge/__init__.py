"""Finding proofs that are optimal under depth, tree size and related measures.

The pieces, bottom up: :mod:`logic` (concepts, theories, parsing,
normalization), :mod:`hypergraph` (derivation structures and proofs),
:mod:`measures`, :mod:`derivers` (ELK and ELI saturation, lazy views),
:mod:`optimizer` (Dijkstra-style search and budget deciders) and
:mod:`generators` (hardness reductions with their oracles).
"""

from .derivers import DerivationStructure, lazy_view, materialize
from .hypergraph import Edge, Hypergraph, Proof, unravel
from .logic import Gci, Theory, entails, normalize_eli, parse_axiom, parse_theory
from .measures import depth_measure, evaluate, log_depth_measure, measure_by_name, tree_size_measure
from .optimizer import brute_force_optimal, decide_depth_leq, decide_treesize_leq, dijkstra_optimal

__all__ = [
    "DerivationStructure", "Edge", "Gci", "Hypergraph", "Proof", "Theory",
    "brute_force_optimal", "decide_depth_leq", "decide_treesize_leq", "depth_measure",
    "dijkstra_optimal", "entails", "evaluate", "lazy_view", "log_depth_measure",
    "materialize", "measure_by_name", "normalize_eli", "parse_axiom", "parse_theory",
    "tree_size_measure", "unravel",
]
