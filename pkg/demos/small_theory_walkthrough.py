"""
Optimal proofs for a two-axiom theory
=====================================

Saturate, pick proofs under different measures, and look at the unraveling.
"""

from proofforge.derivers import elk_materialize
from proofforge.emit import to_dot
from proofforge.hypergraph import unravel
from proofforge.logic import parse_axiom, parse_theory
from proofforge.measures import depth_measure, evaluate, size, tree_size_measure
from proofforge.optimizer import brute_force_optimal, decide_treesize_leq, dijkstra_optimal

theory = parse_theory("A <= B\nB <= ex r. A\n")
goal = parse_axiom("A <= (B and ex r. A)")

# the ELK rules close everything the goal could need
d = elk_materialize(theory, goal)
print("structure:", len(d.graph), "vertices,", len(d.graph.edges), "edges")

best = dijkstra_optimal(d, depth_measure())
print("depth", best.weight, "| tree size", dijkstra_optimal(d, tree_size_measure()).weight,
      "| size", brute_force_optimal(d, "size").weight)

# the axiom A <= B is used twice, so the tree unraveling has one more vertex
tree = unravel(best.proof)
print("proof vertices:", size(best.proof), "-> unraveled:", size(tree))
print("tree size is the same either way:", evaluate(tree_size_measure(), tree))

for q in (4, 5):
    print(f"tree size <= {q}?", bool(decide_treesize_leq(d, None, q)))

print(to_dot(best.proof, lambda v: best.proof.label(v) in theory))
