"""
Short theories with very deep proofs
====================================

A binary counter in ELI: n bits of axioms, yet every proof is deeper than 2^n.
"""

from proofforge.derivers import eli_materialize
from proofforge.generators import deep_eli_theory
from proofforge.measures import depth_measure, log_depth_measure
from proofforge.optimizer import dijkstra_optimal

for n in (1, 2, 3):
    theory, goal = deep_eli_theory(n)
    d = eli_materialize(theory, goal)
    best = dijkstra_optimal(d, depth_measure())
    print(f"n={n}: {len(theory)} axioms, {len(d.graph)} vertices, depth {best.weight} > {2**n}")

# log depth picks the same proof, it only compresses the number
m = log_depth_measure()
print("log2 of that depth:", m.display(dijkstra_optimal(d, m).weight))
