"""
Deciding QBFs through proof depth
=================================

A closed QBF becomes an ELI theory that always entails A <= B, but only
has a shallow proof of it when the formula is true.
"""

from proofforge.derivers import eli_materialize, lazy_view
from proofforge.generators import parse_qbf, qbf_eval, qbf_to_eli
from proofforge.measures import depth_measure
from proofforge.optimizer import decide_depth_leq, dijkstra_optimal

formulas = ["E x : x", "A x : x", "A x E y : (x | y) & (!x | !y)", "E y A x : (x | y) & (!x | !y)"]

for text in formulas:
    f = parse_qbf(text)
    inst = qbf_to_eli(f)
    view = lazy_view("ELI", inst.theory, inst.goal)
    shallow = bool(decide_depth_leq(view, None, inst.threshold))
    print(f"{text:34} value={qbf_eval(f)!s:5} depth<={inst.threshold}: {shallow!s:5} axioms={len(inst.theory)}")

# the padding keeps the entailment, so the false formula still has a proof, just a deeper one
d = eli_materialize(inst.theory, inst.goal)
print("optimal depth for the last formula:", dijkstra_optimal(d, depth_measure()).weight)
