"""
Space-bounded machines and tree size
====================================

Encode a machine run as an ELI theory and read acceptance off the tree-size
decision.
"""

from proofforge.derivers import lazy_view
from proofforge.generators import parse_tm, tm_run, tm_to_eli
from proofforge.logic import normalize_eli
from proofforge.optimizer import decide_treesize_leq

machine = parse_tm("""
states: e o f
alphabet: 0 1 _
blank: _
input: 0 1
start: e
accept: f
delta: e 0 -> e 0 +1
delta: e 1 -> o 1 +1
delta: o 0 -> o 0 +1
delta: o 1 -> e 1 +1
delta: e _ -> f _ 0
""")

for word in ["", "1", "11", "101", "100"]:
    inst = tm_to_eli(machine, word)
    normal, _ = normalize_eli(inst.theory)
    res = decide_treesize_leq(lazy_view("ELI", normal, inst.goal), None, inst.threshold)
    print(f"{word!r:7} run={tm_run(machine, word):7} threshold={inst.threshold} decided={bool(res)}",
          f"witness tree size={res.stats.get('treesize')}")
