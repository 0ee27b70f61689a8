import json
import os
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from proofforge import cli
from proofforge.hypergraph import Edge, Hypergraph, Proof
from proofforge.logic import parse_axiom
from proofforge.measures import depth_measure, evaluate, tree_size_measure

DATA = Path(__file__).parent / "data"
SMALL = str(DATA / "small.thy")


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def proof_from_json(text: str) -> Proof:
    data = json.loads(text)
    pos = {v["id"]: i for i, v in enumerate(data["vertices"])}
    labels = [parse_axiom(v["label"], 1, "ELI") for v in data["vertices"]]
    edges = [Edge(frozenset(pos[s] for s in e["sources"]), pos[e["target"]], e["rule"]) for e in data["edges"]]
    return Proof(Hypergraph(labels, edges), pos[data["sink"]])


@pytest.mark.parametrize("measure, weight", [("depth", "2"), ("treesize", "5"), ("size", "4")])
def test_prove_on_the_small_case(capsys, tmp_path, measure: str, weight: str) -> None:
    out_file = tmp_path / "p.proof.json"
    code, out, _ = run(capsys, "prove", SMALL, "--measure", measure, "-o", str(out_file))
    assert code == 0
    assert out.splitlines() == [f"weight: {weight}"]
    proof = proof_from_json(out_file.read_text())
    assert len(proof.vertices) == 4
    if measure == "depth":
        assert evaluate(depth_measure(), proof) == 2


def test_weight_line_matches_the_emitted_proof(capsys) -> None:
    for name, m in (("depth", depth_measure()), ("treesize", tree_size_measure())):
        code, out, _ = run(capsys, "prove", SMALL, "--measure", name)
        assert code == 0
        body, _, tail = out.rpartition("weight: ")
        assert Fraction(tail.strip()) == evaluate(m, proof_from_json(body))


def test_logdepth_prints_both_lines(capsys) -> None:
    code, out, _ = run(capsys, "prove", SMALL, "--measure", "logdepth", "-o", os.devnull)
    assert code == 0
    assert out.splitlines() == ["weight: 2", "log2: 1"]


@pytest.mark.parametrize("measure, bound, code", [("treesize", "4", 1), ("treesize", "5", 0),
                                                  ("depth", "1", 1), ("depth", "2", 0), ("logdepth", "1", 0)])
def test_decide_exit_codes(capsys, measure: str, bound: str, code: int) -> None:
    got, out, _ = run(capsys, "decide", SMALL, "--measure", measure, "--bound", bound)
    assert got == code
    assert out.strip() == ("yes" if code == 0 else "no")


def test_decide_writes_a_witness(capsys, tmp_path) -> None:
    w = tmp_path / "w.dot"
    code, _, _ = run(capsys, "decide", SMALL, "--measure", "treesize", "--bound", "5", "--witness", str(w))
    assert code == 0
    assert w.read_text().startswith("digraph")


def test_malformed_axiom(capsys, tmp_path) -> None:
    bad = tmp_path / "bad.thy"
    bad.write_text("A <= B\nB <= ex r A\n")
    code, out, err = run(capsys, "parse", str(bad))
    assert code == 2 and out == ""
    assert err.count("\n") == 1
    assert err.startswith("error: syntax: ")
    assert "line 2" in err


@pytest.mark.parametrize("argv, code", [
    (["prove"], "usage"),
    (["prove", "missing.thy", "--goal", "A <= B"], "usage"),
    (["decide", "BARE", "--measure", "treesize", "--goal", "A <= B"], "usage"),
    (["decide", SMALL, "--bound", "x"], "usage"),
    (["prove", SMALL, "--deriver", "eli", "--goal", "A <= ex r. A"], "unsupported-goal"),
    (["prove", SMALL, "--goal", "B <= A"], "no-proof"),
])
def test_error_lines(capsys, tmp_path, argv: list[str], code: str) -> None:
    bare = tmp_path / "bare.thy"
    bare.write_text("A <= B\n")
    got, _, err = run(capsys, *[str(bare) if a == "BARE" else a for a in argv])
    assert got == 2
    assert err.startswith(f"error: {code}: ")
    assert err.count("\n") == 1


def test_budget_flag_and_environment(capsys, monkeypatch) -> None:
    got, _, err = run(capsys, "saturate", SMALL, "--max-vertices", "3")
    assert got == 2 and err.startswith("error: budget: ")
    monkeypatch.setenv("PROOFFORGE_MAX_VERTICES", "3")
    got, _, err = run(capsys, "saturate", SMALL)
    assert got == 2 and err.startswith("error: budget: ")


def test_saturate_json_shape(capsys) -> None:
    code, out, _ = run(capsys, "saturate", SMALL)
    assert code == 0
    data = json.loads(out)
    assert (len(data["vertices"]), len(data["edges"])) == (16, 20)
    assert out == json.dumps(data, sort_keys=True, indent=2) + "\n"


def test_dot_has_one_junction_per_edge(capsys) -> None:
    code, out, _ = run(capsys, "prove", SMALL, "--format", "dot")
    assert code == 0
    dot = out.rpartition("weight:")[0]
    assert dot.startswith("digraph") and dot.rstrip().endswith("}")
    assert dot.count("shape=point") == 2


def test_json_is_stable_across_hash_seeds(tmp_path) -> None:
    outs = set()
    for seed in ("0", "1", "4242"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        r = subprocess.run([sys.executable, "-m", "proofforge", "saturate", SMALL], env=env,
                           capture_output=True, text=True, check=True)
        outs.add(r.stdout)
    assert len(outs) == 1


def test_gen_round_trip(capsys, tmp_path) -> None:
    stem = str(tmp_path / "q")
    code, out, _ = run(capsys, "gen", "qbf", "E x A y : (x | !y) & x", "--out", stem)
    assert code == 0 and "threshold: 9" in out
    thy = stem + ".thy"
    assert run(capsys, "parse", thy)[0] == 0
    assert run(capsys, "saturate", thy, "-o", str(tmp_path / "q.json"))[0] == 0
    assert run(capsys, "decide", thy)[1].strip() == "yes"


def test_gen_tm_and_chain(capsys, tmp_path) -> None:
    stem = str(tmp_path / "m")
    assert run(capsys, "gen", "tm", str(DATA / "scan.tm"), "--word", "0", "--out", stem)[0] == 0
    assert run(capsys, "decide", stem + ".thy")[0] == 1
    stem = str(tmp_path / "c")
    assert run(capsys, "gen", "chain", SMALL, "--goal", "A <= B", "--out", stem)[0] == 0
    assert run(capsys, "decide", stem + ".thy")[0] == 0


def test_many_instances_in_parallel(capsys, tmp_path) -> None:
    files = []
    for i, text in enumerate(["E x : x", "A x : x", "A x : x | !x"]):
        stem = str(tmp_path / f"q{i}")
        run(capsys, "gen", "qbf", text, "--out", stem)
        files.append(stem + ".thy")
    code, out, _ = run(capsys, "decide", *files, "--jobs", "2")
    assert code == 1
    assert [line.rpartition(": ")[2] for line in out.splitlines()] == ["yes", "no", "yes"]


def test_selftest_is_seeded(capsys) -> None:
    code, first, _ = run(capsys, "selftest", "--seed", "3", "--runs", "20")
    assert code == 0
    assert run(capsys, "selftest", "--seed", "3", "--runs", "20")[1] == first
