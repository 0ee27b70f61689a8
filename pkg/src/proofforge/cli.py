"""Command-line front end.

Exit codes: 0 for success (or "yes" from ``decide``), 1 for "no" or a failed
selftest, 2 for every error. Errors go to stderr as ``error: <code>: <message>``.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import derivers, emit, generators, optimizer
from .logic import Gci, LogicError, Theory, normalize_eli, parse_axiom, parse_theory
from .measures import LogDepth, MeasureUndefined, evaluate, format_weight, measure_by_name, parse_weight, size

ERRORS = (LogicError, derivers.BudgetExceeded, optimizer.NoProof, optimizer.InvariantViolation,
          optimizer.EnumerationCap, MeasureUndefined)


class UsageError(Exception):
    code = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


# --------------------------------------------------------------------------- inputs


class Instance:
    """A theory file plus the goal, measure and threshold that go with it."""

    def __init__(self, path: str, goal: str | None, measure: str | None, bound: str | None) -> None:
        self.path = Path(path)
        try:
            text = self.path.read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from None
        self.theory = parse_theory(text)
        side = self._sidecar()
        goal = goal or side.get("goal")
        self.goal = parse_axiom(goal, 1, "ELI") if goal else None
        self.measure = measure or side.get("measure")
        b = bound if bound is not None else side.get("threshold")
        self.bound = parse_weight(b) if b is not None else None

    def _sidecar(self) -> dict:
        name = self.path.name
        stem = name[:-4] if name.endswith(".thy") else name
        side = self.path.with_name(stem + ".inst.json")
        return generators.load_sidecar(side) if side.exists() else {}

    def need_goal(self) -> Gci:
        if self.goal is None:
            raise UsageError(f"no goal for {self.path}: pass --goal or provide a .inst.json sidecar")
        return self.goal

    def prepared(self, deriver: str | None) -> tuple[str, Theory, Gci]:
        """Pick the deriver and bring the theory into the shape it expects."""
        goal = self.need_goal()
        kind = (deriver or ("elk" if self.theory.dialect == "EL" else "eli")).lower()
        if kind == "elk":
            return "EL", self.theory, goal
        if kind != "eli":
            raise UsageError(f"unknown deriver {deriver!r}")
        normal, _ = normalize_eli(Theory(self.theory.axioms, "ELI"))
        return "ELI", normal, goal


def _budgets(args) -> dict:
    return {"max_vertices": args.max_vertices} if args.max_vertices else {}


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _render(obj, fmt: str, is_axiom=None) -> str:
    return emit.to_dot(obj, is_axiom) if fmt == "dot" else emit.to_json(obj, is_axiom)


def _fmt_for(path: str | None, fmt: str | None) -> str:
    if fmt:
        return fmt
    return "dot" if path and path.endswith(".dot") else "json"


# --------------------------------------------------------------------------- commands


def cmd_parse(args) -> int:
    inst = Instance(args.file, args.goal, None, None)
    th = inst.theory
    print(f"ok: {len(th)} axioms, dialect {th.dialect}, {len(th.names())} concept names")
    if inst.goal is not None:
        print(f"goal: {inst.goal.render()}")
    if args.normalize:
        normal, _ = normalize_eli(Theory(th.axioms, "ELI"))
        sys.stdout.write(normal.render())
    return 0


def cmd_saturate(args) -> int:
    inst = Instance(args.file, args.goal, None, None)
    kind, th, goal = inst.prepared(args.deriver)
    d = derivers.materialize(kind, th, goal, **_budgets(args))
    _write(_render(d, _fmt_for(args.output, args.format)), args.output)
    if args.output:
        print(f"vertices: {len(d.graph)}, edges: {len(d.graph.edges)}")
    return 0


def cmd_prove(args) -> int:
    inst = Instance(args.file, args.goal, args.measure, None)
    kind, th, goal = inst.prepared(args.deriver)
    name = inst.measure or "depth"
    d = derivers.materialize(kind, th, goal, **_budgets(args))
    if name == "size":
        res = optimizer.brute_force_optimal(d, "size")
        w = size(res.proof)
        shown = None
    else:
        m = measure_by_name(name)
        res = optimizer.dijkstra_optimal(d, m, debug=args.debug_invariants)
        w = evaluate(m, res.proof)
        if w != res.weight:
            raise optimizer.InvariantViolation(f"stored weight {res.weight} differs from evaluation {w}")
        shown = m.display(w) if isinstance(m, LogDepth) else None
    text = _render(res.proof, _fmt_for(args.output, args.format), lambda v: res.proof.label(v) in d.theory)
    _write(text, args.output)
    print(f"weight: {format_weight(w)}")
    if shown is not None:
        print(f"log2: {shown}")
    return 0


def _decide_one(path: str, args) -> tuple[bool, str, dict]:
    inst = Instance(path, args.goal, args.measure, args.bound)
    kind, th, goal = inst.prepared(args.deriver)
    name = inst.measure or "depth"
    if inst.bound is None:
        raise UsageError(f"no bound for {path}: pass --bound or provide a .inst.json sidecar")
    view = derivers.lazy_view(kind, th, goal, **_budgets(args))
    q = inst.bound
    if name == "depth":
        res = optimizer.decide_depth_leq(view, goal, q)
    elif name == "logdepth":
        res = optimizer.decide_depth_leq(view, goal, LogDepth.depth_cap(q))
    elif name == "treesize":
        res = optimizer.decide_treesize_leq(view, goal, q, debug_invariants=args.debug_invariants)
    else:
        raise UsageError(f"decide supports depth, logdepth and treesize, not {name!r}")
    wit = ""
    if res.holds and args.witness:
        fmt = _fmt_for(args.witness, None)
        wit = _render(res.witness, fmt, lambda v: res.witness.label(v) in th)
    return res.holds, wit, {k: v for k, v in res.stats.items() if isinstance(v, (int, str))}


def _decide_job(job: tuple[str, argparse.Namespace]):
    path, args = job
    try:
        return ("ok",) + _decide_one(path, args)
    except (*ERRORS, UsageError) as exc:
        return ("error", exc.code, str(exc))


def cmd_decide(args) -> int:
    jobs = [(f, args) for f in args.files]
    if args.witness and len(jobs) > 1:
        raise UsageError("--witness needs a single input file")
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_decide_job, jobs))
    else:
        results = [_decide_job(j) for j in jobs]
    worst = 0
    for (path, _), r in zip(jobs, results):
        prefix = f"{path}: " if len(jobs) > 1 else ""
        if r[0] == "error":
            print(f"error: {r[1]}: {prefix}{r[2]}", file=sys.stderr)
            worst = 2
            continue
        holds, wit, _stats = r[1], r[2], r[3]
        print(prefix + ("yes" if holds else "no"))
        if wit:
            Path(args.witness).write_text(wit)
        if not holds:
            worst = max(worst, 1)
    return worst


def cmd_gen(args) -> int:
    if args.kind == "chain":
        inst_in = Instance(args.source, args.goal, None, None)
        goal = inst_in.need_goal()
        made = generators.pad_depth_chain(inst_in.theory, goal.lhs.name, goal.rhs.name)
    elif args.kind == "deep":
        th, goal = generators.deep_eli_theory(int(args.source))
        made = generators.ReductionInstance(th, goal, Fraction(2 ** int(args.source)), "depth",
                                            {"construction": "deep"})
    elif args.kind == "qbf":
        made = generators.qbf_to_eli(generators.parse_qbf(args.source))
    else:
        try:
            machine = generators.parse_tm(Path(args.source).read_text())
        except OSError as exc:
            raise UsageError(f"cannot read {args.source}: {exc.strerror}") from None
        made = generators.tm_to_eli(machine, tuple(args.word or ""), padding=args.padding)
    thy, side = made.write(args.out)
    print(f"wrote {thy} and {side}")
    print(f"goal: {made.goal.render()}, threshold: {format_weight(made.threshold)}, measure: {made.measure_name}")
    return 0


def cmd_selftest(args) -> int:
    from .selftest import run_suites

    failures = run_suites(seed=args.seed, runs=args.runs, jobs=args.jobs, out=sys.stdout)
    return 1 if failures else 0


# --------------------------------------------------------------------------- parser


def _measure(value: str) -> str:
    if value not in ("depth", "treesize", "logdepth", "size"):
        raise argparse.ArgumentTypeError("choose from depth, treesize, logdepth, size")
    return value


def _bound(value: str) -> str:
    try:
        parse_weight(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return value


def _positive(value: str) -> int:
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {value!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="proofforge", description="Optimal proofs over EL/ELI derivation structures.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(sp, multi: bool = False) -> None:
        if multi:
            sp.add_argument("files", nargs="+", metavar="FILE")
        else:
            sp.add_argument("file", metavar="FILE")
        sp.add_argument("--goal", help='goal sentence, e.g. "A <= B"')
        sp.add_argument("--deriver", choices=["elk", "eli"])
        sp.add_argument("--max-vertices", type=_positive, help="saturation budget (env PROOFFORGE_MAX_VERTICES)")

    sp = sub.add_parser("parse", help="validate a theory file")
    sp.add_argument("file", metavar="FILE")
    sp.add_argument("--goal")
    sp.add_argument("--normalize", action="store_true", help="print the ELI normal form")
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("saturate", help="emit the derivation structure")
    common(sp)
    sp.add_argument("--format", choices=["json", "dot"])
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_saturate)

    sp = sub.add_parser("prove", help="emit an optimal proof and its weight")
    common(sp)
    sp.add_argument("--measure", type=_measure)
    sp.add_argument("--format", choices=["json", "dot"])
    sp.add_argument("-o", "--output")
    sp.add_argument("--debug-invariants", action="store_true")
    sp.set_defaults(func=cmd_prove)

    sp = sub.add_parser("decide", help="is there a proof within the bound? exit 0 yes, 1 no")
    common(sp, multi=True)
    sp.add_argument("--measure", type=_measure)
    sp.add_argument("--bound", type=_bound)
    sp.add_argument("--bound-encoding", choices=["unary", "binary"], help="label only, no effect")
    sp.add_argument("--witness", help="write a witness proof (.json or .dot)")
    sp.add_argument("--debug-invariants", action="store_true")
    sp.add_argument("--jobs", type=_positive, default=1)
    sp.set_defaults(func=cmd_decide)

    sp = sub.add_parser("gen", help="write a reduction instance (.thy plus .inst.json)")
    sp.add_argument("kind", choices=["chain", "deep", "qbf", "tm"])
    sp.add_argument("source", help="theory file (chain), bit count (deep), formula (qbf) or machine file (tm)")
    sp.add_argument("--goal", help="goal for chain padding")
    sp.add_argument("--word", help="input word for tm")
    sp.add_argument("--padding", choices=["chain", "deep"], default="chain", help="tm padding")
    sp.add_argument("--out", required=True, help="output stem")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("selftest", help="run the randomized invariant suites")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--runs", type=_positive, default=200)
    sp.add_argument("--jobs", type=_positive, default=1)
    sp.set_defaults(func=cmd_selftest)
    return p


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (*ERRORS, UsageError) as exc:
        msg = " ".join(str(exc).split())
        print(f"error: {exc.code}: {msg}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return 2
    except RecursionError:
        print("error: budget: recursion too deep", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
