"""Command-line front end: ``check``, ``gen``, ``selftest`` and ``bench``.

Exit status: 0 decided (or success), 1 usage or input error, 2 unknown
(search budget exhausted).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import bench as bench_mod
from . import selftest as selftest_mod
from .dispatch import dispatch
from .exact import SearchConfig, default_budget, solve_anc, solve_inj
from .oracle import CheckResult, EmbeddingKind, InstanceTooLarge, brute_force
from .poly import BudgetExceeded, check_anc_bounded, check_inj_height1, check_lca, check_std
from .reductions import ReductionKind, generate
from .textio import ParseError, parse_dimacs, parse_pattern, parse_tree, render_pattern, render_tree, witness_pairs
from .tree import Pattern, StructureError

EXIT_DECIDED, EXIT_INPUT, EXIT_UNKNOWN = 0, 1, 2


class UsageError(Exception):
    """Raised for requests that cannot be served; exit status 1."""


# -- check --------------------------------------------------------------------


def _read(path: Path, what: str) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {what} file {path}: {e.strerror}") from None
    except UnicodeDecodeError as e:
        raise UsageError(f"{what} file {path} is not UTF-8: {e.reason} at byte {e.start}") from None


def _load(path: Path, parser, what: str):
    text = _read(path, what)
    try:
        return parser(text)
    except ParseError as e:
        raise UsageError(f"{path}: {e}") from None
    except StructureError as e:
        raise UsageError(f"{path}: {e}") from None


def _poly(t: Pattern, p: Pattern, kind: EmbeddingKind, witness: bool) -> CheckResult:
    if kind is EmbeddingKind.STD or p.is_path():
        return check_std(t, p, witness=witness)
    if kind is EmbeddingKind.LCA or not p.has_desc_edges():
        return check_lca(t, p, witness=witness)
    if kind is EmbeddingKind.ANC:
        try:
            return check_anc_bounded(t, p, witness=witness)
        except BudgetExceeded as e:
            return CheckResult(None, algorithm="check_anc_bounded", kind=kind, notes={"budget": str(e)})
    if p.height <= 1:
        return check_inj_height1(t, p, witness=witness)
    raise UsageError("no polynomial algorithm covers weakly-injective embedding of this pattern "
                     "(height above 1 with descendant edges); use --algorithm exact or auto")


def decide(t: Pattern, p: Pattern, kind: EmbeddingKind, algorithm: str, witness: bool,
           budget: Optional[int]) -> CheckResult:
    search = SearchConfig(node_budget=budget if budget else default_budget(), find_witness=witness)
    if algorithm == "auto":
        return dispatch(t, p, kind, witness=witness, search=search)
    if algorithm == "oracle":
        try:
            return brute_force(t, p, kind)
        except InstanceTooLarge as e:
            raise UsageError(str(e)) from None
    if algorithm == "poly":
        return _poly(t, p, kind, witness)
    if kind is EmbeddingKind.INJ:
        return solve_inj(t, p, search)
    if kind is EmbeddingKind.ANC:
        return solve_anc(t, p, search)
    raise UsageError(f"exact search covers inj and anc only; {kind.value} is polynomial, "
                     "use --algorithm poly or auto")


def report(res: CheckResult, t: Pattern, p: Pattern, kind: EmbeddingKind, witness: bool) -> dict:
    pairs = witness_pairs(t, p, res.witness) if witness and res.verdict and res.witness else None
    return {
        "verdict": res.label,
        "kind": kind.value,
        "algorithm": res.algorithm,
        "witness": [{"pattern": a, "tree": b} for a, b in pairs] if pairs is not None else None,
        "stats": {"nodes_explored": res.nodes_explored, "elapsed_ms": round(res.elapsed * 1000.0, 3)},
    }


@dataclass(frozen=True)
class CheckJob:
    tree: str
    pattern: str
    kind: str
    algorithm: str
    witness: bool
    budget: Optional[int]


def run_job(job: CheckJob) -> tuple[int, dict]:
    """Decide one pair; returns (exit status, report or error record)."""
    try:
        t = _load(Path(job.tree), parse_tree, "tree")
        p = _load(Path(job.pattern), parse_pattern, "pattern")
        kind = EmbeddingKind(job.kind)
        res = decide(t, p, kind, job.algorithm, job.witness, job.budget)
    except UsageError as e:
        return EXIT_INPUT, {"error": str(e)}
    rep = report(res, t, p, kind, job.witness)
    return (EXIT_DECIDED if res.decided else EXIT_UNKNOWN), rep


def _plain(rep: dict, prefix: str = "") -> str:
    if "error" in rep:
        return f"{prefix}error: {rep['error']}"
    lines = [prefix + rep["verdict"]]
    for w in rep["witness"] or ():
        lines.append(f"{w['pattern']} -> {w['tree']}")
    return "\n".join(lines)


def _files(path: Path) -> list[Path]:
    return sorted(q for q in path.iterdir() if q.is_file() and not q.name.startswith("."))


def cmd_check(args) -> int:
    tree, pattern = Path(args.tree), Path(args.pattern)
    if args.budget is not None and args.budget <= 0:
        raise UsageError("--budget must be positive")
    batch = tree.is_dir() or pattern.is_dir()
    trees = _files(tree) if tree.is_dir() else [tree]
    patterns = _files(pattern) if pattern.is_dir() else [pattern]
    jobs = [CheckJob(str(a), str(b), args.kind, args.algorithm, args.witness, args.budget)
            for a in trees for b in patterns]
    if not batch:
        status, rep = run_job(jobs[0])
        if "error" in rep:
            print(f"error: {rep['error']}", file=sys.stderr)
        elif args.json:
            print(json.dumps(rep))
        else:
            print(_plain(rep))
        return status
    if not jobs:
        raise UsageError("batch mode found no input files")
    workers = args.jobs or min(len(jobs), os.cpu_count() or 1)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            outcomes = list(ex.map(run_job, jobs))
    else:
        outcomes = [run_job(j) for j in jobs]
    for job, (status, rep) in zip(jobs, outcomes):
        if args.json:
            print(json.dumps({"tree": job.tree, "pattern": job.pattern, **rep}))
        else:
            print(_plain(rep, f"{job.tree} {job.pattern} "))
    statuses = {s for s, _ in outcomes}
    for s in (EXIT_INPUT, EXIT_UNKNOWN):
        if s in statuses:
            return s
    return EXIT_DECIDED


# -- gen ----------------------------------------------------------------------


def cmd_gen(args) -> int:
    path = Path(args.cnf)
    text = _read(path, "CNF")
    try:
        phi = parse_dimacs(text)
    except (ParseError, ValueError) as e:
        raise UsageError(f"{path}: {e}") from None
    if phi.num_clauses == 0:
        raise UsageError(f"{path}: formula has no clauses")
    t, p = generate(ReductionKind(args.reduction), phi)
    try:
        Path(args.out_tree).write_text(render_tree(t) + "\n", encoding="utf-8")
        Path(args.out_pattern).write_text(render_pattern(p) + "\n", encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot write output: {e}") from None
    print(f"tree: {len(t)} nodes")
    print(f"pattern: {len(p)} nodes")
    return EXIT_DECIDED


# -- selftest -----------------------------------------------------------------


def cmd_selftest(args) -> int:
    def progress(r: selftest_mod.SuiteResult) -> None:
        print(r.summary(), flush=True)
        for line in r.info:
            print(f"  {line}")
        for msg in r.failures:
            print(f"  FAIL {msg}")
        if r.failure_count > len(r.failures):
            print(f"  ... {r.failure_count - len(r.failures)} more")

    results = selftest_mod.run_all(
        max_tree_nodes=args.max_tree_nodes,
        max_pattern_nodes=args.max_pattern_nodes,
        seed=args.seed,
        random_count=args.random_count,
        prop3_reading=args.prop3_reading,
        progress=progress,
    )
    if all(r.passed for r in results):
        print("all suites passed")
        return EXIT_DECIDED
    failed = ", ".join(r.name for r in results if not r.passed)
    print(f"failed suites: {failed}")
    return EXIT_INPUT


# -- bench --------------------------------------------------------------------


def _sizes(text: str) -> list[int]:
    try:
        sizes = [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"sizes must be integers, got {text!r}") from None
    if not sizes or any(s <= 0 for s in sizes):
        raise argparse.ArgumentTypeError("sizes must be positive")
    return sizes


def cmd_bench(args) -> int:
    rows = bench_mod.run(args.suite, args.sizes, args.seed)
    if args.json:
        print(json.dumps({"suite": args.suite, "rows": rows}, indent=2))
    else:
        print(bench_mod.format_table(rows))
    return EXIT_DECIDED


# -- entry point --------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="treembed", description="Tree pattern embedding checker.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="decide whether a pattern embeds into a tree")
    c.add_argument("--kind", required=True, choices=[k.value for k in EmbeddingKind])
    c.add_argument("--tree", required=True, help="tree file, or a directory for batch mode")
    c.add_argument("--pattern", required=True, help="pattern file, or a directory for batch mode")
    c.add_argument("--algorithm", default="auto", choices=["auto", "oracle", "poly", "exact"])
    c.add_argument("--witness", action="store_true", help="print the embedding found")
    c.add_argument("--json", action="store_true", help="print a JSON report")
    c.add_argument("--budget", type=int, help="search budget (partial assignments)")
    c.add_argument("--jobs", type=int, default=0, help="batch worker processes (default: CPUs)")
    c.set_defaults(func=cmd_check)

    g = sub.add_parser("gen", help="generate a reduction instance from a DIMACS formula")
    g.add_argument("--reduction", required=True, choices=[r.value for r in ReductionKind])
    g.add_argument("--cnf", required=True)
    g.add_argument("--out-tree", required=True)
    g.add_argument("--out-pattern", required=True)
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("selftest", help="run the consistency suites")
    s.add_argument("--max-tree-nodes", type=int, default=5)
    s.add_argument("--max-pattern-nodes", type=int, default=4)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--random-count", type=int, default=1000)
    s.add_argument("--prop3-reading", choices=["max", "min"], default="max",
                   help="counting rule judged by the height-one suite")
    s.set_defaults(func=cmd_selftest)

    b = sub.add_parser("bench", help="timing suites")
    b.add_argument("--suite", required=True, choices=list(bench_mod.SUITES))
    b.add_argument("--sizes", type=_sizes, help="comma-separated sizes")
    b.add_argument("--json", action="store_true")
    b.add_argument("--seed", type=int, default=0)
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
