"""Timing suites for the polynomial checkers and the exact solvers."""
from __future__ import annotations

import random
import time
from typing import Optional, Sequence

from .exact import SearchConfig, solve_anc, solve_inj
from .instances import planted_pattern, random_pattern, random_tree
from .oracle import EmbeddingKind, brute_force
from .poly import check_anc_bounded, check_lca, check_std
from .reductions import ReductionKind, generate, sat_brute_force
from .textio import CnfFormula

SUITES = ("lca-scale", "anc-bounded", "reduction-growth")

DEFAULT_SIZES = {
    "lca-scale": (1_000, 10_000, 100_000),
    "anc-bounded": (1_000, 10_000),
    "reduction-growth": (2, 3, 4, 5),
}


def _timed(fn, *args, **kw):
    started = time.perf_counter()
    res = fn(*args, **kw)
    return res, (time.perf_counter() - started) * 1000.0


def lca_scale(sizes: Sequence[int], seed: int = 0) -> list[dict]:
    """Random trees against planted patterns of up to 1000 nodes
    (``size // 100`` for small trees), lca and std checkers.  At the
    smallest size a pattern of at most 6 nodes is also spot-checked
    against brute force."""
    rng = random.Random(seed)
    rows = []
    for i, n in enumerate(sorted(sizes)):
        t = random_tree(rng, n)
        p = planted_pattern(rng, t, min(1000, max(2, n // 100)))
        lca, lca_ms = _timed(check_lca, t, p)
        std, std_ms = _timed(check_std, t, p)
        row = {
            "tree_nodes": n, "pattern_nodes": len(p),
            "lca": lca.label, "lca_ms": round(lca_ms, 1),
            "std": std.label, "std_ms": round(std_ms, 1),
        }
        if i == 0:
            small_t = random_tree(rng, min(n, 10))
            small_p = random_pattern(rng, 5, ("a", "*"))
            row["spot_check"] = (
                check_lca(small_t, small_p).verdict
                == brute_force(small_t, small_p, EmbeddingKind.LCA, force=True).verdict
            )
        rows.append(row)
    return rows


def anc_bounded(sizes: Sequence[int], seed: int = 0, pattern_nodes: int = 1000) -> list[dict]:
    """Degree-2 planted and random patterns on random trees."""
    rng = random.Random(seed)
    rows = []
    for n in sorted(sizes):
        t = random_tree(rng, n)
        for family, p in (
            ("planted", planted_pattern(rng, t, pattern_nodes, max_degree=2)),
            ("random", random_pattern(rng, min(pattern_nodes, n), ("a", "b", "*", "*"), max_degree=2)),
        ):
            res, ms = _timed(check_anc_bounded, t, p)
            rows.append({
                "tree_nodes": n, "pattern": family, "pattern_nodes": len(p),
                "anc": res.label, "anc_ms": round(ms, 1), "explored": res.nodes_explored,
            })
    return rows


def _growth_formula(rng: random.Random, n: int) -> CnfFormula:
    """A random 3-CNF with ``n`` variables and ``n`` clauses."""
    clauses = []
    for _ in range(n):
        vs = rng.sample(range(1, n + 1), min(3, n))
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    return CnfFormula(n, clauses)


def reduction_growth(
    sizes: Sequence[int], seed: int = 0, repeats: int = 3, budget: Optional[int] = None
) -> list[dict]:
    """Exact solvers on reduction instances with n = k growing."""
    rng = random.Random(seed)
    cfg = SearchConfig() if budget is None else SearchConfig(node_budget=budget)
    rows = []
    for n in sorted(sizes):
        for rk, solver in ((ReductionKind.INJ, solve_inj), (ReductionKind.ANC, solve_anc),
                           (ReductionKind.INJ_H2, solve_inj)):
            total_ms, explored, agree = 0.0, 0, True
            for _ in range(repeats):
                phi = _growth_formula(rng, n)
                t, p = generate(rk, phi)
                res, ms = _timed(solver, t, p, cfg)
                total_ms += ms
                explored += res.nodes_explored
                if res.verdict is not None and res.verdict != sat_brute_force(phi):
                    agree = False
            rows.append({
                "n": n, "k": n, "reduction": rk.value, "tree_nodes": len(t), "pattern_nodes": len(p),
                "mean_ms": round(total_ms / repeats, 2), "mean_explored": explored // repeats,
                "agrees_with_sat": agree,
            })
    return rows


def run(suite: str, sizes: Optional[Sequence[int]] = None, seed: int = 0) -> list[dict]:
    if suite not in SUITES:
        raise ValueError(f"unknown bench suite {suite!r}")
    sizes = tuple(sizes) if sizes else DEFAULT_SIZES[suite]
    if suite == "lca-scale":
        return lca_scale(sizes, seed)
    if suite == "anc-bounded":
        return anc_bounded(sizes, seed)
    return reduction_growth(sizes, seed)


def format_table(rows: list[dict]) -> str:
    if not rows:
        return ""
    cols = list(dict.fromkeys(k for r in rows for k in r))
    cells = [[str(r.get(c, "")) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines)
