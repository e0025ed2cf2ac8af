"""Complete backtracking search for weakly-injective and ancestor-preserving
embeddings, the two NP-complete cases."""
from __future__ import annotations

import os
import sys
import time
from dataclasses import dataclass, field

from .oracle import CheckResult, EmbeddingKind
from .tree import WILDCARD, EdgeKind, Pattern

DEFAULT_NODE_BUDGET = 10**7

PRUNE_RULES = frozenset({"size", "height", "degree", "symmetry", "branch_skip"})


def default_budget() -> int:
    env = os.environ.get("TREEMBED_BUDGET")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return DEFAULT_NODE_BUDGET


@dataclass(frozen=True)
class SearchConfig:
    """``order`` is ``"size_desc"`` (largest pattern subtree first) or
    ``"given"`` (children in stored order).  ``prune`` selects which
    accelerating rules are active; none of them changes a verdict."""

    node_budget: int = field(default_factory=default_budget)
    order: str = "size_desc"
    find_witness: bool = True
    prune: frozenset = PRUNE_RULES

    def __post_init__(self):
        if self.node_budget <= 0:
            raise ValueError("node_budget must be positive")
        if self.order not in ("size_desc", "given"):
            raise ValueError(f"unknown child order {self.order!r}")
        unknown = set(self.prune) - PRUNE_RULES
        if unknown:
            raise ValueError(f"unknown prune rules {sorted(unknown)}")

    def without(self, rule: str) -> "SearchConfig":
        return SearchConfig(self.node_budget, self.order, self.find_witness, self.prune - {rule})


class _OutOfBudget(Exception):
    pass


class _Fenwick:
    def __init__(self, n: int):
        self.n = n
        self.tree = [0] * (n + 1)

    def add(self, i: int, delta: int) -> None:
        i += 1
        while i <= self.n:
            self.tree[i] += delta
            i += i & -i

    def prefix(self, i: int) -> int:
        """Sum over positions < i."""
        s = 0
        while i > 0:
            s += self.tree[i]
            i -= i & -i
        return s


def assignment_order(p: Pattern, order: str = "size_desc") -> list[int]:
    """Preorder with each node's children ranked by subtree size
    (descending); identical siblings end up adjacent."""
    if order == "given":
        return list(p.preorder)
    canon = p.canonical_forms()
    out = []
    stack = [p.root]
    while stack:
        x = stack.pop()
        out.append(x)
        kids = sorted(p.children[x], key=lambda c: (-p.size[c], p.edge[c].value + canon[c], c))
        stack.extend(reversed(kids))
    return out


def _twins(p: Pattern, order: list[int]) -> dict[int, int]:
    """Map a node to its immediately preceding identical sibling, if any."""
    canon = p.canonical_forms()
    twin = {}
    last_child: dict[int, int] = {}
    for m in order:
        par = p.parent[m]
        if par < 0:
            continue
        prev = last_child.get(par)
        if prev is not None and p.edge[prev] is p.edge[m] and canon[prev] == canon[m]:
            twin[m] = prev
        last_child[par] = m
    return twin


def _solve(t: Pattern, p: Pattern, kind: EmbeddingKind, cfg: SearchConfig, name: str) -> CheckResult:
    started = time.perf_counter()

    def result(verdict, h=None, explored=0, **notes):
        return CheckResult(verdict, h, name, explored, time.perf_counter() - started, kind, notes)

    if len(p) > len(t):
        return result(False, pruned="size")
    if p.labels[p.root] != WILDCARD and p.labels[p.root] != t.labels[t.root]:
        return result(False)

    # tree in preorder-position space
    n = len(t)
    node_at = t.preorder
    pos = t.pre
    tlab = [t.labels[v] for v in node_at]
    tsize = [t.size[v] for v in node_at]
    theight = [t.sub_height[v] for v in node_at]
    tkids = [sorted(pos[c] for c in t.children[v]) for v in node_at]

    order = assignment_order(p, cfg.order)
    twin = _twins(p, order) if "symmetry" in cfg.prune else {}
    ppre, psize = p.pre, p.size
    n_child_edges = [sum(1 for c in p.children[m] if p.edge[c] is EdgeKind.CHILD) for m in range(len(p))]
    anc = kind is EmbeddingKind.ANC
    use_size = "size" in cfg.prune
    use_height = "height" in cfg.prune
    use_degree = "degree" in cfg.prune
    use_skip = anc and "branch_skip" in cfg.prune
    budget = cfg.node_budget

    h = [-1] * len(p)
    used = [False] * n
    fen = _Fenwick(n)
    assigned: list[int] = []  # pattern nodes in assignment order
    explored = 0

    def admit(m: int, y: int) -> bool:
        if used[y]:
            return False
        lab = p.labels[m]
        if lab != WILDCARD and lab != tlab[y]:
            return False
        if use_degree and n_child_edges[m] > len(tkids[y]):
            return False
        if use_height and p.sub_height[m] > theight[y]:
            return False
        if use_size and p.size[m] > tsize[y] - (fen.prefix(y + tsize[y]) - fen.prefix(y)):
            return False
        tw = twin.get(m)
        if tw is not None and y < h[tw]:
            return False
        if anc:
            end_y = y + tsize[y]
            for m2 in assigned:
                z = h[m2]
                t_yz = y <= z < end_y
                t_zy = z <= y < z + tsize[z]
                p_mm2 = ppre[m] <= ppre[m2] < ppre[m] + psize[m]
                p_m2m = ppre[m2] <= ppre[m] < ppre[m2] + psize[m2]
                if t_yz != p_mm2 or t_zy != p_m2m:
                    return False
        return True

    def blocking_branch(m: int, y: int) -> int:
        """End of the subtree of an assigned image that contains ``y`` but
        whose pattern node is not an ancestor of ``m``; -1 if none."""
        for m2 in assigned:
            z = h[m2]
            if z < y < z + tsize[z] and not ppre[m2] <= ppre[m] < ppre[m2] + psize[m2]:
                return z + tsize[z]
        return -1

    def place(i: int) -> bool:
        nonlocal explored
        if i == len(order):
            return True
        m = order[i]
        x = h[p.parent[m]]
        if p.edge[m] is EdgeKind.CHILD:
            cands = iter(tkids[x])
        else:
            cands = None
            y = x + 1
            end = x + tsize[x]
        while True:
            if cands is not None:
                y = next(cands, -1)
                if y < 0:
                    return False
            else:
                if y >= end:
                    return False
            if admit(m, y):
                explored += 1
                if explored > budget:
                    raise _OutOfBudget
                h[m] = y
                used[y] = True
                fen.add(y, 1)
                assigned.append(m)
                if place(i + 1):
                    return True
                assigned.pop()
                fen.add(y, -1)
                used[y] = False
                h[m] = -1
            elif cands is None and use_skip:
                skip = blocking_branch(m, y)
                if skip > y:
                    y = skip
                    continue
            if cands is None:
                y += 1

    h[p.root] = 0
    used[0] = True
    fen.add(0, 1)
    assigned.append(p.root)
    explored = 1
    limit = sys.getrecursionlimit()
    if len(p) + 100 > limit:
        sys.setrecursionlimit(len(p) + 100)
    try:
        found = place(1)
    except _OutOfBudget:
        return result(None, explored=explored, budget=budget)
    finally:
        sys.setrecursionlimit(limit)
    witness = tuple(node_at[y] for y in h) if found and cfg.find_witness else None
    return result(found, witness, explored)


def solve_inj(t: Pattern, p: Pattern, cfg: SearchConfig | None = None) -> CheckResult:
    """Decide weakly-injective embedding by exhaustive search.

    Returns verdict ``None`` if ``cfg.node_budget`` partial assignments are
    used up first.
    """
    return _solve(t, p, EmbeddingKind.INJ, cfg or SearchConfig(), "solve_inj")


def solve_anc(t: Pattern, p: Pattern, cfg: SearchConfig | None = None) -> CheckResult:
    """Decide ancestor-preserving embedding by exhaustive search."""
    return _solve(t, p, EmbeddingKind.ANC, cfg or SearchConfig(), "solve_anc")
