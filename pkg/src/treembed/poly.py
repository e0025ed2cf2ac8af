"""Polynomial-time embedding checkers.

All table computations run in *preorder position* space: tree node ``v`` is
handled as ``pos[v]``, so the subtree of position ``x`` is the contiguous
range ``x .. x + size[x] - 1`` and "has a (proper) descendant in S" is a
prefix-sum difference.  A table ``phi[m]`` is a boolean array over positions.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .matching import hopcroft_karp
from .oracle import CheckResult, EmbeddingKind
from .tree import WILDCARD, EdgeKind, Pattern

# Hall's condition is checked vectorised over all tree nodes for up to this
# many pattern children; wider nodes fall back to per-node Hopcroft-Karp.
HALL_MAX_CHILDREN = 6

DEFAULT_ANC_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    def __init__(self, message: str, estimate: int = 0):
        super().__init__(message)
        self.estimate = estimate


class HeightTooLarge(ValueError):
    pass


class Height1Disagreement(AssertionError):
    pass


def _nonzero(s: np.ndarray) -> np.ndarray:
    # same as np.flatnonzero for 1-d input, without the wrapper overhead
    return s.nonzero()[0]


class TreeIndex:
    """Numpy view of a tree in preorder-position space."""

    def __init__(self, t: Pattern):
        self.tree = t
        n = len(t)
        self.n = n
        self.order = np.asarray(t.preorder, dtype=np.int64)
        self.pos = np.asarray(t.pre, dtype=np.int64)
        par = np.asarray(t.parent, dtype=np.int64)[self.order]
        self.parent = np.where(par >= 0, self.pos[np.maximum(par, 0)], -1)
        self.size = np.asarray(t.size, dtype=np.int64)[self.order]
        self.depth = np.asarray(t.depth, dtype=np.int64)[self.order]
        self.degree = np.bincount(self.parent[1:], minlength=n)
        # CSR children lists; a stable sort by parent keeps Dewey order
        kids = np.argsort(self.parent[1:], kind="stable") + 1
        self.child_idx = kids
        self.child_ptr = np.concatenate(([0], np.cumsum(self.degree)))
        self.arange = np.arange(n, dtype=np.int64)
        self.sub_end = self.arange + self.size
        self.size_list = self.size.tolist()
        codes: dict[str, int] = {}
        self.codes = codes
        self.label_code = np.fromiter(
            (codes.setdefault(t.labels[v], len(codes)) for v in t.preorder), dtype=np.int64, count=n
        )
        self._masks: dict[str, np.ndarray] = {}

    @classmethod
    def of(cls, t: Pattern) -> "TreeIndex":
        """Shared index for ``t``, built on first use."""
        ti = t._derived.get(cls)
        if ti is None:
            ti = t._derived[cls] = cls(t)
        return ti

    def label_mask(self, label: str) -> np.ndarray:
        """Read-only mask of positions whose label matches ``label``."""
        m = self._masks.get(label)
        if m is None:
            if label == WILDCARD:
                m = np.ones(self.n, dtype=bool)
            elif label in self.codes:
                m = self.label_code == self.codes[label]
            else:
                m = np.zeros(self.n, dtype=bool)
            m.flags.writeable = False
            self._masks[label] = m
        return m

    def kids(self, x: int) -> np.ndarray:
        return self.child_idx[self.child_ptr[x] : self.child_ptr[x + 1]]

    def has_child_in(self, s: np.ndarray) -> np.ndarray:
        out = np.zeros(self.n, dtype=bool)
        hit = _nonzero(s[1:]) + 1
        out[self.parent[hit]] = True
        return out

    def count_children_in(self, s: np.ndarray) -> np.ndarray:
        hit = _nonzero(s[1:]) + 1
        return np.bincount(self.parent[hit], minlength=self.n)

    def count_proper_desc_in(self, s: np.ndarray) -> np.ndarray:
        cs = self._prefix(s)
        return cs[self.sub_end] - cs[self.arange + 1]

    def _prefix(self, s: np.ndarray) -> np.ndarray:
        cs = np.empty(self.n + 1, dtype=np.int64)
        cs[0] = 0
        s.cumsum(dtype=np.int64, out=cs[1:])
        return cs

    def count_in_subtree(self, s: np.ndarray) -> np.ndarray:
        """Per position: how many positions of ``s`` lie in its subtree."""
        cs = self._prefix(s)
        return cs[self.sub_end] - cs[self.arange]

    def has_desc_in(self, s: np.ndarray) -> np.ndarray:
        """Reflexive: some member of ``s`` in the subtree (self included)."""
        return self.count_in_subtree(s) > 0

    def has_proper_desc_in(self, s: np.ndarray) -> np.ndarray:
        return self.count_proper_desc_in(s) > 0

    def shallowest_in(self, s: np.ndarray, lo: int, hi: int) -> int:
        """Least-depth member of ``s`` in positions ``lo..hi-1``; ties go to
        the smallest position (Dewey-lexicographic least)."""
        cand = _nonzero(s[lo:hi]) + lo
        return int(cand[np.argmin(self.depth[cand])])

    def node(self, x) -> int:
        return int(self.order[x])

    def comparable(self, a: int, b: int) -> bool:
        if a <= b:
            return b < a + self.size[a]
        return a < b + self.size[b]


def _result(verdict, witness, algorithm, started, explored=0, **notes) -> CheckResult:
    return CheckResult(
        verdict=verdict,
        witness=witness,
        algorithm=algorithm,
        nodes_explored=explored,
        elapsed=time.perf_counter() - started,
        notes=notes,
    )


def _to_nodes(ti: TreeIndex, h_pos: list[int]) -> tuple[int, ...]:
    return tuple(ti.node(x) for x in h_pos)


# -- standard embeddings ------------------------------------------------------


def std_tables(ti: TreeIndex, p: Pattern) -> list[np.ndarray]:
    phi: list[np.ndarray] = [None] * len(p)  # type: ignore[list-item]
    for m in reversed(p.preorder):
        mask = ti.label_mask(p.labels[m])
        kids = p.children[m]
        if kids:
            mask = mask.copy()
            for c in kids:
                if p.edge[c] is EdgeKind.CHILD:
                    mask &= ti.has_child_in(phi[c])
                else:
                    mask &= ti.has_proper_desc_in(phi[c])
        phi[m] = mask
    return phi


def check_std(t: Pattern, p: Pattern, *, witness: bool = True) -> CheckResult:
    """Standard (non-injective) embedding via a bottom-up match table."""
    started = time.perf_counter()
    ti = TreeIndex.of(t)
    phi = std_tables(ti, p)
    ok = bool(phi[p.root][0])
    h = None
    if ok and witness:
        h_pos = [0] * len(p)
        for m in p.preorder:
            x = h_pos[m]
            for c in p.children[m]:
                if p.edge[c] is EdgeKind.CHILD:
                    ch = ti.kids(x)
                    h_pos[c] = int(ch[np.argmax(phi[c][ch])])
                else:
                    h_pos[c] = ti.shallowest_in(phi[c], x + 1, x + int(ti.size[x]))
        h = _to_nodes(ti, h_pos)
    return _result(ok, h, "check_std", started)


# -- lca-preserving embeddings ------------------------------------------------


def _edge_compat(ti: TreeIndex, p: Pattern, phi, c: int) -> np.ndarray:
    """Positions a tree child may take for pattern child ``c``: itself in
    phi[c] for a child edge, or with a phi[c] member in its subtree for a
    descendant edge."""
    if p.edge[c] is EdgeKind.CHILD:
        return phi[c]
    return ti.has_desc_in(phi[c])


def _matching_adj(ti: TreeIndex, compat: list[np.ndarray], x: int):
    ch = ti.kids(x)
    adj = [_nonzero(cp[ch]).tolist() for cp in compat]
    return ch, adj


def lca_tables(ti: TreeIndex, p: Pattern, *, hall_max: int = HALL_MAX_CHILDREN) -> list[np.ndarray]:
    phi: list[np.ndarray] = [None] * len(p)  # type: ignore[list-item]
    for m in reversed(p.preorder):
        mask = ti.label_mask(p.labels[m])
        kids = p.children[m]
        k = len(kids)
        if k:
            mask = mask & (ti.degree >= k)
            compat = [_edge_compat(ti, p, phi, c) for c in kids]
            for cp in compat:
                if not mask.any():
                    break
                mask &= ti.has_child_in(cp)
            if k >= 2 and mask.any():
                if k <= hall_max:
                    _hall_filter(ti, compat, mask)
                else:
                    for x in _nonzero(mask):
                        _, adj = _matching_adj(ti, compat, int(x))
                        ml = hopcroft_karp(adj, int(ti.degree[x]))
                        if min(ml) < 0:
                            mask[x] = False
        phi[m] = mask
    return phi


def _hall_filter(ti: TreeIndex, compat: list[np.ndarray], mask: np.ndarray) -> None:
    """Clear positions in ``mask`` whose children admit no matching that
    saturates all pattern children (Hall: |N(S)| >= |S| for every S)."""
    k = len(compat)
    sel = _nonzero(mask[ti.parent[1:]]) + 1
    if not len(sel):
        mask[:] = False
        return
    owners = ti.parent[sel]
    bits = np.zeros(len(sel), dtype=np.int64)
    for i, cp in enumerate(compat):
        bits |= cp[sel].astype(np.int64) << i
    for r in range(2, k + 1):
        for subset in combinations(range(k), r):
            s = sum(1 << i for i in subset)
            cnt = np.bincount(owners, weights=(bits & s) != 0, minlength=ti.n)
            mask &= cnt >= r


def check_lca(t: Pattern, p: Pattern, *, witness: bool = True, hall_max: int = HALL_MAX_CHILDREN) -> CheckResult:
    """lca-preserving embedding: bottom-up candidate sets, each internal
    pattern node checked by a bipartite matching between its children and
    the tree node's children."""
    started = time.perf_counter()
    if len(p) > len(t):
        return _result(False, None, "check_lca", started, pruned="size")
    ti = TreeIndex.of(t)
    phi = lca_tables(ti, p, hall_max=hall_max)
    ok = bool(phi[p.root][0])
    h = None
    if ok and witness:
        h_pos = [0] * len(p)
        for m in p.preorder:
            kids = p.children[m]
            if not kids:
                continue
            x = h_pos[m]
            compat = [_edge_compat(ti, p, phi, c) for c in kids]
            ch, adj = _matching_adj(ti, compat, x)
            ml = hopcroft_karp(adj, len(ch))
            for c, j in zip(kids, ml):
                y = int(ch[j])
                if p.edge[c] is EdgeKind.CHILD:
                    h_pos[c] = y
                else:
                    h_pos[c] = ti.shallowest_in(phi[c], y, y + int(ti.size[y]))
        h = _to_nodes(ti, h_pos)
    return _result(ok, h, "check_lca", started)


# -- ancestor-preserving embeddings, bounded degree ---------------------------


def _incomparable_tuple(ti: TreeIndex, sets: list[np.ndarray], budget: int, counter: list[int]):
    """Pick one position from each sorted set, pairwise incomparable, or
    None.

    Sets are expected to be antichains (no member below another), which
    makes a node's descendants inside a set one contiguous run that is
    skipped with a single binary search.  Smallest sets are tried first;
    ``counter[0]`` accumulates search steps.
    """
    k = len(sets)
    if any(len(s) == 0 for s in sets):
        return None
    order = sorted(range(k), key=lambda i: len(sets[i]))
    arrs = [sets[i] for i in order]
    size = ti.size_list
    chosen = [0] * k
    idx = [0] * k
    steps = 0
    d = 0
    while d >= 0:
        arr = arrs[d]
        n = len(arr)
        i = idx[d]
        found = False
        while i < n:
            y = int(arr[i])
            steps += 1
            end_y = y + size[y]
            nxt = i + 1
            for z in chosen[:d]:
                end_z = z + size[z]
                if z <= y < end_z:
                    nxt = int(np.searchsorted(arr, end_z))
                    break
                if y < z < end_y:
                    break
            else:
                found = True
                break
            i = nxt
            if steps > budget:
                counter[0] += steps
                est = 1
                for s in sets:
                    est *= len(s)
                raise BudgetExceeded(f"tuple search exceeded {budget} steps", est)
        if not found:
            d -= 1
            if d >= 0:
                idx[d] += 1
            continue
        idx[d] = i
        chosen[d] = y
        if d + 1 == k:
            counter[0] += steps
            out = [0] * k
            for slot, val in zip(order, chosen):
                out[slot] = val
            return out
        d += 1
        idx[d] = 0
    counter[0] += steps
    return None


def _pair_feasible(ti: TreeIndex, p: Pattern, kids, phi, lowest, phi_idx, mask) -> np.ndarray:
    """Vectorised two-child case of the tuple search.

    Both candidate sets are antichains.  Two antichains with at least two
    members each always hold an incomparable pair, so only positions where
    one side has a single member ``e`` need work: there the other side must
    have a member outside ``e``'s subtree that is not ``e``'s ancestor
    (an antichain holds at most one ancestor of ``e``).
    """
    counts, unique = [], []
    for c in kids:
        if p.edge[c] is EdgeKind.CHILD:
            hit = _nonzero(phi[c][1:]) + 1
            counts.append(np.bincount(ti.parent[hit], minlength=ti.n))
            # with a single hit under x, the position sum is that hit
            unique.append(np.bincount(ti.parent[hit], weights=hit, minlength=ti.n).astype(np.int64))
        else:
            counts.append(ti.count_proper_desc_in(lowest[c]))
            unique.append(None)
    out = mask & (counts[0] > 0) & (counts[1] > 0)
    xs = _nonzero(out & ((counts[0] == 1) | (counts[1] == 1)))
    if len(xs) == 0:
        return out
    single = np.where(counts[0][xs] == 1, 0, 1)
    for side in (0, 1):
        sel = xs[single == side]
        if len(sel) == 0:
            continue
        c, o = kids[side], kids[1 - side]
        if unique[side] is not None:
            e = unique[side][sel]
        else:
            idx = phi_idx[c]
            e = idx[np.searchsorted(idx, sel + 1)]
        end_e = e + ti.size[e]
        n_other = counts[1 - side][sel]
        if p.edge[o] is EdgeKind.CHILD:
            b = np.where(n_other == 1, unique[1 - side][sel], 0)
            blocked = (n_other == 1) & (b <= e) & (e < b + ti.size[b])
            ok = ~blocked
        else:
            idx = phi_idx[o]
            cs = ti._prefix(lowest[o])
            inside = cs[end_e] - cs[e]
            j = np.searchsorted(idx, e) - 1
            pred = idx[np.maximum(j, 0)] if len(idx) else np.zeros_like(e)
            above = (j >= 0) & (pred > sel) & (pred + ti.size[pred] > e)
            ok = n_other - inside - above > 0
        out[sel] = ok
    return out


def _anc_candidate_sets(ti: TreeIndex, p: Pattern, kids, phi_idx, phi, x: int) -> list[np.ndarray]:
    sets = []
    lo, hi = x + 1, x + int(ti.size[x])
    for c in kids:
        if p.edge[c] is EdgeKind.CHILD:
            ch = ti.kids(x)
            sets.append(ch[phi[c][ch]])
        else:
            idx = phi_idx[c]
            sets.append(idx[np.searchsorted(idx, lo) : np.searchsorted(idx, hi)])
    return sets


def check_anc_bounded(
    t: Pattern, p: Pattern, *, witness: bool = True, budget: int = DEFAULT_ANC_BUDGET
) -> CheckResult:
    """Ancestor-preserving embedding for patterns of small degree.

    A tree node qualifies for pattern node m when its label fits and some
    choice of one candidate per pattern child is pairwise incomparable,
    with child-edge picks among its children and descendant-edge picks
    among its proper descendants.  Raises :class:`BudgetExceeded` when a
    single tuple search runs past ``budget`` steps.
    """
    started = time.perf_counter()
    if len(p) > len(t):
        return _result(False, None, "check_anc_bounded", started, pruned="size")
    ti = TreeIndex.of(t)
    phi: list[np.ndarray] = [None] * len(p)  # type: ignore[list-item]
    phi_idx: list[np.ndarray] = [None] * len(p)  # type: ignore[list-item]
    lowest: list[np.ndarray] = [None] * len(p)  # type: ignore[list-item]
    counter = [0]
    for m in reversed(p.preorder):
        mask = ti.label_mask(p.labels[m])
        kids = p.children[m]
        if kids:
            mask = mask & (ti.size >= p.size[m])
            for c in kids:
                if not mask.any():
                    break
                if p.edge[c] is EdgeKind.CHILD:
                    mask &= ti.has_child_in(phi[c])
                else:
                    mask &= ti.has_proper_desc_in(phi[c])
            if len(kids) == 2:
                mask &= _pair_feasible(ti, p, kids, phi, lowest, phi_idx, mask)
                counter[0] += int(mask.sum())
            elif len(kids) > 2:
                for x in _nonzero(mask):
                    x = int(x)
                    sets = _anc_candidate_sets(ti, p, kids, phi_idx, phi, x)
                    if _incomparable_tuple(ti, sets, budget, counter) is None:
                        mask[x] = False
        phi[m] = mask
        # a deeper candidate is never worse than one of its ancestors, so
        # descendant-edge picks only range over the lowest members
        lowest[m] = mask & ~ti.has_proper_desc_in(mask)
        phi_idx[m] = _nonzero(lowest[m])
    ok = bool(phi[p.root][0])
    h = None
    if ok and witness:
        h_pos = [0] * len(p)
        for m in p.preorder:
            kids = p.children[m]
            if not kids:
                continue
            sets = _anc_candidate_sets(ti, p, kids, phi_idx, phi, h_pos[m])
            picks = _incomparable_tuple(ti, sets, budget, counter)
            for c, y in zip(kids, picks):
                h_pos[c] = int(y)
        h = _to_nodes(ti, h_pos)
    return _result(ok, h, "check_anc_bounded", started, explored=counter[0])


def anc_cost_estimate(t: Pattern, p: Pattern) -> int:
    """Worst-case work of :func:`check_anc_bounded`: every pattern node
    against every tree node, and for nodes with three or more children a
    tuple search with every child ranging over the whole tree (one and two
    children are handled by vectorised counting)."""
    n = len(t)
    return sum(n * (n ** len(kids) if len(kids) > 2 else 1) for kids in p.children)


# -- weakly-injective embeddings, height <= 1 ---------------------------------


@dataclass
class HeightOneCounts:
    """Label census for a height-one pattern against a tree.

    ``p_child[a]`` / ``p_desc[a]`` count a-labelled child-edge /
    descendant-edge children of the pattern root (key ``'*'`` included);
    ``t_depth1[a]`` / ``t_depth_ge2[a]`` count a-labelled tree nodes at depth
    1 / at depth at least 2.
    """

    p_child: dict[str, int] = field(default_factory=dict)
    p_desc: dict[str, int] = field(default_factory=dict)
    t_depth1: dict[str, int] = field(default_factory=dict)
    t_depth_ge2: dict[str, int] = field(default_factory=dict)

    def t_depth_ge1(self, a: str) -> int:
        return self.t_depth1.get(a, 0) + self.t_depth_ge2.get(a, 0)

    def symbols(self) -> set[str]:
        keys = set(self.p_child) | set(self.p_desc) | set(self.t_depth1) | set(self.t_depth_ge2)
        keys.discard(WILDCARD)
        return keys


def height_one_counts(t: Pattern, p: Pattern) -> HeightOneCounts:
    c = HeightOneCounts()
    for m in p.children[p.root]:
        bucket = c.p_child if p.edge[m] is EdgeKind.CHILD else c.p_desc
        bucket[p.labels[m]] = bucket.get(p.labels[m], 0) + 1
    for v in range(len(t)):
        d = t.depth[v]
        if d == 1:
            c.t_depth1[t.labels[v]] = c.t_depth1.get(t.labels[v], 0) + 1
        elif d >= 2:
            c.t_depth_ge2[t.labels[v]] = c.t_depth_ge2.get(t.labels[v], 0) + 1
    return c


def counting_verdict(c: HeightOneCounts, rule: str = "max") -> bool:
    """The four counting inequalities for a height-one pattern.

    ``rule="max"`` charges depth-1 a-nodes for descendant-edge a-children
    that overflow the deeper a-nodes.  ``rule="min"`` keeps the literal
    ``min(., 0)`` form, which is unsound and only kept to exhibit that.
    """
    if rule not in ("max", "min"):
        raise ValueError(f"unknown counting rule {rule!r}")
    star_child = c.p_child.get(WILDCARD, 0)
    star_desc = c.p_desc.get(WILDCARD, 0)
    depth1_left = 0
    total_left = 0
    for a in c.symbols():
        pc, pd = c.p_child.get(a, 0), c.p_desc.get(a, 0)
        t1, t2 = c.t_depth1.get(a, 0), c.t_depth_ge2.get(a, 0)
        if pc > t1:
            return False
        if pd > t1 + t2 - pc:
            return False
        over = pd - t2
        depth1_left += t1 - pc - (max(over, 0) if rule == "max" else min(over, 0))
        total_left += t1 + t2 - pc - pd
    if star_child > depth1_left:
        return False
    return star_desc <= total_left - star_child


def _height1_matching(t: Pattern, p: Pattern):
    kids = list(p.children[p.root])
    right = [v for v in t.preorder if v != t.root]
    adj = []
    for m in kids:
        need_depth1 = p.edge[m] is EdgeKind.CHILD
        lab = p.labels[m]
        adj.append([
            j for j, v in enumerate(right)
            if (lab == WILDCARD or t.labels[v] == lab) and (t.depth[v] == 1 or not need_depth1)
        ])
    ml = hopcroft_karp(adj, len(right))
    return kids, right, ml


def check_inj_height1(
    t: Pattern, p: Pattern, *, witness: bool = True, counting_rule: str = "max"
) -> CheckResult:
    """Weakly-injective embedding of a pattern of height at most one.

    Decided by a matching of root children onto non-root tree nodes and,
    independently, by label counting; with the default rule the two must
    agree or :class:`Height1Disagreement` is raised.
    """
    started = time.perf_counter()
    if p.height > 1:
        raise HeightTooLarge(f"pattern height {p.height} exceeds 1")
    root_ok = p.labels[p.root] == WILDCARD or p.labels[p.root] == t.labels[t.root]
    kids, right, ml = _height1_matching(t, p)
    by_matching = root_ok and all(j >= 0 for j in ml)
    by_counting = root_ok and counting_verdict(height_one_counts(t, p), counting_rule)
    if counting_rule == "max" and by_matching != by_counting:
        raise Height1Disagreement(
            f"matching says {by_matching}, counting says {by_counting} "
            f"for pattern of {len(p)} nodes"
        )
    h = None
    if by_matching and witness:
        hl = [0] * len(p)
        hl[p.root] = t.root
        for m, j in zip(kids, ml):
            hl[m] = right[j]
        h = tuple(hl)
    return _result(by_matching, h, "check_inj_height1", started,
                   matching=by_matching, counting=by_counting)
