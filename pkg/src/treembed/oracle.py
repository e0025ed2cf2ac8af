"""Definitional embedding checks: verify a mapping, or find one by search.

This module is the ground truth the faster algorithms are tested against,
so it favours directness over speed.
"""
from __future__ import annotations

import enum
import operator
import time
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Union

from .tree import WILDCARD, EdgeKind, Pattern


class EmbeddingKind(enum.Enum):
    STD = "std"
    INJ = "inj"
    ANC = "anc"
    LCA = "lca"

    @property
    def strength(self) -> int:
        return _STRENGTH[self]

    @property
    def injective(self) -> bool:
        return self is not EmbeddingKind.STD

    def __lt__(self, other):
        if not isinstance(other, EmbeddingKind):
            return NotImplemented
        return self.strength < other.strength


_STRENGTH = {EmbeddingKind.STD: 0, EmbeddingKind.INJ: 1, EmbeddingKind.ANC: 2, EmbeddingKind.LCA: 3}

KINDS = tuple(EmbeddingKind)

Embedding = tuple  # tuple[int, ...], indexed by pattern node


class PartialMapping(ValueError):
    pass


class ForeignNode(ValueError):
    pass


class InstanceTooLarge(ValueError):
    pass


@dataclass
class CheckResult:
    """Outcome of a decision procedure.

    ``verdict`` is ``None`` when a search budget ran out before a decision.
    """

    verdict: Optional[bool]
    witness: Optional[Embedding] = None
    algorithm: str = ""
    nodes_explored: int = 0
    elapsed: float = 0.0
    kind: Optional[EmbeddingKind] = None
    notes: dict = field(default_factory=dict)

    @property
    def decided(self) -> bool:
        return self.verdict is not None

    @property
    def label(self) -> str:
        return {True: "yes", False: "no", None: "unknown"}[self.verdict]


def labels_match(tree_label: str, pattern_label: str) -> bool:
    return pattern_label == WILDCARD or tree_label == pattern_label


def _as_total(p: Pattern, t: Pattern, h) -> tuple[int, ...]:
    n = len(p)
    if isinstance(h, Mapping):
        missing = [m for m in range(n) if m not in h]
        if missing:
            raise PartialMapping(f"pattern nodes {missing} are unmapped")
        extra = [m for m in h if not (isinstance(m, int) and 0 <= m < n)]
        if extra:
            raise ForeignNode(f"mapping names non-pattern nodes {extra}")
        h = [h[m] for m in range(n)]
    else:
        h = list(h)
        if len(h) != n:
            raise PartialMapping(f"mapping covers {len(h)} of {n} pattern nodes")
    out = []
    for m, x in enumerate(h):
        if x is None:
            raise PartialMapping(f"pattern node {m} is unmapped")
        try:
            x = operator.index(x)
        except TypeError:
            raise ForeignNode(f"pattern node {m} maps to {x!r}, not a tree node") from None
        if not 0 <= x < len(t):
            raise ForeignNode(f"pattern node {m} maps to {x}, not a tree node")
        out.append(x)
    return tuple(out)


def verify(t: Pattern, p: Pattern, h: Union[Sequence[int], Mapping[int, int]], kind: EmbeddingKind) -> bool:
    """True iff ``h`` is an embedding of ``p`` in ``t`` of the given kind."""
    h = _as_total(p, t, h)
    if h[p.root] != t.root:
        return False
    for m in range(len(p)):
        if not labels_match(t.labels[h[m]], p.labels[m]):
            return False
        par = p.parent[m]
        if par < 0:
            continue
        if p.edge[m] is EdgeKind.CHILD:
            if t.parent[h[m]] != h[par]:
                return False
        elif h[m] == h[par] or not t.is_ancestor(h[par], h[m]):
            return False
    if kind is EmbeddingKind.STD:
        return True
    if len(set(h)) != len(h):
        return False
    n = len(p)
    if kind is EmbeddingKind.ANC:
        for a in range(n):
            for b in range(n):
                if t.is_ancestor(h[a], h[b]) != p.is_ancestor(a, b):
                    return False
    elif kind is EmbeddingKind.LCA:
        for a in range(n):
            for b in range(a + 1, n):
                if t.lca(h[a], h[b]) != h[p.lca(a, b)]:
                    return False
    return True


def _pattern_tables(p: Pattern, which: str):
    """Pairwise ancestor (and its transpose) or lca tables, cached on ``p``."""
    key = ("oracle", which)
    tab = p._derived.get(key)
    if tab is None:
        n = len(p)
        if which == "anc":
            pre, size = p.pre, p.size
            anc = [[pre[a] <= pre[b] < pre[a] + size[a] for b in range(n)] for a in range(n)]
            tab = (anc, [list(col) for col in zip(*anc)])
        else:
            tab = [[p.lca(a, b) for b in range(n)] for a in range(n)]
        p._derived[key] = tab
    return tab


def brute_force(
    t: Pattern,
    p: Pattern,
    kind: EmbeddingKind,
    *,
    max_pattern_nodes: int = 8,
    max_tree_nodes: int = 12,
    force: bool = False,
) -> CheckResult:
    """Exhaustive search over all mappings.

    Pattern nodes are assigned in preorder and each is tried against every
    tree node in preorder (Dewey-lexicographic) order, so the first witness
    found is deterministic.  Partial mappings that already break an edge,
    label, injectivity or pair condition are cut.
    """
    if not force and (len(p) > max_pattern_nodes or len(t) > max_tree_nodes):
        raise InstanceTooLarge(
            f"{len(p)} pattern x {len(t)} tree nodes exceeds the brute-force limit "
            f"({max_pattern_nodes} x {max_tree_nodes}); pass force=True to override"
        )
    start = time.perf_counter()
    order = p.preorder
    candidates = t.preorder
    h: list[int] = [-1] * len(p)
    used: dict[int, int] = {}
    explored = 0
    injective = kind.injective

    # unchecked interval tests; node ids here come from the structures themselves
    tpre, tsize, tdepth, tparent = t.pre, t.size, t.depth, t.parent
    check_anc = kind is EmbeddingKind.ANC
    check_lca = kind is EmbeddingKind.LCA
    if check_anc:
        p_anc, p_anc_t = _pattern_tables(p, "anc")
    elif check_lca:
        p_lca = _pattern_tables(p, "lca")

    def t_anc(a: int, b: int) -> bool:
        return tpre[a] <= tpre[b] < tpre[a] + tsize[a]

    def t_lca(a: int, b: int) -> int:
        while tdepth[a] > tdepth[b]:
            a = tparent[a]
        while tdepth[b] > tdepth[a]:
            b = tparent[b]
        while a != b:
            a, b = tparent[a], tparent[b]
        return a

    def admissible(i: int, x: int) -> bool:
        m = order[i]
        if not labels_match(t.labels[x], p.labels[m]):
            return False
        par = p.parent[m]
        if par < 0:
            if x != t.root:
                return False
        elif p.edge[m] is EdgeKind.CHILD:
            if tparent[x] != h[par]:
                return False
        elif x == h[par] or not t_anc(h[par], x):
            return False
        if injective and used.get(x, 0):
            return False
        if check_anc:
            row, col = p_anc[m], p_anc_t[m]
            for j in range(i):
                m2 = order[j]
                y = h[m2]
                if t_anc(x, y) != row[m2] or t_anc(y, x) != col[m2]:
                    return False
        elif check_lca:
            row = p_lca[m]
            for j in range(i):
                m2 = order[j]
                if t_lca(x, h[m2]) != h[row[m2]]:
                    return False
        return True

    def search(i: int) -> bool:
        nonlocal explored
        if i == len(order):
            return True
        m = order[i]
        for x in candidates:
            explored += 1
            if not admissible(i, x):
                continue
            h[m] = x
            used[x] = used.get(x, 0) + 1
            if search(i + 1):
                return True
            used[x] -= 1
            h[m] = -1
        return False

    found = search(0)
    return CheckResult(
        verdict=found,
        witness=tuple(h) if found else None,
        algorithm="brute_force",
        nodes_explored=explored,
        elapsed=time.perf_counter() - start,
        kind=kind,
    )
