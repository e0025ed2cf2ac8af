"""Instance generators that encode CNF satisfiability as embedding problems,
plus a brute-force SAT check to validate them against.

Each ``gen_*`` function returns ``(tree, pattern)`` such that an embedding
of the matching kind exists iff the formula is satisfiable.  Labels:
``r`` root, ``x<i>`` variables, ``c<j>`` clauses, ``s<i>`` variable markers,
``bot`` for unused chain slots, ``a`` as filler.
"""
from __future__ import annotations

import enum
from itertools import product
from typing import Callable, Optional

from .textio import CnfFormula
from .tree import WILDCARD, EdgeKind, Pattern, Tree

C, D = EdgeKind.CHILD, EdgeKind.DESC
BOTTOM = "bot"
FILLER = "a"


class ReductionKind(enum.Enum):
    INJ = "inj"
    ANC = "anc"
    INJ_H2 = "inj-h2"
    INJ_WC = "inj-wc"
    INJ_NOWC = "inj-nowc"
    ANC_WC = "anc-wc"

    @property
    def target(self) -> str:
        """Which embedding kind the instance is meant for."""
        return "anc" if self in (ReductionKind.ANC, ReductionKind.ANC_WC) else "inj"


class TooManyVariables(ValueError):
    pass


class ShapeMismatch(ValueError):
    pass


class InvalidSize(ValueError):
    pass


def sat_brute_force(phi: CnfFormula, max_vars: int = 20) -> bool:
    if phi.num_vars > max_vars:
        raise TooManyVariables(f"{phi.num_vars} variables exceeds brute-force limit {max_vars}")
    if any(not c for c in phi.clauses):
        return False
    for bits in product((False, True), repeat=phi.num_vars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in phi.clauses):
            return True
    return False


def _check_formula(phi: CnfFormula) -> None:
    if not phi.clauses:
        raise ValueError("formula has no clauses")


def _occurrences(phi: CnfFormula, var: int, positive: bool) -> list[int]:
    """1-based indices of clauses containing the literal, ascending."""
    lit = var if positive else -var
    return [j for j, c in enumerate(phi.clauses, 1) if lit in c]


def _leaf(label: str):
    return (label, [])


def gen_inj_reduction(phi: CnfFormula) -> tuple[Tree, Pattern]:
    """Each literal gets a chain ``x_i(pi_1(...pi_k))`` whose j-th slot is
    ``c_j`` if the literal occurs in clause j and ``bot`` otherwise."""
    _check_formula(phi)
    n, k = phi.num_vars, phi.num_clauses
    branches = []
    for i in range(1, n + 1):
        for positive in (True, False):
            occ = set(_occurrences(phi, i, positive))
            node = None
            for j in range(k, 0, -1):
                lab = f"c{j}" if j in occ else BOTTOM
                node = (lab, [] if node is None else [node])
            branches.append((f"x{i}", [] if node is None else [node]))
    tree = Tree.from_nested(("r", branches))

    kids = []
    for i in range(1, n + 1):
        node = None
        for _ in range(k):
            node = (WILDCARD, [] if node is None else [(C, node)])
        kids.append((D, (f"x{i}", [] if node is None else [(C, node)])))
    kids += [(D, _leaf(f"c{j}")) for j in range(1, k + 1)]
    return tree, Pattern.from_nested(("r", kids))


def gen_anc_reduction(phi: CnfFormula) -> tuple[Tree, Pattern]:
    """Each literal gets ``x_i(c_j ...)`` over the clauses it occurs in;
    the pattern is ``r[x_1]...[x_n][.//c_1]...[.//c_k]``."""
    _check_formula(phi)
    n, k = phi.num_vars, phi.num_clauses
    branches = [
        (f"x{i}", [_leaf(f"c{j}") for j in _occurrences(phi, i, positive)])
        for i in range(1, n + 1)
        for positive in (True, False)
    ]
    tree = Tree.from_nested(("r", branches))
    kids = [(C, _leaf(f"x{i}")) for i in range(1, n + 1)]
    kids += [(D, _leaf(f"c{j}")) for j in range(1, k + 1)]
    return tree, Pattern.from_nested(("r", kids))


def gen_inj_h2_reduction(phi: CnfFormula) -> tuple[Tree, Pattern]:
    """Height-two variant.

    Per variable: ``x_i^p`` with children ``x_i^n, p_i^1..p_i^k`` and
    ``x_i^n`` with children ``s_i, n_i^1..n_i^{k+1}``.  The p-slots carry
    the clauses with a positive occurrence, the n-slots those with a
    negative one.  The pattern root has, per variable, a wildcard with k+1
    child-edge wildcards and a descendant ``s_i``, plus descendant leaves
    ``c_1..c_k``.
    """
    _check_formula(phi)
    n, k = phi.num_vars, phi.num_clauses
    blocks = []
    for i in range(1, n + 1):
        pos_occ = _occurrences(phi, i, True)
        neg_occ = _occurrences(phi, i, False)
        p_slots = [_leaf(f"c{pos_occ[s]}" if s < len(pos_occ) else FILLER) for s in range(k)]
        n_slots = [_leaf(f"c{neg_occ[s]}" if s < len(neg_occ) else FILLER) for s in range(k + 1)]
        xn = (FILLER, [_leaf(f"s{i}")] + n_slots)
        blocks.append((FILLER, [xn] + p_slots))
    tree = Tree.from_nested((FILLER, blocks))

    kids = []
    for i in range(1, n + 1):
        gadget = (WILDCARD, [(D, _leaf(f"s{i}"))] + [(C, _leaf(WILDCARD)) for _ in range(k + 1)])
        kids.append((D, gadget))
    kids += [(D, _leaf(f"c{j}")) for j in range(1, k + 1)]
    return tree, Pattern.from_nested((WILDCARD, kids))


def _gadget_nested(k: int, s: int, label: str):
    if k < 0 or s < 1:
        raise InvalidSize(f"gadget needs k >= 0 and s >= 1, got k={k}, s={s}")
    node = (label, [(C, _leaf(label)) for _ in range(k + 3)])
    for _ in range(s - 1):
        node = (label, [(C, node)])
    return (label, [(C, node)] + [(C, _leaf(label)) for _ in range(k + 3)])


def gadget_t(k: int, s: int, label: str = FILLER) -> Tree:
    """Two hubs joined by a path of length s; the top hub has k+3 leaves
    besides the path, the bottom hub has k+3 leaves.  Node count
    ``2(k+4) + s - 1``."""
    return Tree.from_nested(_gadget_nested(k, s, label))


def _rebuild(
    s: Pattern,
    gadget_for: Callable[[str], Optional[tuple]],
    relabel: Callable[[str], str],
):
    """Nested copy of ``s`` with selected leaves swapped for gadgets and all
    other labels rewritten."""

    def rec(x: int):
        if not s.children[x]:
            g = gadget_for(s.labels[x])
            if g is not None:
                return g
        return (relabel(s.labels[x]), [(s.edge[c], rec(c)) for c in s.children[x]])

    return rec(s.root)


def _index(label: str, prefix: str) -> Optional[int]:
    if label.startswith(prefix) and label[len(prefix):].isdigit():
        return int(label[len(prefix):])
    return None


def _thm7_gadgets(k: int, label: str):
    def gadget_for(lab: str):
        j = _index(lab, "c")
        if j is not None:
            return _gadget_nested(k, j, label)
        i = _index(lab, "s")
        if i is not None:
            return _gadget_nested(k, k + i, label)
        return None

    return gadget_for


def gen_inj_wc_reduction(phi: CnfFormula) -> tuple[Tree, Pattern]:
    """Height-two reduction with clause and marker leaves replaced by
    size-coded gadgets; the tree is all ``a`` and the pattern all ``*``."""
    tree, pattern = gen_inj_h2_reduction(phi)
    k = phi.num_clauses
    t2 = Tree.from_nested(_rebuild(tree, _thm7_gadgets(k, FILLER), lambda _: FILLER))
    p2 = Pattern.from_nested(_rebuild(pattern, _thm7_gadgets(k, WILDCARD), lambda _: WILDCARD))
    return t2, p2


def gen_inj_nowc_reduction(phi: CnfFormula) -> tuple[Tree, Pattern]:
    """As :func:`gen_inj_wc_reduction` but every pattern label is ``a``."""
    tree, pattern = gen_inj_h2_reduction(phi)
    k = phi.num_clauses
    t2 = Tree.from_nested(_rebuild(tree, _thm7_gadgets(k, FILLER), lambda _: FILLER))
    p2 = Pattern.from_nested(_rebuild(pattern, _thm7_gadgets(k, FILLER), lambda _: FILLER))
    return t2, p2


def anc_wc_intermediate(phi: CnfFormula) -> tuple[Tree, Pattern]:
    """Ancestor reduction with variable labels pushed one level down: each
    literal node becomes ``a`` with a new first child ``x_i``, the root
    becomes ``a``; in the pattern root and literal nodes become ``*``."""
    _check_formula(phi)
    n, k = phi.num_vars, phi.num_clauses
    branches = [
        (FILLER, [_leaf(f"x{i}")] + [_leaf(f"c{j}") for j in _occurrences(phi, i, positive)])
        for i in range(1, n + 1)
        for positive in (True, False)
    ]
    tree = Tree.from_nested((FILLER, branches))
    kids = [(C, (WILDCARD, [(C, _leaf(f"x{i}"))])) for i in range(1, n + 1)]
    kids += [(D, _leaf(f"c{j}")) for j in range(1, k + 1)]
    return tree, Pattern.from_nested((WILDCARD, kids))


def gen_anc_wc_reduction(phi: CnfFormula) -> tuple[Tree, Pattern]:
    """Wildcard-only ancestor reduction: leaves ``c_j`` become gadget
    ``T(k, j)`` and leaves ``x_i`` become ``T(k, k+i)``."""
    tree, pattern = anc_wc_intermediate(phi)
    k = phi.num_clauses

    def gadgets(label):
        def gadget_for(lab):
            j = _index(lab, "c")
            if j is not None:
                return _gadget_nested(k, j, label)
            i = _index(lab, "x")
            if i is not None:
                return _gadget_nested(k, k + i, label)
            return None

        return gadget_for

    t2 = Tree.from_nested(_rebuild(tree, gadgets(FILLER), lambda _: FILLER))
    p2 = Pattern.from_nested(_rebuild(pattern, gadgets(WILDCARD), lambda _: WILDCARD))
    return t2, p2


def reduce_degree(t: Pattern, p: Pattern) -> tuple[Tree, Pattern]:
    """Trade the pattern root's fan-out for a spine of fresh labels.

    For ``t = r(t_1..t_k)`` and ``p = r[.//p_1]...[.//p_m]`` returns
    ``A_1(...A_m(t_1..t_k))`` and ``A_1[.//p_1]/.../A_m[.//p_m]``.
    Weak-injective embeddability is unchanged.
    """
    kids = p.children[p.root]
    if any(p.edge[c] is C for c in kids):
        raise ShapeMismatch("pattern root has child-edge children")
    root_label = p.labels[p.root]
    if root_label != WILDCARD and root_label != t.labels[t.root]:
        raise ShapeMismatch(
            f"pattern root {root_label!r} cannot match tree root {t.labels[t.root]!r}"
        )
    m = len(kids)
    if m == 0:
        return (t if isinstance(t, Tree) else Tree(t.labels, t.edges(), t.root)), p
    taken = set(t.labels) | set(p.labels)
    fresh = []
    i = 0
    while len(fresh) < m:
        i += 1
        if f"A{i}" not in taken:
            fresh.append(f"A{i}")

    def sub(s: Pattern, x: int):
        return (s.labels[x], [(s.edge[c], sub(s, c)) for c in s.children[x]])

    tnode = (fresh[-1], [(C, sub(t, c)) for c in t.children[t.root]])
    pnode = (fresh[-1], [(D, sub(p, kids[-1]))])
    for j in range(m - 2, -1, -1):
        tnode = (fresh[j], [(C, tnode)])
        pnode = (fresh[j], [(D, sub(p, kids[j])), (C, pnode)])
    return Tree.from_nested(tnode), Pattern.from_nested(pnode)


GENERATORS = {
    ReductionKind.INJ: gen_inj_reduction,
    ReductionKind.ANC: gen_anc_reduction,
    ReductionKind.INJ_H2: gen_inj_h2_reduction,
    ReductionKind.INJ_WC: gen_inj_wc_reduction,
    ReductionKind.INJ_NOWC: gen_inj_nowc_reduction,
    ReductionKind.ANC_WC: gen_anc_wc_reduction,
}


def generate(kind: ReductionKind, phi: CnfFormula) -> tuple[Tree, Pattern]:
    return GENERATORS[ReductionKind(kind)](phi)
