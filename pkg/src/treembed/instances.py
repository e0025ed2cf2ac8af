"""Exhaustive and random instance families used by the self-test, the
benchmarks and the test suite."""
from __future__ import annotations

import random
from functools import lru_cache
from itertools import combinations, product
from typing import Iterator, Sequence

from .textio import CnfFormula
from .tree import WILDCARD, EdgeKind, Pattern, Tree

TREE_ALPHABET = ("a", "b")
PATTERN_ALPHABET = ("a", "b", WILDCARD)


def _multisets(items: Sequence[tuple], sizes: Sequence[int], total: int, start: int = 0):
    """Non-decreasing index sequences over ``items`` whose sizes sum to
    ``total``; each yields one multiset of items."""
    if total == 0:
        yield ()
        return
    for i in range(start, len(items)):
        if sizes[i] <= total:
            for rest in _multisets(items, sizes, total - sizes[i], i):
                yield (items[i],) + rest


@lru_cache(maxsize=None)
def _shapes(n: int, labels: tuple, edge_kinds: tuple) -> tuple:
    """All nested forms with exactly ``n`` nodes, one per isomorphism class.
    With ``edge_kinds`` empty the forms are trees: children are bare
    subtrees; otherwise children are ``(EdgeKind, subform)`` pairs."""
    if n <= 0:
        return ()
    items, sizes = [], []
    for s in range(1, n):
        for sub in _shapes(s, labels, edge_kinds):
            if edge_kinds:
                for e in edge_kinds:
                    items.append((e, sub))
                    sizes.append(s)
            else:
                items.append(sub)
                sizes.append(s)
    out = []
    for kids in _multisets(items, sizes, n - 1):
        for lab in labels:
            out.append((lab, list(kids)))
    return tuple(out)


def enumerate_trees(max_nodes: int, alphabet: Sequence[str] = TREE_ALPHABET) -> Iterator[Tree]:
    """Every unordered labeled tree with 1..max_nodes nodes, each
    isomorphism class exactly once, smaller trees first."""
    for n in range(1, max_nodes + 1):
        for form in _shapes(n, tuple(alphabet), ()):
            yield Tree.from_nested(form)


def enumerate_patterns(
    max_nodes: int,
    alphabet: Sequence[str] = PATTERN_ALPHABET,
    edge_kinds: Sequence[EdgeKind] = (EdgeKind.CHILD, EdgeKind.DESC),
) -> Iterator[Pattern]:
    """Every tree pattern with 1..max_nodes nodes up to isomorphism, over
    every combination of the given edge kinds."""
    for n in range(1, max_nodes + 1):
        for form in _shapes(n, tuple(alphabet), tuple(edge_kinds)):
            yield Pattern.from_nested(form)


def enumerate_height1_patterns(
    max_children: int, alphabet: Sequence[str] = PATTERN_ALPHABET
) -> Iterator[Pattern]:
    """Patterns of height at most one (a root plus up to ``max_children``
    leaves, each on a child or descendant edge)."""
    leaves = [(e, (lab, [])) for lab in alphabet for e in (EdgeKind.CHILD, EdgeKind.DESC)]
    for k in range(max_children + 1):
        for kids in _multisets(leaves, [1] * len(leaves), k):
            for root in alphabet:
                yield Pattern.from_nested((root, list(kids)))


def random_tree(rng: random.Random, n: int, alphabet: Sequence[str] = TREE_ALPHABET) -> Tree:
    """Random recursive tree: node i attaches below a uniform earlier node."""
    parents = [-1] + [rng.randrange(i) for i in range(1, n)]
    labels = [rng.choice(alphabet) for _ in range(n)]
    return Tree.from_parents(labels, parents)


def random_deep_tree(
    rng: random.Random, n: int, alphabet: Sequence[str] = TREE_ALPHABET, window: int = 8
) -> Tree:
    """Random tree whose parents are drawn from the last ``window`` nodes,
    giving depth roughly linear in ``n`` rather than logarithmic."""
    parents = [-1] + [rng.randrange(max(0, i - window), i) for i in range(1, n)]
    labels = [rng.choice(alphabet) for _ in range(n)]
    return Tree.from_parents(labels, parents)


def random_pattern(
    rng: random.Random,
    n: int,
    alphabet: Sequence[str] = PATTERN_ALPHABET,
    desc_prob: float = 0.5,
    max_degree: int | None = None,
) -> Pattern:
    """Random pattern on ``n`` nodes; each edge is a descendant edge with
    probability ``desc_prob``.  ``max_degree`` caps the fan-out."""
    parents = [-1]
    room = [max_degree if max_degree is not None else n]
    open_nodes = [0]
    for i in range(1, n):
        par = rng.choice(open_nodes)
        parents.append(par)
        room[par] -= 1
        if room[par] == 0:
            open_nodes.remove(par)
        room.append(max_degree if max_degree is not None else n)
        open_nodes.append(i)
    labels = [rng.choice(alphabet) for _ in range(n)]
    kinds = [None] + [EdgeKind.DESC if rng.random() < desc_prob else EdgeKind.CHILD for _ in range(1, n)]
    return Pattern.from_parents(labels, parents, kinds)


def random_path_pattern(rng: random.Random, n: int, alphabet: Sequence[str] = PATTERN_ALPHABET, desc_prob: float = 0.5) -> Pattern:
    parents = [-1] + list(range(n - 1))
    labels = [rng.choice(alphabet) for _ in range(n)]
    kinds = [None] + [EdgeKind.DESC if rng.random() < desc_prob else EdgeKind.CHILD for _ in range(1, n)]
    return Pattern.from_parents(labels, parents, kinds)


def _clause_pool(n: int, width: int = 3) -> list[tuple[int, ...]]:
    """Clauses of 1..width literals over distinct variables of 1..n."""
    pool = []
    for w in range(1, min(width, n) + 1):
        for vars_ in combinations(range(1, n + 1), w):
            for signs in product((1, -1), repeat=w):
                pool.append(tuple(s * v for s, v in zip(signs, vars_)))
    return pool


def enumerate_cnf(
    max_vars: int = 4,
    max_clauses: int = 4,
    per_shape: int = 50,
    seed: int = 0,
    width: int = 3,
) -> list[CnfFormula]:
    """Fixed, reproducible family of CNF formulas: for every ``n`` in
    1..max_vars and ``k`` in 1..max_clauses, all formulas when there are at
    most ``per_shape`` of them, otherwise ``per_shape`` distinct ones drawn
    with a seeded generator.  Clauses have 1..width distinct variables."""
    rng = random.Random(seed)
    out = []
    for n in range(1, max_vars + 1):
        pool = _clause_pool(n, width)
        for k in range(1, max_clauses + 1):
            total = len(pool) ** k
            if total <= per_shape:
                chosen = list(product(pool, repeat=k))
            else:
                seen: set = set()
                chosen = []
                while len(chosen) < per_shape:
                    f = tuple(rng.choice(pool) for _ in range(k))
                    if f not in seen:
                        seen.add(f)
                        chosen.append(f)
            out.extend(CnfFormula(n, [list(c) for c in f]) for f in chosen)
    return out


def random_reduce_degree_instance(rng: random.Random, max_tree: int = 9, max_children: int = 3):
    """A pair of the shape ``reduce_degree`` accepts: tree ``r(t_1..t_k)``
    and pattern ``r[.//p_1]...[.//p_m]``.  The sub-patterns have degree at
    most 2, so the reduced pattern's degree is at most 2 overall."""
    t = random_tree(rng, rng.randint(1, max_tree))
    t = Tree(("r",) + t.labels[1:], t.edges(), t.root)
    m = rng.randint(0, max_children)
    kids = []
    budget = rng.randint(m, max(m, 6))
    sizes = [1] * m
    for _ in range(budget - m):
        if m:
            sizes[rng.randrange(m)] += 1
    for s in sizes:
        sub = random_pattern(rng, s, TREE_ALPHABET + (WILDCARD,), max_degree=2)
        kids.append((EdgeKind.DESC, _nested(sub, sub.root)))
    p = Pattern.from_nested(("r", kids))
    return t, p


def _nested(s: Pattern, x: int):
    return (s.labels[x], [(s.edge[c], _nested(s, c)) for c in s.children[x]])


def planted_pattern(
    rng: random.Random,
    t: Pattern,
    n: int,
    *,
    max_degree: int | None = None,
    wildcard_prob: float = 0.3,
    desc_prob: float = 0.5,
    skip_prob: float = 0.3,
) -> Pattern:
    """A pattern of at most ``n`` nodes that has an ancestor-preserving
    embedding into ``t`` by construction.

    Kept tree nodes are expanded breadth-first: each picks its (up to
    ``max_degree``) largest tree children and walks down from each for a
    geometric number of steps (continuing with probability ``skip_prob``).
    The node reached is kept, hung by a descendant edge if the walk moved,
    otherwise by a child edge (or a descendant edge with ``desc_prob``).
    Images of different pattern children lie in different child subtrees,
    so the identity placement preserves ancestorship.
    """
    from collections import deque

    def label(v):
        return WILDCARD if rng.random() < wildcard_prob else t.labels[v]

    labels, parents, kinds = [label(t.root)], [-1], [None]
    queue = deque([(t.root, 0)])
    while queue and len(labels) < n:
        v, idx = queue.popleft()
        # favour big subtrees so the pattern can keep growing
        kids = sorted(t.children[v], key=lambda c: (-t.size[c], rng.random()))
        if max_degree is not None:
            kids = kids[:max_degree]
        for c in kids:
            if len(labels) >= n:
                break
            w, moved = c, False
            while t.children[w] and rng.random() < skip_prob:
                below = t.children[w]
                w, moved = rng.choices(below, weights=[t.size[x] for x in below])[0], True
            direct = not moved and rng.random() >= desc_prob
            labels.append(label(w))
            parents.append(idx)
            kinds.append(EdgeKind.CHILD if direct else EdgeKind.DESC)
            queue.append((w, len(labels) - 1))
    return Pattern.from_parents(labels, parents, kinds)
