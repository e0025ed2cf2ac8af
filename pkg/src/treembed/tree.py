"""Arena-stored unordered labeled trees and tree patterns.

Nodes are dense integers ``0 .. len(s) - 1``.  Children are kept in the order
the edges were supplied so output is deterministic, but nothing in this
package gives sibling order any meaning.
"""
from __future__ import annotations

import enum
import operator
from typing import Iterable, Sequence

WILDCARD = "*"


class EdgeKind(enum.Enum):
    CHILD = "/"
    DESC = "//"


class StructureError(ValueError):
    """Base class for malformed trees and patterns."""


class CycleDetected(StructureError):
    pass


class MultipleParents(StructureError):
    pass


class DisjointnessViolation(StructureError):
    pass


class WildcardInTree(StructureError):
    pass


class DescEdgeInTree(StructureError):
    pass


class OrphanNode(StructureError):
    pass


class InvalidNode(IndexError):
    pass


Edge = tuple  # (parent, child) or (parent, child, EdgeKind)


def _normalize_edges(edges: Iterable[Edge]) -> list[tuple[int, int, EdgeKind]]:
    out = []
    for e in edges:
        if len(e) == 2:
            u, v = e
            kind = EdgeKind.CHILD
        else:
            u, v, kind = e
            kind = EdgeKind(kind) if not isinstance(kind, EdgeKind) else kind
        out.append((int(u), int(v), kind))
    return out


def check_structure(
    labels: Sequence[str],
    edges: Iterable[Edge],
    root: int = 0,
    require_tree: bool = False,
) -> None:
    """Raise a :class:`StructureError` subclass if the raw structure is not a
    valid pattern (or, with ``require_tree``, a valid tree)."""
    n = len(labels)
    if n == 0:
        raise StructureError("structure has no nodes")
    if not 0 <= root < n:
        raise InvalidNode(f"root {root} out of range for {n} nodes")
    edges = _normalize_edges(edges)
    kinds: dict[tuple[int, int], EdgeKind] = {}
    parent: list[int | None] = [None] * n
    for u, v, kind in edges:
        for x in (u, v):
            if not 0 <= x < n:
                raise InvalidNode(f"edge ({u}, {v}) names node {x} outside 0..{n - 1}")
        if (u, v) in kinds:
            if kinds[(u, v)] is not kind:
                raise DisjointnessViolation(
                    f"edge ({u}, {v}) is both a child edge and a descendant edge"
                )
            raise MultipleParents(f"edge ({u}, {v}) listed twice")
        kinds[(u, v)] = kind
        if require_tree and kind is EdgeKind.DESC:
            raise DescEdgeInTree(f"descendant edge ({u}, {v}) in a tree")
        if parent[v] is not None:
            raise MultipleParents(f"node {v} has predecessors {parent[v]} and {u}")
        parent[v] = u
    if require_tree:
        for i, lab in enumerate(labels):
            if lab == WILDCARD:
                raise WildcardInTree(f"node {i} carries the wildcard label")
    if parent[root] is not None:
        raise CycleDetected(f"root {root} has predecessor {parent[root]}")
    for v in range(n):
        if v != root and parent[v] is None:
            raise OrphanNode(f"node {v} has no predecessor")
    # every node has one parent; anything unreachable from root sits on a cycle
    children: list[list[int]] = [[] for _ in range(n)]
    for u, v, _ in edges:
        children[u].append(v)
    seen = 1
    stack = [root]
    while stack:
        x = stack.pop()
        seen += len(children[x])
        stack.extend(children[x])
    if seen != n:
        v = next(iter(_cycle_nodes(parent, root)))
        raise CycleDetected(f"node {v} lies on a cycle")


def _cycle_nodes(parent, root):
    ok = {root}
    for v in range(len(parent)):
        path = []
        x = v
        while x not in ok and x not in path:
            path.append(x)
            x = parent[x]
        if x in ok:
            ok.update(path)
        else:
            yield x


class Pattern:
    """A rooted unordered tree pattern with child and descendant edges.

    ``edges`` holds ``(parent, child)`` pairs (child edges) or
    ``(parent, child, EdgeKind)`` triples.  The structure is validated and
    then frozen; derived arrays (depth, preorder, subtree sizes) are
    precomputed for O(1) ancestor queries.
    """

    _require_tree = False

    __slots__ = (
        "labels", "root", "parent", "edge", "children",
        "depth", "preorder", "pre", "size", "sub_height", "_canon", "_derived",
    )

    def __init__(self, labels: Sequence[str], edges: Iterable[Edge] = (), root: int = 0):
        edges = _normalize_edges(edges)
        check_structure(labels, edges, root, require_tree=self._require_tree)
        n = len(labels)
        self.labels: tuple[str, ...] = tuple(labels)
        self.root = root
        parent = [-1] * n
        edge: list[EdgeKind | None] = [None] * n
        children: list[list[int]] = [[] for _ in range(n)]
        for u, v, kind in edges:
            parent[v] = u
            edge[v] = kind
            children[u].append(v)
        self.parent: tuple[int, ...] = tuple(parent)
        self.edge: tuple[EdgeKind | None, ...] = tuple(edge)
        self.children: tuple[tuple[int, ...], ...] = tuple(tuple(c) for c in children)

        depth = [0] * n
        order = []
        stack = [root]
        while stack:
            x = stack.pop()
            order.append(x)
            for c in reversed(self.children[x]):
                depth[c] = depth[x] + 1
                stack.append(c)
        pre = [0] * n
        for i, x in enumerate(order):
            pre[x] = i
        size = [1] * n
        sub_height = [0] * n
        for x in reversed(order):
            p = parent[x]
            if p >= 0:
                size[p] += size[x]
                if sub_height[x] + 1 > sub_height[p]:
                    sub_height[p] = sub_height[x] + 1
        self.depth: tuple[int, ...] = tuple(depth)
        self.preorder: tuple[int, ...] = tuple(order)
        self.pre: tuple[int, ...] = tuple(pre)
        self.size: tuple[int, ...] = tuple(size)
        self.sub_height: tuple[int, ...] = tuple(sub_height)
        self._canon = None
        self._derived: dict = {}  # lazily built indexes owned by other modules

    @classmethod
    def from_edge_sets(cls, labels, child_edges=(), desc_edges=(), root=0):
        edges = [(u, v, EdgeKind.CHILD) for u, v in child_edges]
        edges += [(u, v, EdgeKind.DESC) for u, v in desc_edges]
        return cls(labels, edges, root)

    @classmethod
    def from_parents(cls, labels, parents, kinds=None):
        """Build from a parent array (``-1`` marks the root)."""
        root = None
        edges = []
        for v, u in enumerate(parents):
            if u < 0:
                if root is not None:
                    raise StructureError(f"nodes {root} and {v} both lack a parent")
                root = v
            else:
                kind = EdgeKind.CHILD if kinds is None else kinds[v]
                edges.append((u, v, kind))
        if root is None:
            raise CycleDetected("no root in parent array")
        return cls(labels, edges, root)

    @classmethod
    def from_nested(cls, nested):
        """Build from ``(label, [(EdgeKind, subtree), ...])``; for trees the
        kind may be omitted and each child given as a bare subtree."""
        labels: list[str] = []
        edges = []
        stack = [(nested, -1, None)]
        while stack:
            node, par, kind = stack.pop()
            label, kids = node
            v = len(labels)
            labels.append(label)
            if par >= 0:
                edges.append((par, v, kind))
            for item in reversed(list(kids)):
                if isinstance(item[0], EdgeKind):
                    stack.append((item[1], v, item[0]))
                else:
                    stack.append((item, v, EdgeKind.CHILD))
        return cls(labels, edges, 0)

    # -- edge views ---------------------------------------------------------

    @property
    def child_edges(self) -> frozenset[tuple[int, int]]:
        return frozenset(
            (self.parent[v], v) for v in range(len(self)) if self.edge[v] is EdgeKind.CHILD
        )

    @property
    def desc_edges(self) -> frozenset[tuple[int, int]]:
        return frozenset(
            (self.parent[v], v) for v in range(len(self)) if self.edge[v] is EdgeKind.DESC
        )

    def edges(self) -> list[tuple[int, int, EdgeKind]]:
        return [(self.parent[v], v, self.edge[v]) for x in self.preorder for v in self.children[x]]

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def node_count(self) -> int:
        return len(self.labels)

    def _check(self, *nodes: int) -> None:
        n = len(self.labels)
        for x in nodes:
            try:
                ok = 0 <= operator.index(x) < n
            except TypeError:
                ok = False
            if not ok:
                raise InvalidNode(f"node {x!r} is not valid in a structure of {n} nodes")

    # -- structural queries -------------------------------------------------

    def is_ancestor(self, a: int, b: int) -> bool:
        """Reflexive ancestorship via preorder intervals."""
        self._check(a, b)
        pa = self.pre[a]
        return pa <= self.pre[b] < pa + self.size[a]

    def lca(self, a: int, b: int) -> int:
        self._check(a, b)
        depth, parent = self.depth, self.parent
        while depth[a] > depth[b]:
            a = parent[a]
        while depth[b] > depth[a]:
            b = parent[b]
        while a != b:
            a, b = parent[a], parent[b]
        return a

    def degree(self, n: int) -> int:
        self._check(n)
        return len(self.children[n])

    def subtree_size(self, n: int) -> int:
        self._check(n)
        return self.size[n]

    def node_depth(self, n: int) -> int:
        self._check(n)
        return self.depth[n]

    @property
    def height(self) -> int:
        return self.sub_height[self.root]

    @property
    def max_degree(self) -> int:
        return max(len(c) for c in self.children)

    def has_desc_edges(self) -> bool:
        return any(k is EdgeKind.DESC for k in self.edge)

    def is_path(self) -> bool:
        return all(len(c) <= 1 for c in self.children)

    def root_path(self, n: int) -> list[int]:
        self._check(n)
        path = [n]
        while self.parent[path[-1]] >= 0:
            path.append(self.parent[path[-1]])
        path.reverse()
        return path

    def proper_descendants(self, n: int) -> list[int]:
        """Proper descendants of ``n`` in preorder (Dewey-lexicographic)."""
        self._check(n)
        i = self.pre[n]
        return list(self.preorder[i + 1 : i + self.size[n]])

    # -- canonical form -----------------------------------------------------

    def canonical_forms(self) -> list[str]:
        """Canonical string of every subtree; siblings sorted, so two
        subtrees get the same string iff they are unordered-isomorphic."""
        canon = [""] * len(self)
        for x in reversed(self.preorder):
            kids = self.children[x]
            if not kids:
                canon[x] = self.labels[x]
            else:
                parts = sorted(self.edge[c].value + canon[c] for c in kids)
                canon[x] = self.labels[x] + "(" + ",".join(parts) + ")"
        return canon

    def canonical(self) -> str:
        if self._canon is None:
            self._canon = self.canonical_forms()[self.root]
        return self._canon

    def __eq__(self, other) -> bool:
        if not isinstance(other, Pattern):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash(self.canonical())

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.canonical()!r})"


class Tree(Pattern):
    """A pattern with no descendant edges and no wildcard labels."""

    _require_tree = True
    __slots__ = ()


def validate(s, require_tree: bool = False) -> None:
    """Re-check the invariants of a built structure."""
    check_structure(s.labels, s.edges(), s.root, require_tree=require_tree)


def lca(s: Pattern, a: int, b: int) -> int:
    return s.lca(a, b)


def is_ancestor(s: Pattern, a: int, b: int) -> bool:
    return s.is_ancestor(a, b)


def depth(s: Pattern, n: int) -> int:
    return s.node_depth(n)


def degree(s: Pattern, n: int) -> int:
    return s.degree(n)


def height(s: Pattern) -> int:
    return s.height


def subtree_size(s: Pattern, n: int) -> int:
    return s.subtree_size(n)


def as_tree(p: Pattern) -> Tree:
    """Re-validate a pattern as a tree."""
    if isinstance(p, Tree):
        return p
    return Tree(p.labels, p.edges(), p.root)
