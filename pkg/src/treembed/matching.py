"""Maximum bipartite matching (Hopcroft-Karp)."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

INF = float("inf")


@dataclass(frozen=True)
class BipartiteGraph:
    """Left vertices ``0..n_left-1``, right vertices ``0..n_right-1``;
    ``adj[i]`` lists the right neighbours of left vertex ``i``."""

    n_left: int
    n_right: int
    adj: tuple[tuple[int, ...], ...]

    @classmethod
    def from_adjacency(cls, adj: Sequence[Sequence[int]], n_right: int | None = None):
        adj = tuple(tuple(a) for a in adj)
        if n_right is None:
            n_right = 1 + max((y for a in adj for y in a), default=-1)
        for i, a in enumerate(adj):
            for y in a:
                if not 0 <= y < n_right:
                    raise ValueError(f"left {i} adjacent to right {y} outside 0..{n_right - 1}")
        return cls(len(adj), n_right, adj)

    def edges(self) -> list[tuple[int, int]]:
        return [(i, y) for i, a in enumerate(self.adj) for y in a]


def hopcroft_karp(adj: Sequence[Sequence[int]], n_right: int) -> list[int]:
    """Return ``match_left`` (right partner of each left vertex, or -1)."""
    n_left = len(adj)
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    dist = [0.0] * n_left

    def bfs() -> bool:
        q = deque()
        for u in range(n_left):
            if match_l[u] < 0:
                dist[u] = 0
                q.append(u)
            else:
                dist[u] = INF
        found = False
        while q:
            u = q.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w < 0:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    q.append(w)
        return found

    def dfs(u: int) -> bool:
        # iterative layered DFS; left side is small here but trees can be wide
        stack = [(u, iter(adj[u]))]
        path = []
        while stack:
            x, it = stack[-1]
            advanced = False
            for v in it:
                w = match_r[v]
                if w < 0:
                    path.append((x, v))
                    for a, b in path:
                        match_l[a] = b
                        match_r[b] = a
                    return True
                if dist[w] == dist[x] + 1:
                    path.append((x, v))
                    stack.append((w, iter(adj[w])))
                    advanced = True
                    break
            if not advanced:
                dist[x] = INF
                stack.pop()
                if path:
                    path.pop()
        return False

    while bfs():
        for u in range(n_left):
            if match_l[u] < 0:
                dfs(u)
    return match_l


def max_bipartite_matching(g: BipartiteGraph) -> set[tuple[int, int]]:
    match_l = hopcroft_karp(g.adj, g.n_right)
    return {(u, v) for u, v in enumerate(match_l) if v >= 0}


def is_matching(g: BipartiteGraph, m: set[tuple[int, int]]) -> bool:
    edges = set(g.edges())
    lefts = [u for u, _ in m]
    rights = [v for _, v in m]
    return m <= edges and len(set(lefts)) == len(lefts) and len(set(rights)) == len(rights)


def has_augmenting_path(g: BipartiteGraph, m: set[tuple[int, int]]) -> bool:
    """Alternating BFS from every free left vertex (Berge's criterion)."""
    match_l = {u: v for u, v in m}
    match_r = {v: u for u, v in m}
    seen_r: set[int] = set()
    q = deque(u for u in range(g.n_left) if u not in match_l)
    seen_l = set(q)
    while q:
        u = q.popleft()
        for v in g.adj[u]:
            if v in seen_r:
                continue
            seen_r.add(v)
            if v not in match_r:
                return True
            w = match_r[v]
            if w not in seen_l:
                seen_l.add(w)
                q.append(w)
    return False
