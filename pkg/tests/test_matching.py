import itertools
import random

from hypothesis import given, settings
from hypothesis import strategies as st

from treembed.matching import (
    BipartiteGraph,
    has_augmenting_path,
    hopcroft_karp,
    is_matching,
    max_bipartite_matching,
)


def brute_max_matching(g: BipartiteGraph) -> int:
    """Largest k such that some k left vertices have distinct partners."""
    best = 0
    for k in range(1, g.n_left + 1):
        found = False
        for lefts in itertools.combinations(range(g.n_left), k):
            for rights in itertools.product(*(g.adj[u] for u in lefts)):
                if len(set(rights)) == k:
                    found = True
                    break
            if found:
                break
        if not found:
            break
        best = k
    return best


graphs = st.integers(0, 6).flatmap(
    lambda nl: st.integers(0, 6).flatmap(
        lambda nr: st.lists(
            st.lists(st.integers(0, max(nr - 1, 0)), max_size=nr if nr else 0, unique=True),
            min_size=nl, max_size=nl,
        ).map(lambda adj: BipartiteGraph.from_adjacency(adj, nr))
    )
)


@settings(max_examples=300, deadline=None)
@given(graphs)
def test_hopcroft_karp_is_maximum(g):
    m = max_bipartite_matching(g)
    assert is_matching(g, m)
    assert len(m) == brute_max_matching(g)
    assert not has_augmenting_path(g, m)


def test_empty_and_complete():
    assert hopcroft_karp([], 0) == []
    assert hopcroft_karp([[]], 3) == [-1]
    ml = hopcroft_karp([[0, 1, 2]] * 3, 3)
    assert sorted(ml) == [0, 1, 2]


def test_augmenting_path_detected_for_suboptimal_matching():
    g = BipartiteGraph.from_adjacency([[0, 1], [0]], 2)
    assert has_augmenting_path(g, {(0, 0)})
    assert not has_augmenting_path(g, {(0, 1), (1, 0)})


def test_large_random_graph_is_perfect_when_planted():
    rng = random.Random(0)
    n = 2000
    perm = list(range(n))
    rng.shuffle(perm)
    adj = [[perm[i]] + rng.sample(range(n), 3) for i in range(n)]
    ml = hopcroft_karp(adj, n)
    assert all(v >= 0 for v in ml) and len(set(ml)) == n


def test_from_adjacency_validates():
    import pytest
    with pytest.raises(ValueError):
        BipartiteGraph.from_adjacency([[3]], 2)
