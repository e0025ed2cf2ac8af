import random

import numpy as np
import pytest

from treembed.instances import (
    enumerate_height1_patterns,
    enumerate_patterns,
    enumerate_trees,
    planted_pattern,
    random_deep_tree,
    random_pattern,
    random_tree,
)
from treembed.oracle import EmbeddingKind, brute_force, verify
from treembed.poly import (
    BudgetExceeded,
    HeightTooLarge,
    TreeIndex,
    anc_cost_estimate,
    check_anc_bounded,
    check_inj_height1,
    check_lca,
    check_std,
    counting_verdict,
    height_one_counts,
    lca_tables,
    std_tables,
)
from treembed.textio import parse_pattern, parse_tree

K = EmbeddingKind


def _small_pairs(seed, count, max_tree=12, max_pattern=7, alphabet=("a", "*", "*")):
    rng = random.Random(seed)
    for _ in range(count):
        t = random_deep_tree(rng, rng.randint(1, max_tree), window=rng.choice([2, 5, 50]))
        p = random_pattern(rng, rng.randint(1, max_pattern), alphabet, desc_prob=rng.random())
        yield t, p


@pytest.mark.parametrize("checker,kind", [(check_std, K.STD), (check_lca, K.LCA)])
def test_checker_matches_oracle_random(checker, kind):
    for t, p in _small_pairs(1, 1500):
        res = checker(t, p)
        assert res.verdict == brute_force(t, p, kind, force=True).verdict
        if res.verdict:
            assert verify(t, p, res.witness, kind)


def test_anc_bounded_matches_oracle_random():
    for t, p in _small_pairs(2, 1500):
        res = check_anc_bounded(t, p, budget=10**9)
        assert res.verdict == brute_force(t, p, K.ANC, force=True).verdict
        if res.verdict:
            assert verify(t, p, res.witness, K.ANC)


def test_anc_bounded_high_degree_tuple_search():
    # patterns with three or more children go through the explicit search
    rng = random.Random(3)
    for _ in range(400):
        t = random_tree(rng, rng.randint(4, 12), ("a",))
        p = random_pattern(rng, rng.randint(4, 7), ("a", "*"), desc_prob=0.8)
        res = check_anc_bounded(t, p, budget=10**9)
        assert res.verdict == brute_force(t, p, K.ANC, force=True).verdict


def test_lca_hall_and_matching_paths_agree():
    rng = random.Random(4)
    for _ in range(300):
        t = random_tree(rng, rng.randint(1, 25), ("a", "b"))
        p = random_pattern(rng, rng.randint(1, 9), ("a", "*"))
        a = check_lca(t, p, hall_max=6).verdict
        b = check_lca(t, p, hall_max=0).verdict
        assert a == b


def test_phi_tables_are_monotone():
    # Φ_m for lca is contained in Φ_m for std, for every pattern node
    rng = random.Random(5)
    for _ in range(200):
        t = random_tree(rng, rng.randint(1, 30), ("a", "b"))
        p = random_pattern(rng, rng.randint(1, 8))
        ti = TreeIndex(t)
        for s, l in zip(std_tables(ti, p), lca_tables(ti, p)):
            assert not np.any(l & ~s)


def test_fig1_matrix_poly(fig1):
    trees, p, expected = fig1
    for name, t in trees.items():
        assert check_std(t, p).verdict is expected[name]["std"]
        assert check_lca(t, p).verdict is expected[name]["lca"]
        assert check_anc_bounded(t, p).verdict is expected[name]["anc"]


def test_lca_large_tree_planted():
    rng = random.Random(6)
    t = random_tree(rng, 20_000)
    p = planted_pattern(rng, t, 300)
    res = check_lca(t, p)
    assert res.verdict and verify(t, p, res.witness, K.LCA)


def test_anc_budget_exceeded_raises():
    t = parse_tree("r(" + ",".join(f"a(b{i})" for i in range(8)) + ")")
    # root with four children: explicit tuple search with budget 1
    p = parse_pattern("r[.//b0][.//b1][.//b2]//c")
    with pytest.raises(BudgetExceeded):
        check_anc_bounded(t, parse_pattern("r[.//*][.//*][.//*]//*"), budget=1)
    assert check_anc_bounded(t, p).verdict is False


def test_anc_cost_estimate_counts_only_wide_nodes():
    t = parse_tree("r(a,b,c)")
    assert anc_cost_estimate(t, parse_pattern("r//a")) == 4 * 2
    assert anc_cost_estimate(t, parse_pattern("r[a][b]//c")) == 4 * 4**3 + 3 * 4


def test_height1_rejects_tall_patterns():
    with pytest.raises(HeightTooLarge):
        check_inj_height1(parse_tree("a(a(a))"), parse_pattern("a/a/a"))


def test_height1_counts_example():
    t = parse_tree("r(a(a,b),b)")
    p = parse_pattern("r[a][.//a]//*")
    c = height_one_counts(t, p)
    assert c.p_child == {"a": 1} and c.p_desc == {"a": 1, "*": 1}
    assert c.t_depth1 == {"a": 1, "b": 1} and c.t_depth_ge2 == {"a": 1, "b": 1}
    assert counting_verdict(c)


def test_min_reading_counterexample():
    t = parse_tree("a(a(a))")
    p = parse_pattern("a[a]/*")
    c = height_one_counts(t, p)
    assert counting_verdict(c, "min") is True
    assert counting_verdict(c, "max") is False
    assert brute_force(t, p, K.INJ).verdict is False
    with pytest.raises(ValueError):
        counting_verdict(c, "median")


def test_height1_counting_matching_oracle_exhaustive_small():
    trees = list(enumerate_trees(4))
    for p in enumerate_height1_patterns(3):
        for t in trees:
            res = check_inj_height1(t, p)
            want = brute_force(t, p, K.INJ).verdict
            assert res.notes["counting"] == res.notes["matching"] == res.verdict == want
            if want:
                assert verify(t, p, res.witness, K.INJ)


def test_std_exhaustive_small():
    trees = list(enumerate_trees(4))
    for p in enumerate_patterns(3):
        for t in trees:
            assert check_std(t, p).verdict == brute_force(t, p, K.STD).verdict
