import random

import pytest

from treembed.exact import (
    PRUNE_RULES,
    SearchConfig,
    assignment_order,
    default_budget,
    solve_anc,
    solve_inj,
)
from treembed.instances import random_deep_tree, random_pattern
from treembed.oracle import EmbeddingKind, brute_force, verify
from treembed.textio import parse_pattern, parse_tree

K = EmbeddingKind
SOLVERS = [(solve_inj, K.INJ), (solve_anc, K.ANC)]


def _instances(seed, count):
    rng = random.Random(seed)
    for _ in range(count):
        t = random_deep_tree(rng, rng.randint(1, 11), window=rng.choice([2, 5, 50]))
        p = random_pattern(rng, rng.randint(1, 7), ("a", "*", "*"), desc_prob=rng.random())
        yield t, p


@pytest.mark.parametrize("solver,kind", SOLVERS)
def test_solver_matches_oracle(solver, kind):
    for t, p in _instances(10, 1500):
        res = solver(t, p)
        assert res.verdict == brute_force(t, p, kind, force=True).verdict
        if res.verdict:
            assert verify(t, p, res.witness, kind)


@pytest.mark.parametrize("rule", sorted(PRUNE_RULES))
@pytest.mark.parametrize("solver,kind", SOLVERS)
def test_each_prune_rule_is_sound(solver, kind, rule):
    cfg = SearchConfig()
    for t, p in _instances(11, 300):
        assert solver(t, p, cfg).verdict == solver(t, p, cfg.without(rule)).verdict


@pytest.mark.parametrize("solver,kind", SOLVERS)
def test_no_pruning_and_given_order_agree(solver, kind):
    bare = SearchConfig(prune=frozenset(), order="given")
    for t, p in _instances(12, 300):
        assert solver(t, p).verdict == solver(t, p, bare).verdict


def test_witness_is_deterministic():
    t = parse_tree("r(a(b),a(b),a(c))")
    p = parse_pattern("r[a/b]//*")
    first = solve_inj(t, p).witness
    assert all(solve_inj(t, p).witness == first for _ in range(5))


def test_budget_exhaustion_is_unknown():
    t = parse_tree("r(" + ",".join(["a(a(a))"] * 6 + ["a(a)"] * 2) + ")")
    p = parse_pattern("r" + "[.//a/a/a]" * 6 + "//a/a/a")
    res = solve_inj(t, p, SearchConfig(node_budget=5))
    assert res.verdict is None and res.witness is None
    assert solve_inj(t, p).verdict is False


def test_find_witness_flag():
    t, p = parse_tree("r(a(b))"), parse_pattern("r//b")
    res = solve_anc(t, p, SearchConfig(find_witness=False))
    assert res.verdict is True and res.witness is None


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(node_budget=0)
    with pytest.raises(ValueError):
        SearchConfig(order="random")
    with pytest.raises(ValueError):
        SearchConfig(prune=frozenset({"magic"}))


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("TREEMBED_BUDGET", "123")
    assert default_budget() == 123
    assert SearchConfig().node_budget == 123
    monkeypatch.setenv("TREEMBED_BUDGET", "nonsense")
    assert default_budget() == 10**7


def test_assignment_order_is_preorder_compatible():
    p = parse_pattern("r[a][b/c/d]//e/f")
    for order in ("size_desc", "given"):
        seq = assignment_order(p, order)
        assert sorted(seq) == list(range(len(p)))
        seen = set()
        for m in seq:
            assert p.parent[m] < 0 or p.parent[m] in seen
            seen.add(m)
    big = assignment_order(p, "size_desc")
    assert p.labels[big[1]] == "b"


def test_fig1_exact(fig1):
    trees, p, expected = fig1
    for name, t in trees.items():
        assert solve_inj(t, p).verdict is expected[name]["inj"]
        assert solve_anc(t, p).verdict is expected[name]["anc"]
