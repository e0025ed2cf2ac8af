import random

from treembed.dispatch import dispatch
from treembed.exact import SearchConfig
from treembed.instances import random_deep_tree, random_pattern
from treembed.oracle import KINDS, EmbeddingKind, brute_force, verify
from treembed.textio import parse_pattern, parse_tree

K = EmbeddingKind


def route(t, p, kind, **kw):
    return dispatch(parse_tree(t), parse_pattern(p), kind, **kw).notes["route"]


def test_routes():
    assert route("r(a)", "r[a]//a", K.STD) == "std"
    assert route("r(a)", "r//a", K.INJ) == "path pattern"
    assert route("r(a,b)", "r[a]/b", K.ANC) == "no descendant edges"
    assert route("r(a,b)", "r[.//a]//b", K.LCA) == "lca"
    assert route("r(a,b)", "r[.//a]//b", K.ANC) == "bounded degree"
    assert route("r(a,b)", "r[.//a]//b", K.INJ) == "height <= 1"
    assert route("r(a(b))", "r[.//a/b]//b", K.INJ) == "exact"
    assert route("r(a,b,c)", "r[.//a][.//b]//c", K.ANC, anc_budget=10).startswith("exact")


def test_dispatch_matches_oracle_random():
    rng = random.Random(20)
    for _ in range(1000):
        t = random_deep_tree(rng, rng.randint(1, 11), window=rng.choice([2, 50]))
        p = random_pattern(rng, rng.randint(1, 7), ("a", "b", "*"), desc_prob=rng.random())
        for k in KINDS:
            res = dispatch(t, p, k)
            assert res.kind is k
            assert res.verdict == brute_force(t, p, k, force=True).verdict
            if res.verdict:
                assert verify(t, p, res.witness, k)


def test_unknown_only_from_exact_search():
    t = parse_tree("r(" + ",".join(["a(a(a))"] * 6 + ["a(a)"] * 2) + ")")
    p = parse_pattern("r" + "[.//a/a/a]" * 6 + "//a/a/a")
    res = dispatch(t, p, K.INJ, search=SearchConfig(node_budget=3))
    assert res.verdict is None and res.notes["route"] == "exact"
    assert dispatch(t, p, K.LCA).verdict is False


def test_witness_flag():
    res = dispatch(parse_tree("r(a)"), parse_pattern("r/a"), K.LCA, witness=False)
    assert res.verdict and res.witness is None
