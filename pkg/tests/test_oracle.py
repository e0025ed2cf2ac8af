import pytest

from treembed.oracle import (
    KINDS,
    EmbeddingKind,
    ForeignNode,
    InstanceTooLarge,
    PartialMapping,
    brute_force,
    verify,
)
from treembed.textio import parse_pattern, parse_tree

K = EmbeddingKind


def test_kind_order():
    assert K.STD < K.INJ < K.ANC < K.LCA
    assert not K.STD.injective and all(k.injective for k in KINDS[1:])


def test_verify_fig1_t3_witness_all_kinds():
    t = parse_tree("f(a(b,g(b(c))))")
    p = parse_pattern("f/a[.//b/c]//b")
    # pattern preorder: f, a, b(with c), c, b ; tree ids: f0 a1 b2 g3 b4 c5
    h = (0, 1, 4, 5, 2)
    for k in KINDS:
        assert verify(t, p, h, k)


def test_verify_rejects_non_injective_for_inj():
    t = parse_tree("f(a(b(c)))")
    p = parse_pattern("f/a[.//b/c]//b")
    h = (0, 1, 2, 3, 2)
    assert verify(t, p, h, K.STD)
    assert not verify(t, p, h, K.INJ)


def test_verify_rejects_broken_ancestry_for_anc():
    # t1 = f(a(b(b(c)))): the plain b maps onto the ancestor of the b/c branch
    t = parse_tree("f(a(b(b(c))))")
    p = parse_pattern("f/a[.//b/c]//b")
    h = (0, 1, 3, 4, 2)
    assert verify(t, p, h, K.INJ)
    assert not verify(t, p, h, K.ANC)


def test_verify_rejects_lca_violation():
    t = parse_tree("f(a(g(b,b(c))))")
    p = parse_pattern("f/a[.//b/c]//b")
    h = (0, 1, 4, 5, 3)
    assert verify(t, p, h, K.ANC)
    assert not verify(t, p, h, K.LCA)


def test_verify_edge_and_label_conditions():
    t = parse_tree("r(a(b))")
    assert not verify(t, parse_pattern("r/b"), (0, 2), K.STD)       # child edge skips a level
    assert verify(t, parse_pattern("r//b"), (0, 2), K.STD)
    assert not verify(t, parse_pattern("r//*"), (0, 0), K.STD)      # descendant must be proper
    assert not verify(t, parse_pattern("r/c"), (0, 1), K.STD)       # label
    assert not verify(t, parse_pattern("a"), (1,), K.STD)           # root to root
    assert verify(t, parse_pattern("*/*"), (0, 1), K.STD)


def test_verify_accepts_mapping_and_rejects_partial():
    t, p = parse_tree("r(a)"), parse_pattern("r/a")
    assert verify(t, p, {0: 0, 1: 1}, K.LCA)
    with pytest.raises(PartialMapping):
        verify(t, p, {0: 0}, K.STD)
    with pytest.raises(PartialMapping):
        verify(t, p, (0,), K.STD)
    with pytest.raises(ForeignNode):
        verify(t, p, (0, 7), K.STD)
    with pytest.raises(ForeignNode):
        verify(t, p, {0: 0, 1: 1, 5: 0}, K.STD)


def test_brute_force_fig1(fig1):
    trees, p, expected = fig1
    for name, t in trees.items():
        for k in KINDS:
            res = brute_force(t, p, k)
            assert res.verdict is expected[name][k.value], (name, k)
            if res.verdict:
                assert verify(t, p, res.witness, k)


def test_brute_force_first_witness_is_deterministic():
    t = parse_tree("r(a,a)")
    p = parse_pattern("r/a")
    assert brute_force(t, p, K.STD).witness == (0, 1)


def test_brute_force_size_guard():
    t = parse_tree("r(" + ",".join(["a"] * 20) + ")")
    with pytest.raises(InstanceTooLarge):
        brute_force(t, parse_pattern("r/a"), K.STD)
    assert brute_force(t, parse_pattern("r/a"), K.STD, force=True).verdict
