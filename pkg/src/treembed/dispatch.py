"""Route an instance to the cheapest sound decision procedure.

==========================  ======  ==================  ==================  ==========
pattern fragment            std     inj                 anc                 lca
==========================  ======  ==================  ==================  ==========
unconstrained               P       NP-complete         NP-complete         P
degree <= 1 (paths)         P       P                   P                   P
degree <= k, k >= 2         P       NP-complete         P                   P
height <= 1                 P       P                   NP-complete         P
height <= k, k >= 2         P       NP-complete         NP-complete         P
wildcards only / none       P       NP-complete         NP-complete         P
no child edges              P       NP-complete         NP-complete         P
no descendant edges         P       P                   P                   P
==========================  ======  ==================  ==================  ==========
"""
from __future__ import annotations

from .exact import SearchConfig, solve_anc, solve_inj
from .oracle import CheckResult, EmbeddingKind
from .poly import (
    DEFAULT_ANC_BUDGET,
    BudgetExceeded,
    anc_cost_estimate,
    check_anc_bounded,
    check_inj_height1,
    check_lca,
    check_std,
)
from .tree import Pattern


def dispatch(
    t: Pattern,
    p: Pattern,
    kind: EmbeddingKind,
    *,
    witness: bool = True,
    anc_budget: int = DEFAULT_ANC_BUDGET,
    search: SearchConfig | None = None,
) -> CheckResult:
    """Decide ``t`` against ``p`` for ``kind``.

    Path patterns go to the standard checker for every kind, descendant-free
    patterns to the lca checker for every injective kind.  Ancestor
    preservation uses the bounded-degree table while its worst-case tuple
    count stays within ``anc_budget``; weak injectivity uses the counting
    check for height at most one.  Everything else falls through to exact
    search, whose verdict may be ``None`` if ``search.node_budget`` runs out.
    """
    if kind is EmbeddingKind.STD:
        res, route = check_std(t, p, witness=witness), "std"
    elif p.is_path():
        res, route = check_std(t, p, witness=witness), "path pattern"
    elif not p.has_desc_edges():
        res, route = check_lca(t, p, witness=witness), "no descendant edges"
    elif kind is EmbeddingKind.LCA:
        res, route = check_lca(t, p, witness=witness), "lca"
    elif kind is EmbeddingKind.ANC:
        estimate = anc_cost_estimate(t, p)
        res = None
        route = f"exact (estimated {estimate} tuples > {anc_budget})"
        if estimate <= anc_budget:
            try:
                res, route = check_anc_bounded(t, p, witness=witness, budget=anc_budget), "bounded degree"
            except BudgetExceeded:
                route = "exact (tuple search over budget)"
        if res is None:
            res = solve_anc(t, p, search or SearchConfig(find_witness=witness))
    elif p.height <= 1:
        res, route = check_inj_height1(t, p, witness=witness), "height <= 1"
    else:
        res, route = solve_inj(t, p, search or SearchConfig(find_witness=witness)), "exact"
    res.kind = kind
    res.notes["route"] = route
    return res
