"""Decide embeddings of tree patterns (child and descendant edges,
wildcards) into unordered labeled trees under four semantics: standard,
weakly-injective, ancestor-preserving and lca-preserving."""
from .dispatch import dispatch
from .exact import SearchConfig, solve_anc, solve_inj
from .oracle import CheckResult, EmbeddingKind, brute_force, verify
from .poly import check_anc_bounded, check_inj_height1, check_lca, check_std
from .reductions import ReductionKind, generate, reduce_degree, sat_brute_force
from .textio import CnfFormula, parse_dimacs, parse_pattern, parse_tree, render_pattern, render_tree
from .tree import WILDCARD, EdgeKind, Pattern, Tree

__all__ = [
    "WILDCARD", "EdgeKind", "Pattern", "Tree",
    "CnfFormula", "parse_dimacs", "parse_pattern", "parse_tree", "render_pattern", "render_tree",
    "CheckResult", "EmbeddingKind", "brute_force", "verify",
    "check_std", "check_lca", "check_anc_bounded", "check_inj_height1",
    "SearchConfig", "solve_inj", "solve_anc",
    "dispatch",
    "ReductionKind", "generate", "reduce_degree", "sat_brute_force",
]
