"""Exact maximum-weight stable set via a Lagrangian decomposition of the
representatives formulation, plus a clique-cover branch-and-bound comparator."""

__version__ = "0.1.0"

from .graph import (Graph, VertexOrdering, anti_neighbors_after, build_ordering,  # noqa: E402
                    erdos_renyi, induced_subgraph, parse_dimacs, write_dimacs)
from .oracle import OracleResult, brute_force_mwss  # noqa: E402
from .baseline import SearchLimits, SolveResult, clique_cover_bound, solve_baseline  # noqa: E402
from .decomposition import (BlockSystem, DualEvaluation, DualResult, Multipliers,  # noqa: E402
                            SubgradientParams, build_blocks, evaluate_dual,
                            lagrangian_heuristic, subgradient_optimize)
from .bnb import BnbParams, NodeState, apply_branch, select_branch_vertex, solve_decomposition  # noqa: E402

__all__ = [
    "Graph", "VertexOrdering", "anti_neighbors_after", "build_ordering", "erdos_renyi",
    "induced_subgraph", "parse_dimacs", "write_dimacs", "OracleResult", "brute_force_mwss",
    "SearchLimits", "SolveResult", "clique_cover_bound", "solve_baseline", "BlockSystem",
    "DualEvaluation", "DualResult", "Multipliers", "SubgradientParams", "build_blocks",
    "evaluate_dual", "lagrangian_heuristic", "subgradient_optimize", "BnbParams", "NodeState",
    "apply_branch", "select_branch_vertex", "solve_decomposition",
]
