"""Lower bounds on the algebraic connectivity of a graph from edge path loads.

The main entry points::

    from cgsbound import generate, compute_report
    compute_report(generate("petersen"))
"""
from .bounds import BoundsReport, check_report, compute_report, lu_bound, mohar_bound
from .errors import CGSError
from .graph import Graph, GraphFamily, generate, parse_edge_list, read_edge_list
from .paths import apsp
from .scores import EdgeScores, cgs_bound, scores_brute_force, scores_single_path, scores_uniform
from .spectral import algebraic_connectivity, eigen_lambda2, fiedler_quotient, laplacian
from .strategy import PathStrategy, lp_oracle_small, optimize_strategy, strategy_scores, uniform_strategy

__version__ = "0.1.0"

__all__ = [
    "BoundsReport",
    "CGSError",
    "EdgeScores",
    "Graph",
    "GraphFamily",
    "PathStrategy",
    "algebraic_connectivity",
    "apsp",
    "cgs_bound",
    "check_report",
    "compute_report",
    "eigen_lambda2",
    "fiedler_quotient",
    "generate",
    "laplacian",
    "lp_oracle_small",
    "lu_bound",
    "mohar_bound",
    "optimize_strategy",
    "parse_edge_list",
    "read_edge_list",
    "scores_brute_force",
    "scores_single_path",
    "scores_uniform",
    "strategy_scores",
    "uniform_strategy",
]
