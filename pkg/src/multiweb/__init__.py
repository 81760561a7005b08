"""Colored multiwebs (partial-dimer tilings) on graphs.

Exact partition functions and moments on small graphs, the critical gauge
and growth rate, the Gaussian law of tile counts, closed forms for odd
cycles, five-vertex window statistics, and a heat-bath sampler.
"""

from .errors import (InfeasibleMultiplicity, InitFailure, InvalidArgument, InvalidEdge, MultiwebError,
                     NoConvergence, NotFeasible, ResourceLimit, WindowWraps)
from .gauge import check_feasible, growth_rate, solve_critical_gauge
from .graph import Graph, graph_from_json, make_complete_bipartite, make_cycle, make_graph, make_path
from .laplacian import GaussianLaw, build_laplacian, gaussian_law, pseudo_inverse_on_image
from .polynomial import exact_covariance, exact_moments, partition_function_exact, tiling_polynomial
from .tiles import count_tiles, enumerate_tiles, homogenize, incidence_matrix

__version__ = "0.1.0"

__all__ = [
    "Graph", "make_graph", "make_cycle", "make_path", "make_complete_bipartite", "graph_from_json",
    "enumerate_tiles", "count_tiles", "homogenize", "incidence_matrix",
    "tiling_polynomial", "partition_function_exact", "exact_moments", "exact_covariance",
    "solve_critical_gauge", "check_feasible", "growth_rate",
    "build_laplacian", "pseudo_inverse_on_image", "gaussian_law", "GaussianLaw",
    "MultiwebError", "InvalidEdge", "InvalidArgument", "ResourceLimit", "InfeasibleMultiplicity",
    "NotFeasible", "NoConvergence", "WindowWraps", "InitFailure",
]
