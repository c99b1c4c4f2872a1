"""Clique-density lower bound F_r, weighted-graph clique densities, and numerical
checks of the inequalities behind it."""

from .bounds import (DensityDecomposition, clique_bound, clique_bound_derivative, clique_bound_inverse,
                     power_lower_bound, decompose_density, ls_bound)
from .errors import (BreakpointError, CliqueDensityError, DegenerateLinkError, DivergenceError, DomainError,
                     FormatError, LimitError, NotStationaryError, ParameterError, UnsupportedWeightsError)
from .extremal import SimpleGraph, blowup, count_cliques, extremal_weighted
from .graph import (WeightedGraph, cauchy_chain_check, check_local_inequalities, clique_density, deficit,
                    link_graph, local_clique_stats, rooted_density, second_step_identity)
from .oracle import min_cliques, sweep
from .optimize import conditional_chain_check, minimize_deficit, stationarity_report

__version__ = "0.1.0"
