"""Topological entropy and kneading data for piecewise affine interval maps.

The package works with eventually periodic symbol strings, the maps
``x -> beta x + alpha mod 1``, follower-set graphs of the shifts they
generate and the inverse problem of recovering ``(alpha, beta)``.
"""

from .algebraic import GOLDEN, PLASTIC, AlgebraicReal
from .betamaps import AlphaBetaParams, orbit_codings, star_strings
from .errors import *  # noqa: F401,F403
from .graph import FollowerGraph, build_graph, graph_entropy, two_cycle_entropy, word_count
from .inverse import InverseDecision, beta_hat, decide, kneading_residuals
from .piecewise import PiecewiseAffineSystem
from .solver import EntropyReport, compute_bar
from .strings import EPString, check_conditions, compare, parse_string, sup_shift

__version__ = "0.1.0"
