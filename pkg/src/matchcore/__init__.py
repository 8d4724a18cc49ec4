"""Stability, dominance and refinement of the weak core for two-sided
matching markets with incomplete preferences."""

from __future__ import annotations

from .axiom_lab import BUILTIN_MAPS, COMPROMISE, RefinementMap, check_eb, check_et, check_im, verify_theorem1
from .config import Caps
from .dominance import DominanceGraph, dominance_graph, dominates, top_cycle
from .errors import MatchcoreError
from .market_format import export_dot, export_json, parse_market, serialize_market
from .market_model import Market, Matching, enumerate_matchings
from .preference_core import AgentId, PartialOrder, Side, TotalOrder, build_partial_order, linear_extensions
from .solution_concepts import compromise_core, fisher_uncovered, side_optimal_core, vnm_stable_sets
from .solve import solve
from .stability import deferred_acceptance, is_strongly_stable, is_weakly_stable, strong_core, weak_core

__version__ = "0.1.0"

__all__ = [
    "AgentId", "BUILTIN_MAPS", "COMPROMISE", "Caps", "DominanceGraph", "Market", "Matching",
    "MatchcoreError", "PartialOrder", "RefinementMap", "Side", "TotalOrder", "build_partial_order",
    "check_eb", "check_et", "check_im", "compromise_core", "deferred_acceptance", "dominance_graph",
    "dominates", "enumerate_matchings", "export_dot", "export_json", "fisher_uncovered",
    "is_strongly_stable", "is_weakly_stable", "linear_extensions", "parse_market", "serialize_market",
    "side_optimal_core", "solve", "strong_core", "top_cycle", "verify_theorem1", "vnm_stable_sets",
    "weak_core",
]
