"""Seeded random preference profiles."""

from __future__ import annotations

import random

from .errors import BadDensity
from .market_model import Market
from .preference_core import AgentId, PartialOrder, Side, build_partial_order

MAX_SIDE = 8


def _thin(po: PartialOrder, density: float, rng: random.Random) -> PartialOrder:
    kept = [p for p in po.sorted_pairs() if rng.random() < density]
    return build_partial_order(po.ground, kept)


def random_market(n_men: int, n_women: int, density: float, seed: int, name: str | None = None) -> Market:
    """Draw a total order per agent, keep each strict pair with probability
    ``density`` and close the result transitively.

    The closure can reinstate dropped pairs, so density 1 gives complete
    preferences and density 0 gives total incomparability.
    """
    if not 0.0 <= density <= 1.0:
        raise BadDensity(f"density must lie in [0, 1], got {density}")
    for n in (n_men, n_women):
        if not 0 <= n <= MAX_SIDE:
            raise ValueError(f"side sizes must be between 0 and {MAX_SIDE}")
    rng = random.Random(seed)
    men = tuple(AgentId(Side.MAN, k) for k in range(1, n_men + 1))
    women = tuple(AgentId(Side.WOMAN, k) for k in range(1, n_women + 1))
    prefs = {}
    for i in men + women:
        ground = (women if i.is_man else men) + (i,)
        ranking = list(ground)
        rng.shuffle(ranking)
        pairs = [(ranking[a], ranking[b]) for a in range(len(ranking)) for b in range(a + 1, len(ranking))]
        kept = [p for p in pairs if density >= 1.0 or rng.random() < density]
        prefs[i] = build_partial_order(ground, kept)
    return Market(men, women, prefs, name=name or f"gen-{n_men}x{n_women}-{density}-{seed}")


def coarsen(market: Market, density: float, seed: int) -> Market:
    """A less complete profile: each agent keeps a random part of its strict pairs."""
    rng = random.Random(seed)
    prefs = {i: _thin(market.prefs[i], density, rng) for i in market.agents}
    return Market(market.men, market.women, prefs, name=f"{market.name}-coarse")
