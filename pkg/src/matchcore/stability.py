"""Blocking pairs, weak and strong cores, completions and deferred acceptance."""

from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterator, Mapping

from . import config
from .config import Caps
from .errors import CapExceeded, NotAnExtension
from .market_model import Market, Matching, MatchingSet, enumerate_matchings
from .preference_core import AgentId, Side, TotalOrder, build_partial_order, first_linear_extension, linear_extensions

Profile = Mapping  # AgentId -> TotalOrder


class BlockingKind(enum.Enum):
    STRONG = "strong"
    WEAK_VIA_MAN_INCOMPARABLE = "weak_via_man_incomparable"
    WEAK_VIA_WOMAN_INCOMPARABLE = "weak_via_woman_incomparable"


@dataclass(frozen=True)
class BlockingPair:
    man: AgentId
    woman: AgentId
    kind: BlockingKind


def is_individually_rational(market: Market, mu: Matching) -> bool:
    market.require(mu)
    return not any(market.prefs[i].prefers(i, mu[i]) for i in market.agents)


def _pair_kind(market: Market, mu: Matching, m: AgentId, w: AgentId) -> BlockingKind | None:
    pm, pw = market.prefs[m], market.prefs[w]
    m_gains = pm.prefers(w, mu[m])
    w_gains = pw.prefers(m, mu[w])
    if m_gains and w_gains:
        return BlockingKind.STRONG
    if w_gains and pm.incomparable(w, mu[m]):
        return BlockingKind.WEAK_VIA_MAN_INCOMPARABLE
    if m_gains and pw.incomparable(m, mu[w]):
        return BlockingKind.WEAK_VIA_WOMAN_INCOMPARABLE
    return None


def strong_blocking_pairs(market: Market, mu: Matching) -> list[BlockingPair]:
    market.require(mu)
    out = []
    for m in market.men:
        for w in market.women:
            if _pair_kind(market, mu, m, w) is BlockingKind.STRONG:
                out.append(BlockingPair(m, w, BlockingKind.STRONG))
    return out


def weak_blocking_pairs(market: Market, mu: Matching) -> list[BlockingPair]:
    """Pairs meeting any clause of weak blocking; includes strong blocking pairs."""
    market.require(mu)
    out = []
    for m in market.men:
        for w in market.women:
            kind = _pair_kind(market, mu, m, w)
            if kind is not None:
                out.append(BlockingPair(m, w, kind))
    return out


def is_weakly_stable(market: Market, mu: Matching) -> bool:
    return is_individually_rational(market, mu) and not strong_blocking_pairs(market, mu)


def is_strongly_stable(market: Market, mu: Matching) -> bool:
    return is_individually_rational(market, mu) and not weak_blocking_pairs(market, mu)


# -- coalition form (definitional oracles) ---------------------------------


def _closed_coalitions(mu2: Matching) -> Iterator[frozenset]:
    """Nonempty agent sets closed under ``mu2``: unions of its pairs/singletons."""
    comps = []
    for i, j in mu2.assignment:
        if i <= j:
            comps.append(frozenset((i, j)))
    for r in range(1, len(comps) + 1):
        for pick in itertools.combinations(comps, r):
            yield frozenset().union(*pick)


def strongly_blocked(market: Market, mu: Matching, matchings: MatchingSet) -> bool:
    """Some coalition rematches within itself and every member strictly gains."""
    for alt in matchings:
        if alt == mu:
            continue
        for s in _closed_coalitions(alt):
            if all(market.prefs[i].prefers(alt[i], mu[i]) for i in s):
                return True
    return False


def weakly_blocked(market: Market, mu: Matching, matchings: MatchingSet) -> bool:
    """Some coalition rematches within itself, nobody loses and someone gains."""
    for alt in matchings:
        for s in _closed_coalitions(alt):
            prefs = [market.prefs[i] for i in s]
            if any(p.prefers(mu[i], alt[i]) for p, i in zip(prefs, s)):
                continue
            if any(p.prefers(alt[i], mu[i]) for p, i in zip(prefs, s)):
                return True
    return False


def weak_core_by_coalitions(market: Market, caps: Caps | None = None) -> MatchingSet:
    allm = enumerate_matchings(market, caps)
    return tuple(mu for mu in allm if not strongly_blocked(market, mu, allm))


def strong_core_by_coalitions(market: Market, caps: Caps | None = None) -> MatchingSet:
    allm = enumerate_matchings(market, caps)
    return tuple(mu for mu in allm if not weakly_blocked(market, mu, allm))


# -- cores ------------------------------------------------------------------


def weak_core(market: Market, caps: Caps | None = None) -> MatchingSet:
    """Weakly stable matchings in canonical order."""
    core = tuple(mu for mu in enumerate_matchings(market, caps) if is_weakly_stable(market, mu))
    if config.DEBUG_ORACLE:
        assert core == weak_core_by_coalitions(market, caps), "weak core: stability and coalition forms differ"
    return core


def strong_core(market: Market, caps: Caps | None = None) -> MatchingSet:
    core = tuple(mu for mu in enumerate_matchings(market, caps) if is_strongly_stable(market, mu))
    if config.DEBUG_ORACLE:
        assert core == strong_core_by_coalitions(market, caps), "strong core: stability and coalition forms differ"
    return core


# -- completions ------------------------------------------------------------


def _check_profile(market: Market, completion: Profile) -> None:
    for i in market.agents:
        order = completion.get(i)
        if order is None or not order.extends(market.prefs[i]):
            raise NotAnExtension(f"completion for {i} does not extend its preferences")


def is_stable_under(market: Market, completion: Profile, mu: Matching) -> bool:
    """Classical stability of ``mu`` when every agent ranks by ``completion``."""
    market.require(mu)
    _check_profile(market, completion)
    for i in market.agents:
        if completion[i].prefers(i, mu[i]):
            return False
    for m in market.men:
        for w in market.women:
            if completion[m].prefers(w, mu[m]) and completion[w].prefers(m, mu[w]):
                return False
    return True


def find_stabilizing_completion(market: Market, mu: Matching) -> dict | None:
    """A completion under which ``mu`` is stable, or None if mu is not weakly stable.

    Each agent's partner is lifted above every alternative it was incomparable
    to; the closed order is then extended to the lexicographically first total
    order.
    """
    if not is_weakly_stable(market, mu):
        return None
    out = {}
    for i in market.agents:
        po = market.prefs[i]
        p = mu[i]
        lifted = set(po.strict) | {(p, j) for j in po.ground if po.incomparable(p, j)}
        out[i] = first_linear_extension(build_partial_order(po.ground, lifted))
    return out


def completion_profiles(market: Market, caps: Caps | None = None) -> Iterator[dict]:
    """Every completion profile: the product of per-agent linear extensions."""
    caps = caps or Caps()
    per_agent = [linear_extensions(market.prefs[i], caps) for i in market.agents]
    total = 1
    for exts in per_agent:
        total *= len(exts)
    if total > caps.profiles:
        raise CapExceeded("profiles", total, caps.profiles)
    for combo in itertools.product(*per_agent):
        yield dict(zip(market.agents, combo))


def deferred_acceptance(market: Market, completion: Profile, proposing: Side) -> Matching:
    """Gale-Shapley under a strict ``completion``; agents below self are unacceptable."""
    _check_profile(market, completion)
    proposers = sorted(market.men if proposing is Side.MAN else market.women)
    lists = {}
    for p in proposers:
        ranking = completion[p].ranking
        lists[p] = list(ranking[: ranking.index(p)])
    held: dict = {}  # receiver -> proposer
    nxt = {p: 0 for p in proposers}
    free = deque(proposers)
    while free:
        p = free.popleft()
        if nxt[p] >= len(lists[p]):
            continue
        r = lists[p][nxt[p]]
        nxt[p] += 1
        order = completion[r]
        if not order.prefers(p, r):
            free.appendleft(p)
            continue
        cur = held.get(r)
        if cur is None:
            held[r] = p
        elif order.prefers(p, cur):
            held[r] = p
            free.appendleft(cur)
        else:
            free.appendleft(p)
    return market.matching(*held.items())
