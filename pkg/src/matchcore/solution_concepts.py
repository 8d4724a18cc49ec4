"""Covering-based refinements of the weak core and related set solutions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .config import Caps
from .dominance import DominanceGraph, dominance_graph
from .errors import CapExceeded, DomainError
from .market_model import Market, Matching, MatchingSet
from .preference_core import Side
from .stability import weak_core


def uncovered_within(beats, members: Iterable[int]) -> frozenset:
    """Miller-uncovered elements of ``members`` using ``beats`` (index -> strictly beaten set).

    x covers y inside T when x beats y and x beats everything in T that y beats.
    """
    t = frozenset(members)
    out = set()
    for y in t:
        down = beats[y] & t
        if not any(y in beats[x] and down <= beats[x] for x in t if x != y):
            out.add(y)
    return frozenset(out)


@dataclass(frozen=True)
class CoveringRelation:
    base: DominanceGraph
    pairs: frozenset  # (coverer, covered) index pairs

    def is_antisymmetric(self) -> bool:
        return not any((y, x) in self.pairs for x, y in self.pairs)

    def is_transitive(self) -> bool:
        by_src: dict = {}
        for x, y in self.pairs:
            by_src.setdefault(x, set()).add(y)
        return all((x, z) in self.pairs for x, y in self.pairs for z in by_src.get(y, ()))

    def matching_pairs(self) -> list[tuple]:
        d = self.base.domain
        return [(d[x], d[y]) for x, y in sorted(self.pairs)]


def miller_covers(g: DominanceGraph, a: Matching, b: Matching) -> bool:
    x, y = g.idx(a), g.idx(b)
    return y in g.beats[x] and g.beats[y] <= g.beats[x]


def covering_relation(g: DominanceGraph) -> CoveringRelation:
    n = len(g.domain)
    pairs = frozenset((x, y) for x in range(n) for y in g.beats[x] if g.beats[y] <= g.beats[x])
    return CoveringRelation(g, pairs)


def miller_uncovered(g: DominanceGraph) -> MatchingSet:
    return g.subset(uncovered_within(g.beats, range(len(g.domain))))


def compromise_core(market: Market, caps: Caps | None = None) -> MatchingSet:
    """Weak-core matchings not Miller-covered by another weak-core matching."""
    return miller_uncovered(dominance_graph(market, weak_core(market, caps), caps))


def fisher_covers(g: DominanceGraph, a: Matching, b: Matching) -> bool:
    x, y = g.idx(a), g.idx(b)
    return y in g.beats[x] and g.beaten_by[x] <= g.beaten_by[y]


def fisher_uncovered_within(beats, beaten_by, members: Iterable[int]) -> frozenset:
    t = frozenset(members)
    out = set()
    for y in t:
        if not any(y in beats[x] and (beaten_by[x] & t) <= beaten_by[y] for x in t if x != y):
            out.add(y)
    return frozenset(out)


def fisher_uncovered(g: DominanceGraph) -> MatchingSet:
    return g.subset(fisher_uncovered_within(g.beats, g.beaten_by, range(len(g.domain))))


# -- side-optimal cores -------------------------------------------------------


def side_prefers(market: Market, a: Matching, b: Matching, side: Side) -> bool:
    """Pareto comparison for one side: nobody there loses, somebody gains.

    Unlike the coalitional comparison, the set of partners may change.
    """
    market.require(a, b)
    agents = market.men if side is Side.MAN else market.women
    gain = False
    for i in agents:
        p = market.prefs[i]
        if p.prefers(b[i], a[i]):
            return False
        gain = gain or p.prefers(a[i], b[i])
    return gain


def side_order(market: Market, matchings: MatchingSet, side: Side) -> frozenset:
    n = len(matchings)
    return frozenset(
        (x, y) for x in range(n) for y in range(n) if x != y and side_prefers(market, matchings[x], matchings[y], side)
    )


def side_optimal_core(
    market: Market, side: Side, caps: Caps | None = None, *, compromise: MatchingSet | None = None, quantify_over: str = "compromise"
) -> MatchingSet:
    """Elements of the compromise core not covered under the side's Pareto order.

    With ``quantify_over="weak"`` the second covering clause ranges over the
    whole weak core instead of the compromise core.
    """
    if compromise is None:
        compromise = compromise_core(market, caps)
    if quantify_over == "compromise":
        universe = tuple(compromise)
    elif quantify_over == "weak":
        universe = weak_core(market, caps)
    else:
        raise ValueError(f"quantify_over must be 'compromise' or 'weak', not {quantify_over!r}")
    pos = {mu: k for k, mu in enumerate(universe)}
    order = side_order(market, universe, side)
    beats = [frozenset(y for x2, y in order if x2 == x) for x in range(len(universe))]
    members = [pos[mu] for mu in compromise]
    out = []
    for mu in compromise:
        y = pos[mu]
        covered = any(y in beats[x] and beats[y] <= beats[x] for x in members if x != y)
        if not covered:
            out.append(mu)
    return tuple(out)


def side_covering_pairs(market: Market, matchings: MatchingSet, side: Side) -> frozenset:
    order = side_order(market, matchings, side)
    n = len(matchings)
    beats = [frozenset(y for x2, y in order if x2 == x) for x in range(n)]
    return frozenset((x, y) for x in range(n) for y in beats[x] if beats[y] <= beats[x])


# -- vNM stable sets ----------------------------------------------------------


def is_vnm_stable(g: DominanceGraph, members: Iterable[int]) -> bool:
    s = frozenset(members)
    if any(g.beats[x] & s for x in s):
        return False
    return all(g.beaten_by[y] & s for y in range(len(g.domain)) if y not in s)


def vnm_stable_sets(g: DominanceGraph, caps: Caps | None = None) -> list[MatchingSet]:
    """Every internally and externally stable subset of the domain, in canonical order."""
    caps = caps or Caps()
    n = len(g.domain)
    if n > caps.vnm:
        raise CapExceeded("vnm", n, caps.vnm)
    forced = {y for y in range(n) if not g.beaten_by[y]}
    # Position after which every dominator of y has been decided.
    settled_at = [max(g.beaten_by[y]) if g.beaten_by[y] else -1 for y in range(n)]
    found: list[frozenset] = []
    chosen: set = set()
    dropped: list = []

    def ok_so_far(k: int) -> bool:
        return all(g.beaten_by[y] & chosen for y in dropped if settled_at[y] <= k)

    def rec(k: int):
        if k == n:
            if is_vnm_stable(g, chosen):
                found.append(frozenset(chosen))
            return
        clash = (g.beats[k] | g.beaten_by[k]) & chosen
        if not clash:
            chosen.add(k)
            if ok_so_far(k):
                rec(k + 1)
            chosen.discard(k)
        if k not in forced:
            dropped.append(k)
            if ok_so_far(k):
                rec(k + 1)
            dropped.pop()

    rec(0)
    found.sort(key=lambda s: sorted(s))
    return [g.subset(s) for s in found]


def vnm_stable_sets_bruteforce(g: DominanceGraph) -> list[MatchingSet]:
    n = len(g.domain)
    found = []
    for r in range(n + 1):
        for s in itertools.combinations(range(n), r):
            if is_vnm_stable(g, s):
                found.append(frozenset(s))
    found.sort(key=lambda s: sorted(s))
    return [g.subset(s) for s in found]


# -- external stability -------------------------------------------------------


@dataclass(frozen=True)
class ExternalStabilityReport:
    holds: bool
    witnesses: tuple  # ((outside matching, dominating core matching), ...)
    violation: Matching | None = None


def check_external_stability(core: MatchingSet, g: DominanceGraph) -> ExternalStabilityReport:
    """Every domain matching outside ``core`` must be strictly dominated from inside it."""
    inside = frozenset(g.idx(mu) for mu in core)
    witnesses = []
    for y, mu in enumerate(g.domain):
        if y in inside:
            continue
        doms = sorted(g.beaten_by[y] & inside)
        if not doms:
            return ExternalStabilityReport(False, tuple(witnesses), mu)
        witnesses.append((mu, g.domain[doms[0]]))
    return ExternalStabilityReport(True, tuple(witnesses))


def require_domain(g: DominanceGraph, matchings: Iterable[Matching]) -> None:
    for mu in matchings:
        if mu not in g.index:
            raise DomainError(f"matching {mu} is not in the graph domain")
