"""Coalitional enforceability, the dominance relation and the top cycle."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

from .config import Caps
from .errors import DomainError, MarketMismatch
from .market_model import Market, Matching, MatchingSet, affected_agents, enumerate_matchings
from .stability import weak_core

Coalition = frozenset  # frozenset[AgentId], nonempty


def can_enforce(frm: Matching, to: Matching, s: Iterable) -> bool:
    """Whether coalition ``s`` can move the market from ``frm`` to ``to``.

    Every new match must be formed inside ``s``; every match that is broken
    must involve at least one member of ``s``.
    """
    if frm.agents != to.agents:
        raise MarketMismatch("matchings are over different agent sets")
    s = frozenset(s)
    for i in to.agents:
        j = to[i]
        if j != frm[i] and j != i:
            if i not in s or j not in s:
                return False
        elif j == i != frm[i]:
            if i not in s and frm[i] not in s:
                return False
    return True


def succ_s(market: Market, a: Matching, b: Matching, s: Iterable) -> bool:
    """``a`` beats ``b`` for coalition ``s``: same partner set, nobody worse, someone better."""
    market.require(a, b)
    s = frozenset(s)
    if {a[i] for i in s} != {b[i] for i in s}:
        return False
    gain = False
    for i in s:
        p = market.prefs[i]
        if p.prefers(b[i], a[i]):
            return False
        gain = gain or p.prefers(a[i], b[i])
    return gain


def _canonical_subsets(pool: list, required: frozenset) -> Iterator[frozenset]:
    """Supersets of ``required`` within ``pool``, by size then sorted members."""
    rest = [x for x in pool if x not in required]
    for k in range(len(rest) + 1):
        batch = [required | frozenset(extra) for extra in itertools.combinations(rest, k)]
        batch.sort(key=lambda s: tuple(sorted(s)))
        yield from batch


def dominates(market: Market, a: Matching, b: Matching) -> Coalition | None:
    """A coalition witnessing ``a`` dominates ``b`` (weakly), else None.

    Only agents whose partner differs between ``a`` and ``b`` are searched:
    an unaffected member adds the same partner to both sides of the set
    comparison and cannot change either enforceability clause. Members of new
    matches in ``a`` are always required.
    """
    market.require(a, b)
    moved = sorted(affected_agents(a, b))
    if not moved:
        return None
    required = frozenset(x for i in moved if a[i] != i for x in (i, a[i]))
    for s in _canonical_subsets(moved, required):
        if s and can_enforce(b, a, s) and succ_s(market, a, b, s):
            return s
    return None


def dominates_exhaustive(market: Market, a: Matching, b: Matching) -> Coalition | None:
    """Reference search over every nonempty subset of the agents."""
    market.require(a, b)
    for s in _canonical_subsets(sorted(market.agents), frozenset()):
        if s and can_enforce(b, a, s) and succ_s(market, a, b, s):
            return s
    return None


@dataclass(frozen=True)
class DominanceGraph:
    """Dominance over ``domain``; edge (x, y) on indices means domain[x] dominates domain[y]."""

    domain: MatchingSet
    edges: frozenset
    witness: dict = field(compare=False)

    @cached_property
    def strict_edges(self) -> frozenset:
        return frozenset((x, y) for x, y in self.edges if (y, x) not in self.edges)

    @cached_property
    def index(self) -> dict:
        return {mu: k for k, mu in enumerate(self.domain)}

    @cached_property
    def beats(self) -> tuple:
        """``beats[x]``: indices strictly dominated by x."""
        out = [set() for _ in self.domain]
        for x, y in self.strict_edges:
            out[x].add(y)
        return tuple(frozenset(s) for s in out)

    @cached_property
    def beaten_by(self) -> tuple:
        """``beaten_by[y]``: indices strictly dominating y."""
        out = [set() for _ in self.domain]
        for x, y in self.strict_edges:
            out[y].add(x)
        return tuple(frozenset(s) for s in out)

    def idx(self, mu: Matching) -> int:
        try:
            return self.index[mu]
        except KeyError:
            raise DomainError(f"matching {mu} is not in the graph domain") from None

    def weakly(self, a: Matching, b: Matching) -> bool:
        return (self.idx(a), self.idx(b)) in self.edges

    def strictly(self, a: Matching, b: Matching) -> bool:
        return (self.idx(a), self.idx(b)) in self.strict_edges

    def subset(self, idxs: Iterable[int]) -> MatchingSet:
        return tuple(self.domain[k] for k in sorted(idxs))


def dominance_graph(market: Market, domain: MatchingSet | None = None, caps: Caps | None = None) -> DominanceGraph:
    """The dominance relation with one witness coalition per edge.

    ``domain`` defaults to the weak core; it must consist of matchings of
    ``market``.
    """
    if domain is None:
        domain = weak_core(market, caps)
    else:
        domain = tuple(domain)
        if len(set(domain)) != len(domain):
            raise DomainError("domain has repeated matchings")
        market.require(*domain)
    edges = set()
    witness = {}
    for x, a in enumerate(domain):
        for y, b in enumerate(domain):
            if x == y:
                continue
            s = dominates(market, a, b)
            if s is not None:
                edges.add((x, y))
                witness[(x, y)] = s
    return DominanceGraph(tuple(domain), frozenset(edges), witness)


def all_matchings_graph(market: Market, caps: Caps | None = None) -> DominanceGraph:
    return dominance_graph(market, enumerate_matchings(market, caps), caps)


def transitive_closure(n: int, edges: Iterable[tuple]) -> set:
    succ = [set() for _ in range(n)]
    for x, y in edges:
        succ[x].add(y)
    closure = set()
    for x in range(n):
        seen = set()
        todo = list(succ[x])
        while todo:
            y = todo.pop()
            if y not in seen:
                seen.add(y)
                todo.extend(succ[y])
        closure.update((x, y) for y in seen)
    return closure


def top_cycle_indices(n: int, edges: Iterable[tuple]) -> frozenset:
    closure = transitive_closure(n, edges)
    return frozenset(x for x in range(n) if not any((y, x) in closure and (x, y) not in closure for y in range(n)))


def top_cycle(g: DominanceGraph) -> MatchingSet:
    """Maximal elements under the asymmetric part of the closed dominance relation."""
    return g.subset(top_cycle_indices(len(g.domain), g.edges))
