"""Markets, matchings and exhaustive matching enumeration."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from math import comb, factorial
from typing import Iterable, Mapping

from .config import Caps
from .errors import CapExceeded, MarketMismatch
from .preference_core import AgentId, PartialOrder, Side

_SINGLE = float("inf")


@dataclass(frozen=True)
class Matching:
    """An involution on the agent set; ``partner[i] == i`` means i is single."""

    assignment: tuple  # ((agent, partner), ...) sorted by agent

    def __post_init__(self):
        table = dict(self.assignment)
        if len(table) != len(self.assignment):
            raise ValueError("agent assigned twice")
        for i, j in self.assignment:
            if j not in table or table[j] != i:
                raise ValueError(f"not an involution at {i} -> {j}")
            if j != i and j.side == i.side:
                raise ValueError(f"same-side match {i} - {j}")

    @classmethod
    def from_pairs(cls, agents: Iterable[AgentId], pairs: Iterable[tuple]) -> "Matching":
        table = {a: a for a in agents}
        for x, y in pairs:
            for a in (x, y):
                if a not in table:
                    raise ValueError(f"unknown agent {a}")
                if table[a] != a:
                    raise ValueError(f"agent {a} matched twice")
            table[x], table[y] = y, x
        return cls(tuple(sorted(table.items())))

    @cached_property
    def _table(self) -> dict:
        return dict(self.assignment)

    def __getitem__(self, agent: AgentId) -> AgentId:
        return self._table[agent]

    @cached_property
    def agents(self) -> frozenset:
        return frozenset(self._table)

    @cached_property
    def pairs(self) -> tuple:
        """Matched (man, woman) pairs ordered by man."""
        return tuple((i, j) for i, j in self.assignment if i.is_man and j != i)

    @cached_property
    def sort_key(self) -> tuple:
        return tuple(j.index if j != i else _SINGLE for i, j in self.assignment if i.is_man)

    def __lt__(self, other: "Matching") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        return "{" + ", ".join(f"({m},{w})" for m, w in self.pairs) + "}"


MatchingSet = tuple  # tuple[Matching, ...] in canonical order


def canonical(matchings: Iterable[Matching]) -> MatchingSet:
    return tuple(sorted(set(matchings), key=lambda mu: mu.sort_key))


@dataclass(frozen=True)
class Market:
    men: tuple
    women: tuple
    prefs: Mapping = field(default_factory=dict)
    # Optional display names for particular matchings, as (label, Matching).
    labels: tuple = ()
    name: str = field(default="market", compare=False)

    def __post_init__(self):
        if any(a.side is not Side.MAN for a in self.men):
            raise ValueError("men roster contains a non-man")
        if any(a.side is not Side.WOMAN for a in self.women):
            raise ValueError("women roster contains a non-woman")
        if len(set(self.agents)) != len(self.agents):
            raise ValueError("duplicate agent in roster")
        for i in self.agents:
            po = self.prefs.get(i)
            if po is None:
                raise ValueError(f"missing preferences for {i}")
            if set(po.ground) != set(self.opposite(i)):
                raise ValueError(f"preferences of {i} are not over its opposite side")
        for label, mu in self.labels:
            self.require(mu)

    @cached_property
    def agents(self) -> tuple:
        return tuple(self.men) + tuple(self.women)

    def opposite(self, i: AgentId) -> tuple:
        side = self.women if i.is_man else self.men
        return tuple(side) + (i,)

    def pref(self, i: AgentId) -> PartialOrder:
        return self.prefs[i]

    def require(self, *mus: Matching) -> None:
        agents = frozenset(self.agents)
        for mu in mus:
            if mu.agents != agents:
                raise MarketMismatch("matching is over a different agent set")

    def matching(self, *pairs) -> Matching:
        return Matching.from_pairs(self.agents, pairs)

    def by_name(self, name: str) -> AgentId:
        for a in self.agents:
            if a.name == name:
                return a
        raise KeyError(name)

    def label_map(self) -> dict:
        return {mu: label for label, mu in self.labels}


def matching_count(n_men: int, n_women: int) -> int:
    return sum(comb(n_men, k) * comb(n_women, k) * factorial(k) for k in range(min(n_men, n_women) + 1))


def enumerate_matchings(market: Market, caps: Caps | None = None) -> MatchingSet:
    """Every matching of ``market`` in canonical order.

    Canonical order is lexicographic over the men's partner lists (in roster
    order), comparing women by index and ranking "single" last.
    """
    caps = caps or Caps()
    n = len(market.agents)
    if n > caps.agents:
        raise CapExceeded("agents", n, caps.agents)
    men = sorted(market.men)
    women = sorted(market.women)
    out: list[Matching] = []
    chosen: list = []
    used: set = set()

    def rec(k: int):
        if k == len(men):
            pairs = [(m, w) for m, w in zip(men, chosen) if w is not None]
            out.append(Matching.from_pairs(market.agents, pairs))
            return
        for w in women:
            if w not in used:
                used.add(w)
                chosen.append(w)
                rec(k + 1)
                chosen.pop()
                used.discard(w)
        chosen.append(None)
        rec(k + 1)
        chosen.pop()

    rec(0)
    return tuple(out)


def affected_agents(a: Matching, b: Matching) -> frozenset:
    if a.agents != b.agents:
        raise MarketMismatch("matchings are over different agent sets")
    return frozenset(i for i in a.agents if a[i] != b[i])


_LABEL_RE = re.compile(r"^(.*?)(\d+)$")


def label_sort_key(label: str):
    m = _LABEL_RE.match(label)
    return (m.group(1), int(m.group(2)), label) if m else (label, -1, label)


def assign_labels(market: Market, domain: MatchingSet) -> dict:
    """Labels for ``domain``: declared ones first, then ``mu<k>`` in canonical order.

    Undeclared matchings take the lowest unused ``mu<k>``, k counted from 1.
    """
    declared = market.label_map()
    taken = {declared[mu] for mu in domain if mu in declared}
    out = {}
    k = 1
    for mu in domain:
        if mu in declared:
            out[mu] = declared[mu]
            continue
        while f"mu{k}" in taken:
            k += 1
        out[mu] = f"mu{k}"
        taken.add(out[mu])
    return out
