"""Bundled markets reproducing the worked examples, with their expected outcomes."""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from typing import Callable

from ..dominance import dominance_graph, top_cycle
from ..market_format import export_dot, parse_market
from ..market_model import Market, Matching, assign_labels, enumerate_matchings, label_sort_key
from ..preference_core import Side, TotalOrder
from ..solution_concepts import covering_relation, fisher_uncovered, miller_uncovered, side_optimal_core, vnm_stable_sets
from ..stability import completion_profiles, deferred_acceptance, is_individually_rational, is_stable_under, strong_core, weak_core

NAMES = ("ex1", "ex2", "prop3", "ex3", "lemma1", "a1", "a2")


def source(name: str) -> str:
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(NAMES)}")
    return resources.files(__name__).joinpath(f"{name}.mkt").read_text(encoding="utf-8")


def load(name: str) -> Market:
    return parse_market(source(name), name)


def labelled(market: Market, label: str) -> Matching:
    for lab, mu in market.labels:
        if lab == label:
            return mu
    raise KeyError(label)


@dataclass(frozen=True)
class Check:
    fixture: str
    name: str
    expected: object
    actual: object

    @property
    def ok(self) -> bool:
        return self.expected == self.actual


def _names(market: Market, domain, ms) -> list:
    labels = assign_labels(market, domain)
    return sorted((labels[mu] for mu in ms), key=label_sort_key)


def _mus(*ks) -> list:
    return [f"mu{k}" for k in ks]


def _has_three_cycle(g) -> bool:
    n = len(g.domain)
    return any(
        y in g.beats[x] and z in g.beats[y] and x in g.beats[z]
        for x in range(n)
        for y in range(n)
        for z in range(n)
        if len({x, y, z}) == 3
    )


_DOT_EDGE = re.compile(r'^\s*"([^"]+)" -> "([^"]+)"', re.M)


def _ex1(m: Market) -> list:
    w = weak_core(m)
    g = dominance_graph(m, w)
    mu = lambda k: labelled(m, f"mu{k}")
    return [
        ("weak core", _mus(*range(1, 8)), _names(m, w, w)),
        ("strong core", _mus(1, 2, 5), _names(m, w, strong_core(m))),
        ("compromise core", _mus(1, 2, 5, 6, 7), _names(m, w, miller_uncovered(g))),
        ("top cycle", _mus(1, 2, 5), _names(m, w, top_cycle(g))),
        ("mu2 > mu7 and mu7 > mu3", True, g.strictly(mu(2), mu(7)) and g.strictly(mu(7), mu(3))),
        ("mu2, mu3 unranked", True, not g.weakly(mu(2), mu(3)) and not g.weakly(mu(3), mu(2))),
    ]


def _ex2(m: Market) -> list:
    w = weak_core(m)
    g = dominance_graph(m, w)
    perfect = [mu for mu in enumerate_matchings(m) if all(mu[i] != i for i in m.agents)]
    return [
        ("weak core = perfect matchings", sorted(map(str, perfect)), sorted(map(str, w))),
        ("weak core size", 6, len(w)),
        ("strong core", [], _names(m, w, strong_core(m))),
        ("strict dominance 3-cycle", True, _has_three_cycle(g)),
        ("vnm stable sets", [], [_names(m, w, s) for s in vnm_stable_sets(g)]),
    ]


def _prop3(m: Market) -> list:
    allm = enumerate_matchings(m)
    profiles = list(completion_profiles(m))
    unstable_somewhere = all(any(not is_stable_under(m, p, mu) for p in profiles) for mu in allm)
    return [
        ("strong core = all matchings", sorted(map(str, allm)), sorted(map(str, strong_core(m)))),
        ("every matching unstable under some completion", True, unstable_somewhere),
    ]


def _ex3(m: Market) -> list:
    w = weak_core(m)
    g = dominance_graph(m, w)
    comp = miller_uncovered(g)
    women_rank = {}
    for i in m.agents:
        if i.is_man:
            women_rank[i] = TotalOrder(tuple(m.by_name(n) for n in ("w1", "w2", "w3")) + (i,))
        else:
            women_rank[i] = TotalOrder(tuple(m.by_name(n) for n in ("m2", "m3", "m1")) + (i,))
    da = deferred_acceptance(m, women_rank, Side.WOMAN)
    labels = assign_labels(m, w)
    return [
        ("weak core", _mus(1, 2, 3), _names(m, w, w)),
        ("compromise core = weak core", _mus(1, 2, 3), _names(m, w, comp)),
        ("women-optimal core", _mus(1, 2), _names(m, w, side_optimal_core(m, Side.WOMAN, compromise=comp))),
        ("women-proposing DA under m2>m3>m1", "mu3", labels.get(da)),
    ]


def _lemma1(m: Market) -> list:
    w = weak_core(m)
    g = dominance_graph(m, w)
    perfect = [mu for mu in w if all(mu[i] != i for i in m.agents)]
    a, b = perfect
    return [
        ("both perfect matchings weakly stable", 2, len(perfect)),
        ("perfect matchings unranked", True, not g.weakly(a, b) and not g.weakly(b, a)),
    ]


def _a1(m: Market) -> list:
    w = weak_core(m)
    g = dominance_graph(m, w)
    bad = m.matching((m.by_name("m1"), m.by_name("w3")))
    return [
        ("weak core", _mus(1, 2, 3), _names(m, w, w)),
        ("compromise core", _mus(2, 3), _names(m, w, miller_uncovered(g))),
        ("fisher uncovered", _mus(1, 3), _names(m, w, fisher_uncovered(g))),
        ("vnm stable sets", [_mus(1, 3)], [_names(m, w, s) for s in vnm_stable_sets(g)]),
        ("top cycle", _mus(3), _names(m, w, top_cycle(g))),
        ("(m1,w3) not individually rational", False, is_individually_rational(m, bad)),
    ]


def _a2(m: Market) -> list:
    w = weak_core(m)
    g = dominance_graph(m, w)
    comp = miller_uncovered(g)
    labels = assign_labels(m, w)
    dot = export_dot(g, covering_relation(g).matching_pairs(), labels, m.name)
    num = lambda s: int(s[2:])
    back = [(a, b) for a, b in _DOT_EDGE.findall(dot) if num(a) >= 7 and num(b) <= 6]
    m1, w4 = m.by_name("m1"), m.by_name("w4")
    return [
        ("weak core", _mus(*range(1, 13)), _names(m, w, w)),
        ("strong core", [], _names(m, w, strong_core(m))),
        ("compromise core", _mus(*range(7, 13)), _names(m, w, comp)),
        ("compromise core = {mu(m1) = w4}", sorted(map(str, comp)), sorted(str(mu) for mu in w if mu[m1] == w4)),
        ("DOT edges from mu7..mu12 to mu1..mu6", [], back),
    ]


_RUNNERS: dict[str, Callable[[Market], list]] = {
    "ex1": _ex1,
    "ex2": _ex2,
    "prop3": _prop3,
    "ex3": _ex3,
    "lemma1": _lemma1,
    "a1": _a1,
    "a2": _a2,
}


def run(name: str) -> list[Check]:
    m = load(name)
    return [Check(name, check, exp, act) for check, exp, act in _RUNNERS[name](m)]


def run_all() -> list[Check]:
    return [c for name in NAMES for c in run(name)]
