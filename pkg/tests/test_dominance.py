from __future__ import annotations

import pytest

from conftest import mu, seeded_markets
from matchcore.dominance import (
    all_matchings_graph,
    can_enforce,
    dominance_graph,
    dominates,
    dominates_exhaustive,
    succ_s,
    top_cycle,
    transitive_closure,
)
from matchcore.errors import DomainError
from matchcore.market_model import enumerate_matchings
from matchcore.stability import strong_core, weak_core


def agents(m, *names):
    return frozenset(m.by_name(n) for n in names)


def test_can_enforce(ex1):
    assert can_enforce(mu(ex1, 2), mu(ex1, 6), agents(ex1, "m2", "w2"))
    assert can_enforce(mu(ex1, 4), mu(ex1, 4), agents(ex1, "m1"))
    assert not can_enforce(mu(ex1, 1), mu(ex1, 6), agents(ex1, "m1", "w1"))
    # Breaking a match needs one of its members.
    assert can_enforce(mu(ex1, 6), mu(ex1, 2), agents(ex1, "w2"))
    assert not can_enforce(mu(ex1, 6), mu(ex1, 2), agents(ex1, "m1", "w1"))


def test_succ_s(ex1, ex2):
    everyone = frozenset(ex1.agents)
    assert succ_s(ex1, mu(ex1, 2), mu(ex1, 7), everyone)
    assert not succ_s(ex1, mu(ex1, 3), mu(ex1, 3), everyone)
    g = ex2.by_name
    m1, m2, m3, w1, w2, w3 = (g(n) for n in ("m1", "m2", "m3", "w1", "w2", "w3"))
    # m1 trades w3 for w2; m2 and m3 move between women they cannot compare.
    a = ex2.matching((m1, w2), (m2, w1), (m3, w3))
    b = ex2.matching((m1, w3), (m2, w2), (m3, w1))
    everyone = frozenset(ex2.agents)
    assert succ_s(ex2, a, b, everyone)
    assert not succ_s(ex2, b, a, everyone)
    # Here m2 would drop from w2 to w3, which he ranks lower.
    worse = ex2.matching((m1, w2), (m2, w3), (m3, w1))
    assert not succ_s(ex2, worse, b, {m1, m2, w2, w3})


def test_example1_edges(ex1):
    assert dominates(ex1, mu(ex1, 2), mu(ex1, 7)) is not None
    assert dominates(ex1, mu(ex1, 7), mu(ex1, 3)) is not None
    assert dominates(ex1, mu(ex1, 2), mu(ex1, 3)) is None
    assert dominates(ex1, mu(ex1, 3), mu(ex1, 2)) is None
    g = dominance_graph(ex1)
    strict = {(a, b) for a in range(1, 8) for b in range(1, 8) if g.strictly(mu(ex1, a), mu(ex1, b))}
    assert strict == {(2, 4), (2, 7), (5, 3), (5, 6), (6, 4), (7, 3)}
    # Dominance is not transitive.
    assert g.strictly(mu(ex1, 2), mu(ex1, 7)) and g.strictly(mu(ex1, 7), mu(ex1, 3))
    assert not g.weakly(mu(ex1, 2), mu(ex1, 3))


def test_a1_edges(a1):
    assert dominates(a1, mu(a1, 2), mu(a1, 1)) is not None
    assert dominates(a1, mu(a1, 3), mu(a1, 2)) is not None
    assert dominates(a1, mu(a1, 3), mu(a1, 1)) is None
    assert dominates(a1, mu(a1, 1), mu(a1, 3)) is None


def test_a2_lower_half_is_dominated(a2):
    g = dominance_graph(a2)
    lower = [mu(a2, k) for k in range(1, 7)]
    upper = [mu(a2, k) for k in range(7, 13)]
    for x in lower:
        assert any(g.strictly(y, x) for y in upper)
        assert not any(g.weakly(x, y) for y in upper)
    for y in upper:
        assert any(g.strictly(y, x) for x in lower)


def test_lemma1_perfect_matchings_unranked(lemma1):
    g = dominance_graph(lemma1)
    perfect = [x for x in g.domain if all(x[i] != i for i in lemma1.agents)]
    assert len(perfect) == 2
    a, b = perfect
    assert not g.weakly(a, b) and not g.weakly(b, a)


def test_singleton_domain_has_no_edges(ex1):
    g = dominance_graph(ex1, (mu(ex1, 3),))
    assert g.edges == frozenset()
    assert top_cycle(g) == (mu(ex1, 3),)
    with pytest.raises(DomainError):
        g.idx(mu(ex1, 2))


def test_top_cycle(ex1, a1):
    assert set(top_cycle(dominance_graph(ex1))) == {mu(ex1, k) for k in (1, 2, 5)}
    assert top_cycle(dominance_graph(a1)) == (mu(a1, 3),)
    edgeless = dominance_graph(ex1, (mu(ex1, 2), mu(ex1, 3)))
    assert set(top_cycle(edgeless)) == {mu(ex1, 2), mu(ex1, 3)}


def test_example2_has_strict_three_cycle(ex2):
    g = dominance_graph(ex2)
    n = len(g.domain)
    cycles = [
        (x, y, z)
        for x in range(n)
        for y in range(n)
        for z in range(n)
        if (x, y) in g.strict_edges and (y, z) in g.strict_edges and (z, x) in g.strict_edges
    ]
    assert cycles
    assert set(top_cycle(g)) == set(g.domain)


def test_transitive_closure():
    assert transitive_closure(3, [(0, 1), (1, 2)]) == {(0, 1), (1, 2), (0, 2)}


def _replay(m, a, b, s):
    return can_enforce(b, a, s) and succ_s(m, a, b, s)


@pytest.mark.parametrize("m", list(seeded_markets(40, seed=21)), ids=lambda m: m.name)
def test_restricted_search_agrees_with_all_subsets(m):
    allm = enumerate_matchings(m)
    for a in allm:
        for b in allm:
            s = dominates(m, a, b)
            assert s == dominates_exhaustive(m, a, b)
            if s is not None:
                assert _replay(m, a, b, s)


@pytest.mark.parametrize("m", list(seeded_markets(40, seed=33)), ids=lambda m: m.name)
def test_strong_core_is_never_strictly_dominated(m):
    g = dominance_graph(m)
    for x in strong_core(m):
        assert not g.beaten_by[g.idx(x)]


def _strong_pareto(m, a, b):
    gain = False
    for i in m.agents:
        p = m.prefs[i]
        if p.prefers(b[i], a[i]) or (a[i] != b[i] and not p.prefers(a[i], b[i])):
            return False
        gain = gain or p.prefers(a[i], b[i])
    return gain


@pytest.mark.parametrize("m", list(seeded_markets(40, seed=44)), ids=lambda m: m.name)
def test_strong_pareto_implies_dominance(m):
    allm = enumerate_matchings(m)
    for a in allm:
        for b in allm:
            if _strong_pareto(m, a, b):
                assert dominates(m, a, b) is not None


def test_graph_witnesses_replay(ex1, a2):
    for m in (ex1, a2):
        g = dominance_graph(m)
        for (x, y), s in g.witness.items():
            assert _replay(m, g.domain[x], g.domain[y], s)


def test_all_matchings_graph_contains_weak_core_graph(ex1):
    big = all_matchings_graph(ex1)
    small = dominance_graph(ex1, weak_core(ex1))
    for x, y in small.edges:
        assert big.weakly(small.domain[x], small.domain[y])
