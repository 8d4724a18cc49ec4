from __future__ import annotations

import pytest

from conftest import mu, nested_pair, seeded_markets
from matchcore.errors import CapExceeded, NotAnExtension
from matchcore.config import Caps
from matchcore.generate import random_market
from matchcore.market_format import parse_market
from matchcore.market_model import enumerate_matchings
from matchcore.preference_core import Side, TotalOrder
from matchcore.stability import (
    BlockingKind,
    completion_profiles,
    deferred_acceptance,
    find_stabilizing_completion,
    is_individually_rational,
    is_stable_under,
    is_strongly_stable,
    is_weakly_stable,
    strong_blocking_pairs,
    strong_core,
    strong_core_by_coalitions,
    weak_blocking_pairs,
    weak_core,
    weak_core_by_coalitions,
)


def names(pairs):
    return {(bp.man.name, bp.woman.name) for bp in pairs}


def perfect(m):
    return [x for x in enumerate_matchings(m) if all(x[i] != i for i in m.agents)]


def women_first(m, order=("m2", "m3", "m1")):
    """Admissions-market completion: women rank m2 > m3 > m1, men keep their total order."""
    out = {}
    for i in m.agents:
        if i.is_man:
            out[i] = TotalOrder(tuple(m.by_name(n) for n in ("w1", "w2", "w3")) + (i,))
        else:
            out[i] = TotalOrder(tuple(m.by_name(n) for n in order) + (i,))
    return out


def test_individual_rationality(ex1, a1):
    assert is_individually_rational(ex1, mu(ex1, 6))
    assert is_individually_rational(a1, a1.matching())
    assert not is_individually_rational(a1, a1.matching((a1.by_name("m1"), a1.by_name("w3"))))


def test_strong_blocking_pairs(ex2, ex3):
    g = ex3.by_name
    nu = ex3.matching((g("m1"), g("w1")), (g("m2"), g("w3")))
    assert ("m2", "w2") in names(strong_blocking_pairs(ex3, nu))
    for x in perfect(ex2):
        assert strong_blocking_pairs(ex2, x) == []
    for x in strong_core(ex3):
        assert strong_blocking_pairs(ex3, x) == []


def test_weak_blocking_pairs(ex1, ex2):
    w3 = ex2.by_name("w3")
    for x in perfect(ex2):
        m = x[w3]
        found = [bp for bp in weak_blocking_pairs(ex2, x) if (bp.man, bp.woman.name) == (m, "w2")]
        assert found and found[0].kind is BlockingKind.WEAK_VIA_WOMAN_INCOMPARABLE
    assert weak_blocking_pairs(ex1, mu(ex1, 3))
    aligned = parse_market("men m1\nwomen w1\npref m1 { w1 > @ }\npref w1 { m1 > @ }\n")
    assert weak_blocking_pairs(aligned, aligned.matching(aligned.agents)) == []


def test_cores_of_examples(ex1, ex2, a2):
    assert set(weak_core(ex1)) == set(enumerate_matchings(ex1))
    assert set(strong_core(ex1)) == {mu(ex1, k) for k in (1, 2, 5)}
    assert set(weak_core(ex2)) == set(perfect(ex2)) and len(perfect(ex2)) == 6
    assert strong_core(ex2) == ()
    w = weak_core(a2)
    m1 = a2.by_name("m1")
    assert len(w) == 12
    assert all(x[m1].name in ("w1", "w4") and all(x[i] != i for i in a2.agents) for x in w)
    assert set(w) == {mu(a2, k) for k in range(1, 13)}
    assert strong_core(a2) == ()


@pytest.mark.parametrize("m", list(seeded_markets(40, seed=11)), ids=lambda m: m.name)
def test_pairwise_and_coalition_forms_agree(m):
    assert weak_core(m) == weak_core_by_coalitions(m)
    assert strong_core(m) == strong_core_by_coalitions(m)
    assert set(strong_core(m)) <= set(weak_core(m))
    assert weak_core(m)


def test_debug_oracle_mode(ex1):
    from matchcore import config

    config.set_debug_oracle(True)
    try:
        assert len(weak_core(ex1)) == 7 and len(strong_core(ex1)) == 3
    finally:
        config.set_debug_oracle(False)


def test_prop3_completions(prop3):
    m1, w1 = prop3.agents
    matched, single = prop3.matching((m1, w1)), prop3.matching()
    up = {m1: TotalOrder((w1, m1)), w1: TotalOrder((m1, w1))}
    down = {m1: TotalOrder((m1, w1)), w1: TotalOrder((m1, w1))}
    assert is_stable_under(prop3, up, matched)
    assert not is_stable_under(prop3, down, matched)
    assert not is_stable_under(prop3, up, single)
    assert set(strong_core(prop3)) == {matched, single}


def test_not_an_extension(ex3):
    bad = women_first(ex3)
    man = ex3.by_name("m1")
    bad[man] = TotalOrder(tuple(reversed(bad[man].ranking)))
    with pytest.raises(NotAnExtension):
        is_stable_under(ex3, bad, ex3.matching())


def _brute_stable_somewhere(m, x):
    return any(is_stable_under(m, p, x) for p in completion_profiles(m))


@pytest.mark.parametrize("m", list(seeded_markets(25, seed=5, max_side=2)), ids=lambda m: m.name)
def test_weak_core_equals_stable_under_some_completion(m):
    w = set(weak_core(m))
    for x in enumerate_matchings(m):
        completion = find_stabilizing_completion(m, x)
        assert (completion is not None) == (x in w) == _brute_stable_somewhere(m, x)
        if completion is not None:
            assert is_stable_under(m, completion, x)


def test_stable_under_every_completion_implies_strongly_stable():
    # The converse fails; the one-man-one-woman market is the standard witness.
    for m in seeded_markets(25, seed=9, max_side=2):
        profiles = list(completion_profiles(m))
        for x in enumerate_matchings(m):
            if all(is_stable_under(m, p, x) for p in profiles):
                assert is_strongly_stable(m, x)


def test_stabilizing_completion_examples(ex1, ex3):
    completion = find_stabilizing_completion(ex1, mu(ex1, 6))
    assert completion is not None and is_stable_under(ex1, completion, mu(ex1, 6))
    g = ex3.by_name
    blocked = ex3.matching((g("m1"), g("w1")), (g("m2"), g("w3")))
    assert find_stabilizing_completion(ex3, blocked) is None
    assert is_stable_under(ex3, women_first(ex3), mu(ex3, 3))


def test_deferred_acceptance_example3(ex3):
    assert deferred_acceptance(ex3, women_first(ex3), Side.WOMAN) == mu(ex3, 3)
    men_da = deferred_acceptance(ex3, women_first(ex3), Side.MAN)
    assert is_stable_under(ex3, women_first(ex3), men_da)


def test_deferred_acceptance_mutual_tops():
    m = parse_market(
        "men m1 m2\nwomen w1 w2\n"
        "pref m1 { w1 > w2; w2 > @ }\npref m2 { w2 > w1; w1 > @ }\n"
        "pref w1 { m1 > m2; m2 > @ }\npref w2 { m2 > m1; m1 > @ }\n"
    )
    g = m.by_name
    ranks = {"m1": "w1 w2", "m2": "w2 w1", "w1": "m1 m2", "w2": "m2 m1"}
    profile = {i: TotalOrder(tuple(g(n) for n in ranks[i.name].split()) + (i,)) for i in m.agents}
    expected = m.matching((g("m1"), g("w1")), (g("m2"), g("w2")))
    assert deferred_acceptance(m, profile, Side.MAN) == expected
    assert deferred_acceptance(m, profile, Side.WOMAN) == expected


def test_deferred_acceptance_lands_in_weak_core(ex1):
    w = set(weak_core(ex1))
    for profile in completion_profiles(ex1):
        for side in Side:
            out = deferred_acceptance(ex1, profile, side)
            assert out in w and is_stable_under(ex1, profile, out)


def test_profile_cap():
    m = random_market(3, 3, 0.0, seed=0)
    with pytest.raises(CapExceeded):
        list(completion_profiles(m, Caps(profiles=1000)))


@pytest.mark.parametrize("seed", range(30))
def test_more_complete_profiles_shrink_the_weak_core(seed):
    fine, coarse = nested_pair(random_market(seed % 3 + 1, (seed // 3) % 3 + 1, 0.8, seed), seed)
    assert all(fine.prefs[i].strict >= coarse.prefs[i].strict for i in fine.agents)
    assert set(weak_core(fine)) <= set(weak_core(coarse))
    assert weak_core(fine)
