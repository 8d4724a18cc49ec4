from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matchcore.config import Caps
from matchcore.errors import CapExceeded, CycleError, GroundSetMismatch, UnknownAlternative
from matchcore.preference_core import (
    AgentId,
    Relation,
    Side,
    TotalOrder,
    build_partial_order,
    compare,
    first_linear_extension,
    is_more_complete,
    linear_extensions,
)


def ex2_man():
    return build_partial_order(["w1", "w2", "w3", "self"], [("w2", "w3"), ("w1", "self"), ("w3", "self")])


def brute_extensions(po):
    out = []
    for perm in itertools.permutations(po.ground):
        pos = {a: i for i, a in enumerate(perm)}
        if all(pos[a] < pos[b] for a, b in po.strict):
            out.append(perm)
    return out


@st.composite
def acyclic_orders(draw, max_size=5):
    n = draw(st.integers(0, max_size))
    ground = [f"a{i}" for i in range(n)]
    order = draw(st.permutations(ground))
    pairs = [(order[i], order[j]) for i in range(n) for j in range(i + 1, n)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return build_partial_order(ground, [p for p, k in zip(pairs, keep) if k])


def test_agent_ids_order_and_names():
    m1, w2 = AgentId(Side.MAN, 1), AgentId(Side.WOMAN, 2)
    assert m1.name == "m1" and w2.name == "w2"
    assert m1 < w2 and m1.is_man and not w2.is_man
    assert Side.MAN.other is Side.WOMAN


def test_single_declared_pair_leaves_rest_incomparable():
    po = build_partial_order(["w1", "w2", "w3", "self"], [("w2", "w3")])
    assert po.strict == {("w2", "w3")}
    assert po.incomparable("w1", "w2") and po.incomparable("w1", "w3")


def test_empty_relation():
    po = build_partial_order(["w1", "self"])
    assert po.strict == frozenset()
    assert compare(po, "w1", "self") is Relation.INCOMPARABLE


def test_three_cycle_rejected_with_witness():
    with pytest.raises(CycleError) as err:
        build_partial_order("abc", [("a", "b"), ("b", "c"), ("c", "a")])
    assert set(err.value.cycle) >= {"a", "b", "c"}


def test_unknown_alternative():
    with pytest.raises(UnknownAlternative):
        build_partial_order("ab", [("a", "z")])


def test_compare_ex2_man():
    po = ex2_man()
    assert compare(po, "w2", "w3") is Relation.BETTER
    assert compare(po, "w3", "w2") is Relation.WORSE
    assert compare(po, "w1", "w2") is Relation.INCOMPARABLE
    assert compare(po, "w1", "w1") is Relation.EQUAL
    with pytest.raises(UnknownAlternative):
        compare(po, "w1", "w9")


def test_closure_adds_implied_pairs():
    po = build_partial_order("abc", [("a", "b"), ("b", "c")])
    assert po.prefers("a", "c")
    assert po.is_total()


def test_linear_extension_counts():
    assert len(linear_extensions(build_partial_order("ab"))) == 2
    chain = build_partial_order("abc", [("a", "b"), ("b", "c")])
    assert [t.ranking for t in linear_extensions(chain)] == [("a", "b", "c")]
    exts = linear_extensions(ex2_man())
    assert len(exts) == 3 == len(brute_extensions(ex2_man()))
    assert all(t.ranking[-1] == "self" for t in exts)


def test_linear_extension_cap():
    po = build_partial_order(range(9))
    with pytest.raises(CapExceeded):
        linear_extensions(po)
    assert len(linear_extensions(build_partial_order(range(3)), Caps(ground=3))) == 6


def test_more_complete():
    chain = build_partial_order("abc", [("a", "b"), ("b", "c")])
    ab = build_partial_order("abc", [("a", "b")])
    bc = build_partial_order("abc", [("b", "c")])
    assert is_more_complete(chain, chain)
    assert is_more_complete(chain, ab)
    assert not is_more_complete(ab, bc)
    with pytest.raises(GroundSetMismatch):
        is_more_complete(chain, build_partial_order("ab"))


def test_total_order_extends():
    t = TotalOrder(("w2", "w1", "w3", "self"))
    assert t.extends(ex2_man())
    assert not TotalOrder(("w3", "w2", "w1", "self")).extends(ex2_man())
    assert t.as_partial_order().is_total()


@settings(max_examples=60, deadline=None)
@given(acyclic_orders())
def test_extensions_match_permutation_filter(po):
    got = [t.ranking for t in linear_extensions(po)]
    assert got == sorted(got, key=lambda r: [po.ground.index(a) for a in r])
    assert sorted(got) == sorted(brute_extensions(po))
    if got:
        assert first_linear_extension(po).ranking == got[0]


@settings(max_examples=60, deadline=None)
@given(acyclic_orders())
def test_closure_is_idempotent(po):
    again = build_partial_order(po.ground, po.strict)
    assert again == po
    assert build_partial_order(po.ground, po.hasse_pairs()) == po
    for a, b in po.strict:
        assert (b, a) not in po.strict
