"""Refinement maps over subsets of the weak core and the IM / EB / ET axiom checks.

A refinement map takes a set T of domain matchings and returns a nonempty
subset of T. The three axioms checked here:

* IM: every element of T that nothing in T strictly dominates is selected,
  and a T totally ordered by strict dominance yields exactly its maximum.
* EB: an element dominating nothing in T while dominated by something in T
  is excluded.
* ET: if x' is rejected from every {x, x', y} with y in T, it is rejected
  from T.

Subsets are handled internally as bitmasks over ``g.domain`` indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from .config import Caps
from .dominance import DominanceGraph, dominance_graph, top_cycle_indices
from .errors import CapExceeded, DomainError
from .market_model import Market, Matching, MatchingSet, assign_labels, label_sort_key
from .solution_concepts import fisher_uncovered_within, uncovered_within
from .stability import weak_core

AXIOMS = ("IM", "EB", "ET")


def _bits(mask: int) -> list[int]:
    out = []
    k = 0
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return out


def _mask(idxs: Iterable[int]) -> int:
    m = 0
    for k in idxs:
        m |= 1 << k
    return m


@dataclass(frozen=True)
class RefinementMap:
    """A named rule T -> G(T) on index sets of a dominance graph."""

    name: str
    rule: Callable[[DominanceGraph, frozenset], frozenset]

    def __call__(self, g: DominanceGraph, t: Iterable[Matching]) -> MatchingSet:
        idxs = frozenset(g.idx(mu) for mu in t)
        return g.subset(self.rule(g, idxs))


def _compromise_rule(g, t):
    return uncovered_within(g.beats, t)


def _top_cycle_rule(g, t):
    order = sorted(t)
    pos = {x: k for k, x in enumerate(order)}
    edges = [(pos[x], pos[y]) for x, y in g.edges if x in pos and y in pos]
    return frozenset(order[k] for k in top_cycle_indices(len(order), edges))


def _fisher_rule(g, t):
    return fisher_uncovered_within(g.beats, g.beaten_by, t)


def _undominated_rule(g, t):
    return frozenset(x for x in t if not (g.beaten_by[x] & t))


COMPROMISE = RefinementMap("compromise", _compromise_rule)
TOP_CYCLE = RefinementMap("top_cycle", _top_cycle_rule)
FISHER = RefinementMap("fisher_uncovered", _fisher_rule)
UNDOMINATED = RefinementMap("undominated", _undominated_rule)
IDENTITY = RefinementMap("identity", lambda g, t: frozenset(t))
FIRST = RefinementMap("first_element", lambda g, t: frozenset([min(t)]) if t else frozenset())

BUILTIN_MAPS = (COMPROMISE, TOP_CYCLE, FISHER, UNDOMINATED, IDENTITY, FIRST)


def up_set(g: DominanceGraph, mu: Matching, t: Iterable[Matching]) -> MatchingSet:
    """Members of ``t`` strictly dominating ``mu``."""
    idxs = _members(g, t)
    x = g.idx(mu)
    if x not in idxs:
        raise DomainError(f"{mu} is not in the given set")
    return g.subset(g.beaten_by[x] & idxs)


def down_set(g: DominanceGraph, mu: Matching, t: Iterable[Matching]) -> MatchingSet:
    """Members of ``t`` strictly dominated by ``mu``."""
    idxs = _members(g, t)
    x = g.idx(mu)
    if x not in idxs:
        raise DomainError(f"{mu} is not in the given set")
    return g.subset(g.beats[x] & idxs)


def _members(g: DominanceGraph, t: Iterable[Matching]) -> frozenset:
    return frozenset(g.idx(mu) for mu in t)


@dataclass(frozen=True)
class Counterexample:
    subset: MatchingSet
    matching: Matching
    explanation: str


@dataclass(frozen=True)
class RefinementReport:
    axiom: str
    passed: bool
    counterexample: Counterexample | None = None
    checked: int = 0  # number of subsets examined

    def to_dict(self, labels: dict) -> dict:
        out = {"axiom": self.axiom, "passed": self.passed, "subsets_checked": self.checked}
        if self.counterexample is not None:
            cx = self.counterexample
            out["counterexample"] = {
                "subset": sorted((labels[mu] for mu in cx.subset), key=label_sort_key),
                "matching": labels[cx.matching],
                "explanation": cx.explanation,
            }
        return out


class _Evaluator:
    """Memoized G on bitmasks, plus the precomputed dominance masks."""

    def __init__(self, G: RefinementMap, g: DominanceGraph):
        self.G, self.g = G, g
        self.n = len(g.domain)
        self.beats = [_mask(g.beats[x]) for x in range(self.n)]
        self.beaten_by = [_mask(g.beaten_by[x]) for x in range(self.n)]
        self._cache: dict = {}
        self._et_excluded: dict = {}

    def choose(self, tmask: int) -> int:
        hit = self._cache.get(tmask)
        if hit is None:
            hit = _mask(self.G.rule(self.g, frozenset(_bits(tmask))))
            self._cache[tmask] = hit
        return hit

    def excluded_from_triples(self, a: int, b: int) -> int:
        """Mask of y such that b is not chosen from {a, b, y}."""
        key = (a, b)
        hit = self._et_excluded.get(key)
        if hit is None:
            hit = 0
            base = (1 << a) | (1 << b)
            for y in range(self.n):
                if not self.choose(base | (1 << y)) >> b & 1:
                    hit |= 1 << y
            self._et_excluded[key] = hit
        return hit

    def cx(self, tmask: int, x: int, why: str) -> Counterexample:
        return Counterexample(self.g.subset(_bits(tmask)), self.g.domain[x], why)


def _im(ev: _Evaluator, tmask: int) -> Counterexample | None:
    chosen = ev.choose(tmask)
    members = _bits(tmask)
    for x in members:
        if not ev.beaten_by[x] & tmask and not chosen >> x & 1:
            return ev.cx(tmask, x, "undominated in T but not selected")
    # Strict complete order on T: every distinct pair ranked, ranking transitive.
    complete = all((ev.beats[x] | ev.beaten_by[x] | (1 << x)) & tmask == tmask for x in members)
    if complete and all(ev.beats[z] & tmask & ~ev.beats[x] == 0 for x in members for z in _bits(ev.beats[x] & tmask)):
        top = [x for x in members if ev.beats[x] & tmask == tmask & ~(1 << x)]
        if chosen != _mask(top):
            bad = next(iter(_bits(chosen ^ _mask(top))))
            return ev.cx(tmask, bad, "T is totally ordered by strict dominance but the choice is not its maximum")
    return None


def _eb(ev: _Evaluator, tmask: int) -> Counterexample | None:
    chosen = ev.choose(tmask)
    for x in _bits(tmask):
        if not ev.beats[x] & tmask and ev.beaten_by[x] & tmask and chosen >> x & 1:
            return ev.cx(tmask, x, "dominates nothing in T, is dominated within T, yet selected")
    return None


def _et(ev: _Evaluator, tmask: int) -> Counterexample | None:
    chosen = ev.choose(tmask)
    members = _bits(tmask)
    for b in members:
        if not chosen >> b & 1:
            continue
        for a in members:
            if a != b and tmask & ~ev.excluded_from_triples(a, b) == 0:
                return ev.cx(tmask, b, f"rejected from every triple with {ev.g.domain[a]} but selected from T")
    return None


_CHECKS = {"IM": _im, "EB": _eb, "ET": _et}


def _check(axiom: str, G: RefinementMap, t: Iterable[Matching], g: DominanceGraph) -> RefinementReport:
    ev = _Evaluator(G, g)
    tmask = _mask(_members(g, t))
    cx = _CHECKS[axiom](ev, tmask) if tmask else None
    return RefinementReport(axiom, cx is None, cx, checked=1)


def check_im(G: RefinementMap, t: Iterable[Matching], g: DominanceGraph) -> RefinementReport:
    return _check("IM", G, t, g)


def check_eb(G: RefinementMap, t: Iterable[Matching], g: DominanceGraph) -> RefinementReport:
    return _check("EB", G, t, g)


def check_et(G: RefinementMap, t: Iterable[Matching], g: DominanceGraph) -> RefinementReport:
    return _check("ET", G, t, g)


def subset_masks(n: int) -> list[int]:
    """Nonempty subsets of range(n), by size then lexicographically."""
    return sorted(range(1, 1 << n), key=lambda m: (bin(m).count("1"), _bits(m)))


@dataclass
class MapSweep:
    name: str
    reports: dict  # axiom -> RefinementReport
    valid: bool  # G(T) nonempty subset of T on every T
    satisfies_all: bool
    contained_in_compromise: bool | None  # only evaluated when satisfies_all
    containment_witness: Counterexample | None = None


def sweep(G: RefinementMap, g: DominanceGraph, masks: list[int] | None = None) -> MapSweep:
    """Run the three axioms (and validity) on every subset, keeping the first failure."""
    n = len(g.domain)
    masks = subset_masks(n) if masks is None else masks
    ev = _Evaluator(G, g)
    first: dict = {a: None for a in AXIOMS}
    valid = True
    for tmask in masks:
        chosen = ev.choose(tmask)
        if chosen == 0 or chosen & ~tmask:
            valid = False
        for axiom in AXIOMS:
            if first[axiom] is None:
                first[axiom] = _CHECKS[axiom](ev, tmask)
    reports = {a: RefinementReport(a, first[a] is None, first[a], checked=len(masks)) for a in AXIOMS}
    ok = all(r.passed for r in reports.values())
    contained, witness = None, None
    if ok:
        cev = _Evaluator(COMPROMISE, g)
        contained = True
        for tmask in masks:
            extra = ev.choose(tmask) & ~cev.choose(tmask)
            if extra:
                contained = False
                witness = ev.cx(tmask, _bits(extra)[0], "selected but covered within T")
                break
    return MapSweep(G.name, reports, valid, ok, contained, witness)


@dataclass
class Theorem1Summary:
    market: str
    domain: MatchingSet
    labels: dict
    subsets: int
    compromise: MapSweep
    maps: list = field(default_factory=list)  # MapSweep per library map

    @property
    def passed(self) -> bool:
        """C passes every axiom and every axiom-satisfying map stays inside C."""
        return self.compromise.satisfies_all and all(s.contained_in_compromise is not False for s in self.maps)

    def to_dict(self) -> dict:
        def sweep_dict(s: MapSweep) -> dict:
            d = {
                "map": s.name,
                "valid": s.valid,
                "satisfies_all": s.satisfies_all,
                "contained_in_compromise": s.contained_in_compromise,
                "reports": [s.reports[a].to_dict(self.labels) for a in AXIOMS],
            }
            if s.containment_witness is not None:
                cx = s.containment_witness
                d["containment_witness"] = {
                    "subset": sorted((self.labels[mu] for mu in cx.subset), key=label_sort_key),
                    "matching": self.labels[cx.matching],
                }
            return d

        return {
            "market": self.market,
            "weak_core_size": len(self.domain),
            "subsets": self.subsets,
            "passed": self.passed,
            "compromise": sweep_dict(self.compromise),
            "maps": [sweep_dict(s) for s in self.maps],
        }


def verify_theorem1(market: Market, caps: Caps | None = None, maps=BUILTIN_MAPS) -> Theorem1Summary:
    """Sweep every nonempty T of the weak core: C satisfies the axioms, and any
    library map satisfying them is contained in C."""
    caps = caps or Caps()
    w = weak_core(market, caps)
    if len(w) > caps.axioms:
        raise CapExceeded("axioms", len(w), caps.axioms)
    g = dominance_graph(market, w, caps)
    masks = subset_masks(len(w))
    comp = sweep(COMPROMISE, g, masks)
    others = [sweep(G, g, masks) for G in maps if G is not COMPROMISE]
    return Theorem1Summary(market.name, w, assign_labels(market, w), len(masks), comp, others)
