"""Compute requested solution concepts for a market and assemble a SolveReport."""

from __future__ import annotations

from .config import Caps
from .dominance import DominanceGraph, dominance_graph, top_cycle
from .market_format import SolveReport
from .market_model import Market, assign_labels, enumerate_matchings, label_sort_key
from .preference_core import Side
from .solution_concepts import (
    covering_relation,
    fisher_uncovered,
    miller_uncovered,
    side_optimal_core,
    vnm_stable_sets,
)
from .stability import strong_core, weak_core

CONCEPTS = ("weak", "strong", "compromise", "top-cycle", "fisher", "vnm", "men-opt", "women-opt")
_REQUIRES = {"compromise": ("weak",), "men-opt": ("compromise",), "women-opt": ("compromise",)}
_KEY = {
    "weak": "weak_core",
    "strong": "strong_core",
    "compromise": "compromise_core",
    "top-cycle": "top_cycle",
    "fisher": "fisher_uncovered",
    "men-opt": "men_optimal_core",
    "women-opt": "women_optimal_core",
}


def resolve_concepts(requested) -> tuple:
    """Close ``requested`` under dependencies and return it in canonical order."""
    want = set()
    todo = list(requested)
    while todo:
        c = todo.pop()
        if c not in CONCEPTS:
            raise ValueError(f"unknown concept {c!r}; choose from {', '.join(CONCEPTS)}")
        if c not in want:
            want.add(c)
            todo.extend(_REQUIRES.get(c, ()))
    return tuple(c for c in CONCEPTS if c in want)


def solve(market: Market, concepts=CONCEPTS, caps: Caps | None = None, domain: str = "weak") -> tuple[SolveReport, DominanceGraph]:
    """Labels are assigned over the graph domain (the weak core by default).

    The compromise and side-optimal cores are always computed over the weak
    core; top cycle, Fisher uncovered set and vNM stable sets use the chosen
    domain.
    """
    caps = caps or Caps()
    concepts = resolve_concepts(concepts)
    w = weak_core(market, caps)
    if domain == "weak":
        dom = w
    elif domain == "all":
        dom = enumerate_matchings(market, caps)
    else:
        raise ValueError("domain must be 'weak' or 'all'")
    g = dominance_graph(market, dom, caps)
    gw = g if domain == "weak" else dominance_graph(market, w, caps)
    labels = assign_labels(market, dom)

    def names(ms) -> list:
        return sorted((labels[mu] for mu in ms), key=label_sort_key)

    out: dict = {}
    comp = None
    for c in concepts:
        if c == "weak":
            out[_KEY[c]] = names(w)
        elif c == "strong":
            out[_KEY[c]] = names(strong_core(market, caps))
        elif c == "compromise":
            comp = miller_uncovered(gw)
            out[_KEY[c]] = names(comp)
        elif c == "top-cycle":
            out[_KEY[c]] = names(top_cycle(g))
        elif c == "fisher":
            out[_KEY[c]] = names(fisher_uncovered(g))
        elif c in ("men-opt", "women-opt"):
            side = Side.MAN if c == "men-opt" else Side.WOMAN
            out[_KEY[c]] = names(side_optimal_core(market, side, caps, compromise=comp))
    vnm = None
    if "vnm" in concepts:
        vnm = sorted((names(s) for s in vnm_stable_sets(g, caps)), key=lambda s: [label_sort_key(x) for x in s])

    edges = []
    for x, y in sorted(g.edges, key=lambda e: (label_sort_key(labels[g.domain[e[0]]]), label_sort_key(labels[g.domain[e[1]]]))):
        a, b = g.domain[x], g.domain[y]
        edges.append((labels[a], labels[b], (x, y) in g.strict_edges, g.witness[(x, y)]))
    cover = sorted(
        ((labels[a], labels[b]) for a, b in covering_relation(g).matching_pairs()),
        key=lambda e: (label_sort_key(e[0]), label_sort_key(e[1])),
    )
    matchings = sorted(((labels[mu], mu) for mu in dom), key=lambda p: label_sort_key(p[0]))
    report = SolveReport(
        market=market.name,
        domain="weak_core" if domain == "weak" else "all",
        matchings=matchings,
        concepts=out,
        vnm_stable_sets=vnm,
        dominance_edges=edges,
        covering_edges=cover,
    )
    return report, g
