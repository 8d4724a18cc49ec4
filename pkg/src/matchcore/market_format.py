"""The ``.mkt`` market language, plus JSON and DOT output.

Grammar::

    market    := "men" ident* "women" ident* (prefblock | labelblock)*
    prefblock := "pref" ident "{" (pair (";" pair)* ";"?)? "}"
    pair      := term ">" term
    term      := ident | "@"
    labelblock:= "label" ident "{" (couple (";" couple)* ";"?)? "}"
    couple    := ident ident

``#`` starts a comment running to end of line. ``@`` inside a pref block is
the block owner remaining single. Only strict pairs are written; the
transitive closure is computed on load, and an empty block means the agent
can compare nothing. ``label`` blocks attach a display name to the matching
made of the listed (man, woman) couples.

Agents display as ``m<i>``/``w<i>``. When every identifier on a side already
has that form its number is kept as the index; otherwise agents are numbered
in declaration order.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .errors import CycleError, DuplicateAgent, MarketSyntaxError, MissingPrefBlock, UnknownAlternative
from .market_model import Market, Matching, label_sort_key
from .preference_core import AgentId, Side, build_partial_order

SCHEMA = "matchcore/1"
KEYWORDS = {"men", "women", "pref", "label"}

_TOKEN_RE = re.compile(r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[@{};>])")


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "sym" or "eof"
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise MarketSyntaxError(line, pos - line_start + 1, "a token", text[pos])
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind in ("ident", "sym"):
            out.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


class _Parser:
    def __init__(self, text: str, name: str):
        self.toks = tokenize(text)
        self.k = 0
        self.name = name

    @property
    def tok(self) -> Token:
        return self.toks[self.k]

    def fail(self, expected: str):
        t = self.tok
        raise MarketSyntaxError(t.line, t.col, expected, t.text or "end of input")

    def expect_sym(self, sym: str) -> Token:
        if self.tok.kind != "sym" or self.tok.text != sym:
            self.fail(repr(sym))
        t = self.tok
        self.k += 1
        return t

    def expect_keyword(self, kw: str) -> None:
        if self.tok.kind != "ident" or self.tok.text != kw:
            self.fail(repr(kw))
        self.k += 1

    def at_keyword(self, kw: str) -> bool:
        return self.tok.kind == "ident" and self.tok.text == kw

    def ident(self, what: str = "an identifier") -> Token:
        if self.tok.kind != "ident" or self.tok.text in KEYWORDS:
            self.fail(what)
        t = self.tok
        self.k += 1
        return t

    def roster(self, stop: str | None) -> list[Token]:
        names = []
        while self.tok.kind == "ident" and self.tok.text not in KEYWORDS:
            names.append(self.ident())
        if stop is not None:
            self.expect_keyword(stop)
        return names

    def parse(self) -> Market:
        self.expect_keyword("men")
        men_toks = self.roster("women")
        women_toks = self.roster(None)
        agents: dict[str, AgentId] = {}
        for side, toks in ((Side.MAN, men_toks), (Side.WOMAN, women_toks)):
            for tok, idx in zip(toks, _indices(side, [t.text for t in toks])):
                if tok.text in agents:
                    raise DuplicateAgent(f"line {tok.line}: agent {tok.text!r} declared twice")
                agents[tok.text] = AgentId(side, idx)
        men = tuple(sorted(a for a in agents.values() if a.is_man))
        women = tuple(sorted(a for a in agents.values() if not a.is_man))
        everyone = men + women
        if len(set(everyone)) != len(everyone):
            raise DuplicateAgent("two agents share an index")

        prefs = {}
        labels = []
        while self.tok.kind != "eof":
            if self.at_keyword("pref"):
                self.k += 1
                owner_tok = self.ident("an agent name")
                owner = agents.get(owner_tok.text)
                if owner is None:
                    raise MarketSyntaxError(owner_tok.line, owner_tok.col, "a declared agent", owner_tok.text)
                if owner in prefs:
                    raise DuplicateAgent(f"line {owner_tok.line}: second pref block for {owner_tok.text!r}")
                pairs = self.pref_body(owner, agents)
                ground = (women if owner.is_man else men) + (owner,)
                try:
                    prefs[owner] = build_partial_order(ground, pairs)
                except CycleError as e:
                    raise CycleError(e.cycle, owner=owner) from None
            elif self.at_keyword("label"):
                self.k += 1
                label_tok = self.ident("a label")
                couples = self.label_body(agents)
                try:
                    mu = Matching.from_pairs(everyone, couples)
                except ValueError as e:
                    raise MarketSyntaxError(label_tok.line, label_tok.col, f"a valid matching ({e})") from None
                labels.append((label_tok, mu))
            else:
                self.fail("'pref' or 'label'")
        for a in everyone:
            if a not in prefs:
                raise MissingPrefBlock(a)
        seen_labels, seen_mus = set(), set()
        for tok, mu in labels:
            if tok.text in seen_labels or mu in seen_mus:
                raise MarketSyntaxError(tok.line, tok.col, "a label not used before")
            seen_labels.add(tok.text)
            seen_mus.add(mu)
        label_pairs = tuple(sorted(((t.text, mu) for t, mu in labels), key=lambda p: label_sort_key(p[0])))
        return Market(men, women, prefs, label_pairs, name=self.name)

    def term(self, owner: AgentId, agents: dict) -> AgentId:
        if self.tok.kind == "sym" and self.tok.text == "@":
            self.k += 1
            return owner
        t = self.ident("an agent name or '@'")
        a = agents.get(t.text)
        if a is None:
            raise UnknownAlternative(t.text)
        if a.side == owner.side:
            raise MarketSyntaxError(t.line, t.col, f"an agent opposite to {owner}", t.text)
        return a

    def pref_body(self, owner: AgentId, agents: dict) -> list[tuple]:
        self.expect_sym("{")
        pairs = []
        while not (self.tok.kind == "sym" and self.tok.text == "}"):
            a = self.term(owner, agents)
            self.expect_sym(">")
            b = self.term(owner, agents)
            pairs.append((a, b))
            if self.tok.kind == "sym" and self.tok.text == ";":
                self.k += 1
            elif not (self.tok.kind == "sym" and self.tok.text == "}"):
                self.fail("';' or '}'")
        self.expect_sym("}")
        return pairs

    def label_body(self, agents: dict) -> list[tuple]:
        self.expect_sym("{")
        couples = []
        while not (self.tok.kind == "sym" and self.tok.text == "}"):
            toks = [self.ident("an agent name"), self.ident("an agent name")]
            pair = []
            for t in toks:
                if t.text not in agents:
                    raise MarketSyntaxError(t.line, t.col, "a declared agent", t.text)
                pair.append(agents[t.text])
            couples.append(tuple(pair))
            if self.tok.kind == "sym" and self.tok.text == ";":
                self.k += 1
            elif not (self.tok.kind == "sym" and self.tok.text == "}"):
                self.fail("';' or '}'")
        self.expect_sym("}")
        return couples


def _indices(side: Side, names: list[str]) -> list[int]:
    pat = re.compile(rf"^{side.prefix}([1-9][0-9]*)$")
    nums = [pat.match(n) for n in names]
    if names and all(nums):
        idx = [int(m.group(1)) for m in nums]
        if len(set(idx)) == len(idx):
            return idx
    return list(range(1, len(names) + 1))


def parse_market(text: str, name: str = "market") -> Market:
    return _Parser(text, name).parse()


def _term(owner: AgentId, x: AgentId) -> str:
    return "@" if x == owner else x.name


def serialize_market(market: Market) -> str:
    """Canonical text: rosters, one pref block per agent (Hasse pairs), labels."""
    lines = [" ".join(["men"] + [a.name for a in market.men]), " ".join(["women"] + [a.name for a in market.women])]
    for a in market.agents:
        pairs = market.prefs[a].hasse_pairs()
        body = "; ".join(f"{_term(a, x)} > {_term(a, y)}" for x, y in pairs)
        lines.append(f"pref {a.name} {{ {body} }}" if body else f"pref {a.name} {{}}")
    for label, mu in market.labels:
        body = "; ".join(f"{m.name} {w.name}" for m, w in mu.pairs)
        lines.append(f"label {label} {{ {body} }}" if body else f"label {label} {{}}")
    return "\n".join(lines) + "\n"


# -- reports ------------------------------------------------------------------

CONCEPT_KEYS = (
    "weak_core",
    "strong_core",
    "compromise_core",
    "top_cycle",
    "fisher_uncovered",
    "men_optimal_core",
    "women_optimal_core",
)


@dataclass
class SolveReport:
    market: str
    domain: str  # "weak_core" or "all"
    matchings: list  # [(label, Matching)] sorted by label
    concepts: dict = field(default_factory=dict)  # key -> [label]
    vnm_stable_sets: list | None = None  # [[label]] or None when not requested
    dominance_edges: list = field(default_factory=list)  # [(dominator, dominated, strict, coalition)]
    covering_edges: list = field(default_factory=list)  # [(coverer, covered)]
    axioms: dict | None = None

    def to_dict(self) -> dict:
        out = {
            "schema": SCHEMA,
            "market": self.market,
            "domain": self.domain,
            "matchings": [
                {"label": label, "pairs": [[m.name, w.name] for m, w in mu.pairs]} for label, mu in self.matchings
            ],
        }
        for key in CONCEPT_KEYS:
            if key in self.concepts:
                out[key] = list(self.concepts[key])
        if self.vnm_stable_sets is not None:
            out["vnm_stable_sets"] = [list(s) for s in self.vnm_stable_sets]
        out["dominance_edges"] = [
            {"dominator": a, "dominated": b, "strict": strict, "coalition": [x.name for x in sorted(s)]}
            for a, b, strict, s in self.dominance_edges
        ]
        out["covering_edges"] = [{"coverer": a, "covered": b} for a, b in self.covering_edges]
        if self.axioms is not None:
            out["axioms"] = self.axioms
        return out


def export_json(report: SolveReport) -> bytes:
    return (json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(graph, covering_edges=(), labels: dict | None = None, name: str = "dominance") -> str:
    """Render a DominanceGraph as a Graphviz digraph.

    Arrows follow the coalitional move: an edge x -> y means y dominates x.
    Strict dominance is solid black, reversible dominance solid grey, and
    covering edges (given as (coverer, covered) matchings) dashed blue,
    again drawn from the covered matching to its coverer.
    """
    labels = labels or {mu: f"mu{k + 1}" for k, mu in enumerate(graph.domain)}
    order = sorted(graph.domain, key=lambda mu: label_sort_key(labels[mu]))
    lines = [f"digraph {_q(name)} {{", "  rankdir=BT;", "  node [shape=box];"]
    for mu in order:
        lines.append(f"  {_q(labels[mu])} [tooltip={_q(str(mu))}];")
    rank = {mu: k for k, mu in enumerate(order)}
    dom_edges = sorted(
        ((graph.domain[x], graph.domain[y]) for x, y in graph.edges), key=lambda e: (rank[e[1]], rank[e[0]])
    )
    for a, b in dom_edges:
        strict = graph.strictly(a, b)
        witness = ",".join(x.name for x in sorted(graph.witness[(graph.idx(a), graph.idx(b))]))
        style = "color=black" if strict else "color=grey"
        lines.append(f"  {_q(labels[b])} -> {_q(labels[a])} [style=solid, {style}, label={_q(witness)}];")
    for a, b in sorted(covering_edges, key=lambda e: (rank[e[1]], rank[e[0]])):
        lines.append(f"  {_q(labels[b])} -> {_q(labels[a])} [style=dashed, color=blue, constraint=false];")
    lines.append("}")
    return "\n".join(lines) + "\n"
