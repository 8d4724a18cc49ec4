"""``matchcore`` command line: solve, gen, examples, axioms."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import config, fixtures
from .axiom_lab import AXIOMS, Theorem1Summary, verify_theorem1
from .config import Caps, caps_from_env
from .errors import (
    BadDensity,
    CapExceeded,
    CycleError,
    DuplicateAgent,
    MarketSyntaxError,
    MissingPrefBlock,
    UnknownAlternative,
)
from .generate import random_market
from .market_format import export_dot, export_json, parse_market, serialize_market
from .market_model import assign_labels, label_sort_key
from .solution_concepts import covering_relation
from .solve import CONCEPTS, resolve_concepts, solve

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_CAP, EXIT_MISMATCH = 0, 1, 2, 3, 4
PARSE_ERRORS = (MarketSyntaxError, CycleError, DuplicateAgent, MissingPrefBlock, UnknownAlternative)

_TITLES = {
    "weak_core": "weak core",
    "strong_core": "strong core",
    "compromise_core": "compromise core",
    "top_cycle": "top cycle",
    "fisher_uncovered": "fisher uncovered",
    "men_optimal_core": "men-optimal core",
    "women_optimal_core": "women-optimal core",
}


@dataclass
class Config:
    concepts: tuple = CONCEPTS
    json_path: str | None = None
    dot_path: str | None = None
    caps: Caps = field(default_factory=Caps)
    seed: int | None = None
    debug_oracle: bool = False
    domain: str = "weak"

    def __post_init__(self):
        self.concepts = resolve_concepts(self.concepts)


def _read_market(path: str):
    p = Path(path)
    return parse_market(p.read_text(encoding="utf-8"), p.stem)


def _line(labels) -> str:
    return " ".join(labels) if labels else "(empty)"


def _write(path: str, data: bytes | str) -> None:
    if path == "-":
        sys.stdout.write(data.decode("utf-8") if isinstance(data, bytes) else data)
    else:
        Path(path).write_bytes(data if isinstance(data, bytes) else data.encode("utf-8"))


def cmd_solve(market_path: str, cfg: Config, out=None):
    out = out or sys.stdout
    config.set_debug_oracle(cfg.debug_oracle)
    market = _read_market(market_path)
    report, graph = solve(market, cfg.concepts, cfg.caps, cfg.domain)
    if "-" not in (cfg.json_path, cfg.dot_path):
        dom = "weak core" if report.domain == "weak_core" else "all matchings"
        print(f"market: {market.name} ({len(market.men)} men, {len(market.women)} women)", file=out)
        print(f"domain: {dom}, {len(report.matchings)} matchings", file=out)
        width = max((len(label) for label, _ in report.matchings), default=0)
        for label, mu in report.matchings:
            print(f"  {label:<{width}}  {mu}", file=out)
        for key, labels in report.concepts.items():
            print(f"{_TITLES[key]}: {_line(labels)}", file=out)
        if report.vnm_stable_sets is not None:
            sets = " ".join("{" + " ".join(s) + "}" for s in report.vnm_stable_sets)
            print(f"vnm stable sets: {sets or '(none)'}", file=out)
    if cfg.json_path:
        _write(cfg.json_path, export_json(report))
    if cfg.dot_path:
        labels = assign_labels(market, graph.domain)
        _write(cfg.dot_path, export_dot(graph, covering_relation(graph).matching_pairs(), labels, market.name))
    return report


def cmd_gen(men: int, women: int, density: float, seed: int) -> str:
    return serialize_market(random_market(men, women, density, seed))


def cmd_examples(only=None, out=None) -> bool:
    out = out or sys.stdout
    names = only or fixtures.NAMES
    ok = True
    for name in names:
        checks = fixtures.run(name)
        good = all(c.ok for c in checks)
        ok = ok and good
        print(f"[{'PASS' if good else 'FAIL'}] {name}", file=out)
        for c in checks:
            mark = "ok " if c.ok else "BAD"
            detail = f"{c.actual}" if c.ok else f"expected {c.expected}, got {c.actual}"
            print(f"    {mark} {c.name}: {detail}", file=out)
    total = len(names)
    print(f"{total} fixtures, {'all green' if ok else 'MISMATCH'}", file=out)
    return ok


def _print_summary(s: Theorem1Summary, out) -> None:
    print(f"market: {s.market}  weak core: {len(s.domain)}  subsets: {s.subsets}", file=out)
    for sweep in [s.compromise] + list(s.maps):
        parts = []
        for a in AXIOMS:
            r = sweep.reports[a]
            parts.append(f"{a} {'pass' if r.passed else 'FAIL'}")
        extra = ""
        if sweep.contained_in_compromise is not None:
            extra = f"  contained in C: {'yes' if sweep.contained_in_compromise else 'NO'}"
        print(f"{sweep.name}: {'  '.join(parts)}{extra}", file=out)
        for a in AXIOMS:
            cx = sweep.reports[a].counterexample
            if cx is not None:
                t = " ".join(sorted((s.labels[mu] for mu in cx.subset), key=label_sort_key))
                print(f"    {a} counterexample: T = {{{t}}}, {s.labels[cx.matching]}: {cx.explanation}", file=out)
    print(f"theorem check: {'PASS' if s.passed else 'FAIL'}", file=out)


def cmd_axioms(market_path: str, caps: Caps, json_path: str | None = None, out=None) -> Theorem1Summary:
    out = out or sys.stdout
    summary = verify_theorem1(_read_market(market_path), caps)
    _print_summary(summary, out)
    if json_path:
        _write(json_path, (json.dumps(summary.to_dict(), indent=2) + "\n").encode("utf-8"))
    return summary


def _concept_list(values) -> tuple:
    out = []
    for v in values or ():
        out.extend(x for x in v.replace(",", " ").split() if x)
    return tuple(out) if out else CONCEPTS


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="matchcore", description="Solution concepts for marriage markets with incomplete preferences.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="compute solution concepts for a .mkt market")
    s.add_argument("file")
    s.add_argument("--concepts", nargs="+", metavar="C", help=f"subset of: {' '.join(CONCEPTS)} (default: all)")
    s.add_argument("--json", dest="json_path", metavar="PATH", help="write the JSON report ('-' for stdout)")
    s.add_argument("--dot", dest="dot_path", metavar="PATH", help="write the dominance graph as DOT")
    s.add_argument("--debug-oracle", action="store_true", help="cross-check cores against coalition definitions")
    s.add_argument("--domain", choices=("weak", "all"), default="weak", help="matchings the dominance graph ranges over")

    g = sub.add_parser("gen", help="print a random market")
    g.add_argument("--men", type=int, required=True)
    g.add_argument("--women", type=int, required=True)
    g.add_argument("--density", type=float, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("-o", "--output", help="write to a file instead of stdout")

    e = sub.add_parser("examples", help="replay the bundled worked examples")
    e.add_argument("--only", nargs="+", choices=fixtures.NAMES)
    e.add_argument("--export", metavar="DIR", help="also write the fixture .mkt files to DIR")

    a = sub.add_parser("axioms", help="sweep IM / EB / ET over every subset of the weak core")
    a.add_argument("file")
    a.add_argument("--json", dest="json_path", metavar="PATH")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        caps = caps_from_env()
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    try:
        if args.command == "solve":
            cfg = Config(
                concepts=_concept_list(args.concepts),
                json_path=args.json_path,
                dot_path=args.dot_path,
                caps=caps,
                debug_oracle=args.debug_oracle,
                domain=args.domain,
            )
            cmd_solve(args.file, cfg)
            return EXIT_OK
        if args.command == "gen":
            text = cmd_gen(args.men, args.women, args.density, args.seed)
            if args.output:
                Path(args.output).write_text(text, encoding="utf-8")
            else:
                sys.stdout.write(text)
            return EXIT_OK
        if args.command == "examples":
            if args.export:
                d = Path(args.export)
                d.mkdir(parents=True, exist_ok=True)
                for name in fixtures.NAMES:
                    (d / f"{name}.mkt").write_text(fixtures.source(name), encoding="utf-8")
            return EXIT_OK if cmd_examples(args.only) else EXIT_MISMATCH
        if args.command == "axioms":
            summary = cmd_axioms(args.file, caps, args.json_path)
            return EXIT_OK if summary.passed else EXIT_FAIL
    except PARSE_ERRORS as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (OSError, BadDensity, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except CapExceeded as e:
        print(f"cap exceeded: {e}", file=sys.stderr)
        return EXIT_CAP
    return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
