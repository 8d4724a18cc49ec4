from __future__ import annotations

import random
import sys

import pytest

from matchcore import fixtures
from matchcore.generate import coarsen, random_market


def mu(market, k):
    return fixtures.labelled(market, f"mu{k}")


def seeded_markets(count: int, seed: int = 2024, max_side: int = 3):
    """Deterministic stream of small markets with varied sizes and densities."""
    rng = random.Random(seed)
    for k in range(count):
        n_men = rng.randint(0, max_side)
        n_women = rng.randint(0, max_side)
        density = rng.choice([0.0, 0.25, 0.5, 0.75, 1.0, rng.random()])
        yield random_market(n_men, n_women, density, seed=rng.randrange(1 << 30), name=f"rand{k}")


def nested_pair(market, seed: int):
    return market, coarsen(market, 0.5, seed)


@pytest.fixture(scope="session")
def ex1():
    return fixtures.load("ex1")


@pytest.fixture(scope="session")
def ex2():
    return fixtures.load("ex2")


@pytest.fixture(scope="session")
def ex3():
    return fixtures.load("ex3")


@pytest.fixture(scope="session")
def prop3():
    return fixtures.load("prop3")


@pytest.fixture(scope="session")
def lemma1():
    return fixtures.load("lemma1")


@pytest.fixture(scope="session")
def a1():
    return fixtures.load("a1")


@pytest.fixture(scope="session")
def a2():
    return fixtures.load("a2")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        ok, detail = results[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
