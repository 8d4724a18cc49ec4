"""Agents, partial-order preferences and their linear extensions."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Iterator

from .config import Caps
from .errors import CapExceeded, CycleError, GroundSetMismatch, UnknownAlternative


class Side(enum.IntEnum):
    MAN = 0
    WOMAN = 1

    @property
    def prefix(self) -> str:
        return "m" if self is Side.MAN else "w"

    @property
    def other(self) -> "Side":
        return Side.WOMAN if self is Side.MAN else Side.MAN


@dataclass(frozen=True, order=True)
class AgentId:
    side: Side
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"agent index must be >= 1, got {self.index}")

    @property
    def name(self) -> str:
        return f"{self.side.prefix}{self.index}"

    @property
    def is_man(self) -> bool:
        return self.side is Side.MAN

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return self.name


def man(i: int) -> AgentId:
    return AgentId(Side.MAN, i)


def woman(i: int) -> AgentId:
    return AgentId(Side.WOMAN, i)


class Relation(enum.Enum):
    BETTER = "better"
    WORSE = "worse"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class PartialOrder:
    """A strict partial order over ``ground``; ``(a, b)`` in ``strict`` reads a > b.

    Construct through :func:`build_partial_order`, which closes and validates
    the declared pairs. Reflexivity is implicit.
    """

    ground: tuple
    strict: frozenset = field(default_factory=frozenset)

    @cached_property
    def _members(self) -> frozenset:
        return frozenset(self.ground)

    def _check(self, *xs) -> None:
        for x in xs:
            if x not in self._members:
                raise UnknownAlternative(x)

    def prefers(self, a, b) -> bool:
        """Strict preference a > b. Unchecked, for hot loops."""
        return (a, b) in self.strict

    def compare(self, a, b) -> Relation:
        self._check(a, b)
        if a == b:
            return Relation.EQUAL
        if (a, b) in self.strict:
            return Relation.BETTER
        if (b, a) in self.strict:
            return Relation.WORSE
        return Relation.INCOMPARABLE

    def incomparable(self, a, b) -> bool:
        return a != b and (a, b) not in self.strict and (b, a) not in self.strict

    def better_than(self, x) -> list:
        """Elements strictly above ``x``, in ground order."""
        return [a for a in self.ground if (a, x) in self.strict]

    def is_total(self) -> bool:
        n = len(self.ground)
        return len(self.strict) == n * (n - 1) // 2

    def sorted_pairs(self) -> list[tuple]:
        pos = {a: i for i, a in enumerate(self.ground)}
        return sorted(self.strict, key=lambda p: (pos[p[0]], pos[p[1]]))

    def hasse_pairs(self) -> list[tuple]:
        """Covering pairs of the order (the transitive reduction)."""
        out = []
        for a, b in self.sorted_pairs():
            if not any((a, c) in self.strict and (c, b) in self.strict for c in self.ground):
                out.append((a, b))
        return out


def _find_cycle(ground: tuple, succ: dict) -> list | None:
    WHITE, GREY, BLACK = 0, 1, 2
    color = {a: WHITE for a in ground}
    stack: list = []

    def visit(a):
        color[a] = GREY
        stack.append(a)
        for b in succ[a]:
            if color[b] == GREY:
                return stack[stack.index(b):] + [b]
            if color[b] == WHITE:
                found = visit(b)
                if found:
                    return found
        stack.pop()
        color[a] = BLACK
        return None

    for a in ground:
        if color[a] == WHITE:
            found = visit(a)
            if found:
                return found
    return None


def build_partial_order(ground: Iterable[Hashable], pairs: Iterable[tuple] = ()) -> PartialOrder:
    """Close ``pairs`` transitively over ``ground``.

    Raises CycleError with a witness cycle when the closure would contradict
    antisymmetry, and UnknownAlternative for pairs leaving the ground set.
    """
    ground = tuple(ground)
    if len(set(ground)) != len(ground):
        raise ValueError("ground set has repeated elements")
    members = set(ground)
    succ: dict = {a: [] for a in ground}
    for a, b in pairs:
        for x in (a, b):
            if x not in members:
                raise UnknownAlternative(x)
        if b not in succ[a]:
            succ[a].append(b)
    pos = {a: i for i, a in enumerate(ground)}
    for a in ground:
        succ[a].sort(key=pos.__getitem__)
    cycle = _find_cycle(ground, succ)
    if cycle is not None:
        raise CycleError(cycle)
    strict = set()
    for a in ground:
        seen = set()
        todo = list(succ[a])
        while todo:
            b = todo.pop()
            if b not in seen:
                seen.add(b)
                todo.extend(succ[b])
        strict.update((a, b) for b in seen)
    return PartialOrder(ground, frozenset(strict))


def compare(po: PartialOrder, a, b) -> Relation:
    return po.compare(a, b)


@dataclass(frozen=True)
class TotalOrder:
    ranking: tuple  # best first

    @cached_property
    def rank(self) -> dict:
        return {a: i for i, a in enumerate(self.ranking)}

    def prefers(self, a, b) -> bool:
        return self.rank[a] < self.rank[b]

    def as_partial_order(self) -> PartialOrder:
        r = self.ranking
        pairs = {(r[i], r[j]) for i in range(len(r)) for j in range(i + 1, len(r))}
        return PartialOrder(r, frozenset(pairs))

    def extends(self, po: PartialOrder) -> bool:
        if set(self.ranking) != set(po.ground) or len(self.ranking) != len(po.ground):
            return False
        return all(self.rank[a] < self.rank[b] for a, b in po.strict)


def _extensions(po: PartialOrder) -> Iterator[tuple]:
    ground = po.ground
    above = {x: {a for a in ground if (a, x) in po.strict} for x in ground}
    placed: list = []
    used: set = set()

    def rec():
        if len(placed) == len(ground):
            yield tuple(placed)
            return
        for x in ground:
            if x not in used and above[x] <= used:
                used.add(x)
                placed.append(x)
                yield from rec()
                placed.pop()
                used.discard(x)

    yield from rec()


def linear_extensions(po: PartialOrder, caps: Caps | None = None) -> list[TotalOrder]:
    """All completions of ``po``, lexicographic in ground-set position."""
    caps = caps or Caps()
    if len(po.ground) > caps.ground:
        raise CapExceeded("ground", len(po.ground), caps.ground)
    return [TotalOrder(r) for r in _extensions(po)]


def first_linear_extension(po: PartialOrder) -> TotalOrder:
    """The lexicographically first completion; no cap, linear-time-ish."""
    return TotalOrder(next(_extensions(po)))


def is_more_complete(po1: PartialOrder, po2: PartialOrder) -> bool:
    """True when ``po1`` keeps every strict comparison made by ``po2``."""
    if set(po1.ground) != set(po2.ground):
        raise GroundSetMismatch(f"{po1.ground} vs {po2.ground}")
    return po2.strict <= po1.strict
