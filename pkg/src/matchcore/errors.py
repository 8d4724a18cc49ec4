"""Exception hierarchy shared by every matchcore module."""

from __future__ import annotations


class MatchcoreError(Exception):
    """Base class for all library errors."""


class CycleError(MatchcoreError):
    def __init__(self, cycle, owner=None):
        self.cycle = tuple(cycle)
        self.owner = owner
        names = " > ".join(str(x) for x in self.cycle)
        where = f" in preferences of {owner}" if owner is not None else ""
        super().__init__(f"preference cycle{where}: {names}")


class UnknownAlternative(MatchcoreError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unknown alternative: {name}")


class GroundSetMismatch(MatchcoreError):
    pass


class CapExceeded(MatchcoreError):
    def __init__(self, what: str, size: int, cap: int):
        self.what, self.size, self.cap = what, size, cap
        super().__init__(f"{what}: size {size} exceeds cap {cap}")


class MarketMismatch(MatchcoreError):
    pass


class NotAnExtension(MatchcoreError):
    pass


class DomainError(MatchcoreError):
    pass


class BadDensity(MatchcoreError):
    pass


class MarketSyntaxError(MatchcoreError):
    """Parse failure with a 1-based source position."""

    def __init__(self, line: int, col: int, expected: str, found: str = ""):
        self.line, self.col, self.expected, self.found = line, col, expected, found
        msg = f"line {line}, col {col}: expected {expected}"
        if found:
            msg += f", found {found!r}"
        super().__init__(msg)


class DuplicateAgent(MatchcoreError):
    pass


class MissingPrefBlock(MatchcoreError):
    def __init__(self, agent):
        self.agent = agent
        super().__init__(f"no pref block for agent {agent}")
