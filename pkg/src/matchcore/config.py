"""Enumeration caps and runtime switches.

Caps bound every exhaustive enumeration in the library. They can be
overridden with the ``MATCHCORE_CAP`` environment variable, either as a bare
integer (agent cap) or as ``key=value`` pairs separated by commas, e.g.
``MATCHCORE_CAP=agents=18,vnm=24``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

from .errors import CapExceeded

ENV_VAR = "MATCHCORE_CAP"


@dataclass(frozen=True)
class Caps:
    agents: int = 16  # |M| + |W| for matching enumeration
    ground: int = 8  # ground-set size for linear extensions
    profiles: int = 200_000  # completion profiles in the exhaustive oracle
    vnm: int = 20  # domain size for vNM subset search
    axioms: int = 16  # weak-core size for the 2^|W| axiom sweep

    def check(self, what: str, size: int) -> None:
        cap = getattr(self, what)
        if size > cap:
            raise CapExceeded(what, size, cap)


def caps_from_env(environ=None) -> Caps:
    raw = (os.environ if environ is None else environ).get(ENV_VAR, "").strip()
    caps = Caps()
    if not raw:
        return caps
    if raw.isdigit():
        return replace(caps, agents=int(raw))
    names = {f.name for f in fields(Caps)}
    updates = {}
    for item in raw.split(","):
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in names or not value.strip().isdigit():
            raise ValueError(f"bad {ENV_VAR} entry: {item!r}")
        updates[key] = int(value)
    return replace(caps, **updates)


# Cross-check fast paths against their definitional oracles when set.
DEBUG_ORACLE = bool(os.environ.get("MATCHCORE_DEBUG"))


def set_debug_oracle(flag: bool) -> None:
    global DEBUG_ORACLE
    DEBUG_ORACLE = flag
