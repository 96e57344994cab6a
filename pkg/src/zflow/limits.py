"""Resource limits for the exponential-time routines.

Defaults can be raised through the ``ZFLOW_LIMITS`` environment variable,
e.g. ``ZFLOW_LIMITS="census_max_n=28,search_max_edges=60"``.
"""

from __future__ import annotations

import dataclasses
import os

from .errors import InvalidArgument, ResourceLimitError


@dataclasses.dataclass(frozen=True)
class Limits:
    census_max_n: int = 26
    search_max_edges: int = 40
    brute_force_max_edges: int = 16
    flowpoly_max_edges: int = 24
    z3_max_n: int = 10
    ltwz_max_n: int = 22


def _from_env() -> Limits:
    raw = os.environ.get("ZFLOW_LIMITS", "").strip()
    if not raw:
        return Limits()
    names = {f.name for f in dataclasses.fields(Limits)}
    overrides = {}
    for item in raw.split(","):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in names:
            raise InvalidArgument(f"bad ZFLOW_LIMITS entry {item!r}")
        overrides[key] = int(value)
    return Limits(**overrides)


LIMITS = _from_env()


def check(what: str, name: str, actual: int, limits: Limits | None = None) -> None:
    limit = getattr(limits or LIMITS, name)
    if actual > limit:
        raise ResourceLimitError(what, name, limit, actual)
