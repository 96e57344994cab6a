"""Exhaustive small edge-cut census and global edge connectivity.

The census sweeps every bipartition ``{X, V - X}`` of the vertex set, so it
sees every edge-cut ``∂(X)`` including those whose sides are disconnected.
Edge connectivity is computed separately with Stoer-Wagner so the two can be
cross-checked.
"""

from __future__ import annotations

import dataclasses
from collections.abc import Iterator

import networkx as nx
import numpy as np

from . import limits
from .errors import InvalidArgument
from .multigraph import Multigraph

_CHUNK = 1 << 20

THEOREMS = ("1.12", "1.13", "1.14", "1.17")


def cut_sizes(g: Multigraph, masks: np.ndarray) -> np.ndarray:
    """``|∂(X)|`` for each vertex bitmask in ``masks``."""
    masks = np.asarray(masks, dtype=np.int64)
    out = np.zeros(masks.shape, dtype=np.int32)
    for u, v in g.edges:
        out += (((masks >> u) ^ (masks >> v)) & 1).astype(np.int32)
    return out


def _mask_chunks(lo: int, hi: int) -> Iterator[np.ndarray]:
    for start in range(lo, hi, _CHUNK):
        yield np.arange(start, min(hi, start + _CHUNK), dtype=np.int64)


def mask_to_set(mask: int) -> frozenset[int]:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


@dataclasses.dataclass(frozen=True)
class Cut:
    edges: frozenset[int]
    witness: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.edges)


@dataclasses.dataclass(frozen=True)
class CutCensus:
    max_size: int
    cuts: tuple[Cut, ...]
    counts_by_size: dict[int, int]
    edge_connectivity: int | None

    def count(self, size: int) -> int:
        return self.counts_by_size.get(size, 0)

    def to_json(self) -> dict:
        return {
            "edge_connectivity": self.edge_connectivity,
            "counts_by_size": {str(k): v for k, v in sorted(self.counts_by_size.items())},
            "cuts": [{"edges": sorted(c.edges), "witness": list(c.witness)} for c in self.cuts],
        }


def enumerate_cuts(g: Multigraph, max_size: int = 5) -> CutCensus:
    """Every distinct edge-cut of size at most ``max_size``.

    Each cut is listed once with the lexicographically smallest vertex set
    that induces it.  ``edge_connectivity`` is the census minimum over all
    bipartitions (``None`` for a single vertex).
    """
    if g.n == 0:
        raise InvalidArgument("empty graph")
    if not g.is_connected():
        raise InvalidArgument("edge connectivity 0, census undefined")
    limits.check("cut census", "census_max_n", g.n)
    counts = {s: 0 for s in range(1, max_size + 1)}
    if g.n == 1:
        return CutCensus(max_size, (), counts, None)

    full = (1 << g.n) - 1
    best: dict[frozenset[int], tuple[int, ...]] = {}
    lam = None
    # representatives exclude vertex n-1, so each {X, V-X} pair is seen once
    for masks in _mask_chunks(1, 1 << (g.n - 1)):
        sizes = cut_sizes(g, masks)
        low = int(sizes.min())
        lam = low if lam is None else min(lam, low)
        for mask in masks[sizes <= max_size].tolist():
            side = mask if mask & 1 else full ^ mask
            witness = tuple(sorted(mask_to_set(side)))
            edges = frozenset(i for i, (u, v) in enumerate(g.edges) if (mask >> u & 1) != (mask >> v & 1))
            if edges not in best or witness < best[edges]:
                best[edges] = witness
    cuts = sorted((Cut(e, w) for e, w in best.items()), key=lambda c: (c.size, sorted(c.edges), c.witness))
    for c in cuts:
        counts[c.size] += 1
    return CutCensus(max_size, tuple(cuts), counts, lam)


def small_sides(g: Multigraph, max_size: int) -> list[tuple[frozenset[int], int]]:
    """All nonempty proper ``X`` (both sides of each cut) with ``|∂(X)| <= max_size``."""
    limits.check("cut census", "census_max_n", g.n)
    if g.n < 2:
        return []
    out = []
    for masks in _mask_chunks(1, (1 << g.n) - 1):
        sizes = cut_sizes(g, masks)
        keep = sizes <= max_size
        for mask, size in zip(masks[keep].tolist(), sizes[keep].tolist()):
            out.append((mask_to_set(mask), size))
    return out


def edge_connectivity(g: Multigraph) -> int:
    """Size of a minimum edge-cut (Stoer-Wagner on edge multiplicities)."""
    if g.n < 2:
        raise InvalidArgument("edge connectivity needs at least two vertices")
    if not g.is_connected():
        return 0
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    for u, v in g.edges:
        if h.has_edge(u, v):
            h[u][v]["weight"] += 1
        else:
            h.add_edge(u, v, weight=1)
    value, _ = nx.stoer_wagner(h)
    return int(value)


@dataclasses.dataclass(frozen=True)
class DegreeClasses:
    p_prime: frozenset[int]
    q_prime: frozenset[int]

    @property
    def s_prime(self) -> frozenset[int]:
        return self.q_prime


def degree_classes(g: Multigraph) -> DegreeClasses:
    deg = g.degrees()
    return DegreeClasses(
        frozenset(v for v in range(g.n) if deg[v] == 3),
        frozenset(v for v in range(g.n) if deg[v] == 5),
    )


@dataclasses.dataclass(frozen=True)
class HypothesisReport:
    theorem: str
    clauses: dict[str, bool]
    three_cuts: int
    five_cuts: int
    edge_connectivity: int | None

    @property
    def holds(self) -> bool:
        return all(self.clauses.values())

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "holds": self.holds,
            "clauses": self.clauses,
            "P": self.three_cuts,
            "Q": self.five_cuts,
            "edge_connectivity": self.edge_connectivity,
        }


def hypothesis_check(g: Multigraph, theorem_id: str, census: CutCensus | None = None) -> HypothesisReport:
    """Evaluate each hypothesis clause of a theorem on ``g``.

    Disconnected graphs fail the ``connected`` clause since the census is
    undefined on them.
    """
    if theorem_id not in THEOREMS:
        raise InvalidArgument(f"unknown theorem {theorem_id!r}; expected one of {THEOREMS}")
    if g.n == 0 or not g.is_connected():
        clauses = {"connected": False}
        return HypothesisReport(theorem_id, clauses, 0, 0, 0 if g.n else None)
    census = census or enumerate_cuts(g, 5)
    p, q = census.count(3), census.count(5)
    lam = edge_connectivity(g) if g.n >= 2 else None
    at_least = lambda k: lam is None or lam >= k  # noqa: E731
    clauses = {"connected": True}
    if theorem_id == "1.12":
        clauses["bridgeless"] = at_least(2)
        clauses["2|P|+|Q|<=7"] = 2 * p + q <= 7
    elif theorem_id == "1.13":
        clauses["4-edge-connected"] = at_least(4)
        clauses["|Q|<=7"] = q <= 7
    elif theorem_id == "1.14":
        clauses["bridgeless"] = at_least(2)
        clauses["|Q|==0"] = q == 0
        clauses["|P|<=3"] = p <= 3
    else:
        clauses["5-edge-connected"] = at_least(5)
        clauses["|Q|<=5"] = q <= 5
    return HypothesisReport(theorem_id, clauses, p, q, lam)
