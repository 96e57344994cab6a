"""Proof gadgets: K7 gluing, the z0-augmentations, and the extension lemma.

An augmentation adds a vertex ``z0`` joined to the low-degree vertices of a
graph by arcs whose directions are fixed in advance, together with a
boundary on the enlarged graph. If the degree conditions of the
Lovász-Thomassen-Wu-Zhang extension lemma hold, the pre-orientation extends
to a full beta-orientation; deleting ``z0`` then leaves the wanted
orientation of the original graph.
"""

from __future__ import annotations

import dataclasses
import functools
from collections.abc import Mapping, Sequence

import numpy as np

from . import limits
from .cutcensus import degree_classes, edge_connectivity
from .errors import HypothesisError, InternalInconsistency, InvalidArgument
from .flowsolve import TAU_TABLE, Certificate, Orientation, boundary, find_beta_orientation, is_beta_orientation, tau
from .multigraph import Multigraph, complete_graph

LE5 = "2|P'|+|Q'|<=5"
SIX_SEVEN_P = "2|P'|+|Q'| in {6,7}, |P'|>0"
SIX_SEVEN_Q = "2|P'|+|Q'| in {6,7}, |P'|=0"
ANCHOR = "|P'|=|Q'|=1, z0 = the degree-3 vertex"
Z3_CASE = "S'"
PASSTHROUGH = "passthrough"


def glue_k7(g: Multigraph) -> tuple[Multigraph, tuple[tuple[int, ...], ...]]:
    """Attach a private K7 at every vertex.

    Original vertices keep their ids. Returns the glued graph and, per
    original vertex ``v``, the seven vertices of the copy through ``v``.
    """
    k7 = complete_graph(7).edges
    edges = list(g.edges)
    copies = []
    nxt = g.n
    for v in range(g.n):
        ids = (v,) + tuple(range(nxt, nxt + 6))
        nxt += 6
        edges.extend((ids[a], ids[b]) for a, b in k7)
        copies.append(ids)
    return Multigraph(nxt, tuple(edges)), tuple(copies)


@dataclasses.dataclass(frozen=True)
class Augmentation:
    """``graph`` is ``base`` plus ``z0 = base.n``; the added arcs have the ids
    after the base edges and fixed tails given by ``pre``."""

    base: Multigraph
    graph: Multigraph
    z0: int
    pre: Mapping[int, int]
    beta: tuple[int, ...]
    base_beta: tuple[int, ...]
    case: str

    @property
    def added(self) -> tuple[int, ...]:
        return tuple(range(self.base.m, self.graph.m))

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "z0": self.z0,
            "graph": self.graph.serialize(),
            "pre_orientation": [[e, t, self.graph.other_end(e, t)] for e, t in sorted(self.pre.items())],
            "beta": list(self.beta),
        }


def _build(g: Multigraph, arcs: Sequence[tuple[int, int]], beta: Sequence[int], base_beta, case) -> Augmentation:
    z0 = g.n
    graph = g.add_edges(arcs, extra_vertices=1)
    pre = {g.m + i: t for i, (t, _) in enumerate(arcs)}
    beta = tuple(b % 3 for b in beta)
    if sum(beta) % 3:
        raise InternalInconsistency("augmented boundary does not sum to 0 mod 3")
    bal = sum(1 if t == z0 else -1 for t, _ in arcs)
    if (bal - beta[z0]) % 3:
        raise InternalInconsistency("pre-orientation at z0 does not match its boundary value")
    return Augmentation(g, graph, z0, pre, beta, tuple(base_beta), case)


def z0_augment_3flow(g: Multigraph) -> Augmentation:
    """Augmentation reducing a mod-3 orientation of ``g`` to the extension lemma.

    Two parallel arcs join ``z0`` to each degree-3 vertex and one arc to each
    degree-5 vertex. All arcs leave ``z0`` when ``2|P'|+|Q'| <= 5``. For 6 or 7,
    the lowest degree-3 vertex (or, without one, the two lowest degree-5
    vertices) sends its arcs into ``z0`` instead. Each vertex's boundary value
    cancels the balance of its added arcs, so removing ``z0`` leaves balance 0.
    """
    cls = degree_classes(g)
    p, q = sorted(cls.p_prime), sorted(cls.q_prime)
    s = 2 * len(p) + len(q)
    if s > 7:
        raise HypothesisError(f"2|P'|+|Q'| = {s} > 7")
    z0 = g.n
    if s <= 5:
        reversed_ = set()
        case = PASSTHROUGH if s == 0 else LE5
    elif p:
        reversed_ = {p[0]}
        case = SIX_SEVEN_P
    else:
        reversed_ = set(q[:2])
        case = SIX_SEVEN_Q
    arcs = []
    beta = [0] * (g.n + 1)
    for v in p + q:
        mult = 2 if v in cls.p_prime else 1
        arc = (v, z0) if v in reversed_ else (z0, v)
        arcs.extend([arc] * mult)
        # boundary at v is the balance its added arcs contribute
        beta[v] = (mult if v in reversed_ else -mult) % 3
    beta[z0] = (s % 3) if s <= 5 else ((s - 2) - 2) % 3
    return _build(g, arcs, beta, (0,) * g.n, case)


def anchor_augment_3flow(g: Multigraph) -> Augmentation:
    """Alternative closing step when ``g`` has exactly one degree-3 vertex ``w``
    and one degree-5 vertex ``q``.

    The z0-augmentation fails condition (iii) here at ``A = V - w``
    (``d(A) = 4`` against ``4 + |tau(A)| = 6``). Instead add the edge ``wq``
    and use ``w`` itself as the pre-oriented vertex with all four arcs leaving
    it: ``beta(w) = 1``, ``beta(q) = 2``. Deleting ``wq`` restores balance 0
    at both ends.
    """
    cls = degree_classes(g)
    if len(cls.p_prime) != 1 or len(cls.q_prime) != 1:
        raise HypothesisError("needs exactly one degree-3 and one degree-5 vertex")
    (w,), (q,) = cls.p_prime, cls.q_prime
    graph = g.add_edges([(w, q)])
    pre = {e: w for e, ends in enumerate(graph.edges) if w in ends}
    beta = [0] * g.n
    beta[w], beta[q] = 1, 2
    return Augmentation(g, graph, w, pre, tuple(beta), (0,) * g.n, ANCHOR)


def z0_augment_z3(g: Multigraph, beta: Sequence[int]) -> Augmentation:
    """One arc ``z0 -> v`` per degree-5 vertex, lowering ``beta(v)`` by one."""
    beta = boundary(g, beta)
    if g.n >= 2 and edge_connectivity(g) < 5:
        raise HypothesisError("graph is not 5-edge-connected")
    s_prime = sorted(degree_classes(g).s_prime)
    z0 = g.n
    new_beta = list(beta) + [len(s_prime) % 3]
    for v in s_prime:
        new_beta[v] = (beta[v] - 1) % 3
    arcs = [(z0, v) for v in s_prime]
    return _build(g, arcs, new_beta, beta, Z3_CASE if s_prime else PASSTHROUGH)


@dataclasses.dataclass(frozen=True)
class LtwzReport:
    """Verdicts on the three hypotheses of the extension lemma."""

    enough_vertices: bool
    z0_condition: bool
    subset_condition: bool
    violation: tuple[int, ...] | None = None
    violation_degree: int | None = None
    violation_tau: int | None = None

    @property
    def holds(self) -> bool:
        return self.enough_vertices and self.z0_condition and self.subset_condition

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "i": self.enough_vertices,
            "ii": self.z0_condition,
            "iii": self.subset_condition,
            "violation": list(self.violation) if self.violation is not None else None,
            "violation_degree": self.violation_degree,
            "violation_tau": self.violation_tau,
        }


@functools.lru_cache(maxsize=16)
def _subset_tables(g: Multigraph, z0: int) -> tuple[list[int], np.ndarray, np.ndarray]:
    """Bit matrix and cut sizes for every candidate ``A`` avoiding ``z0``.

    Candidates are local masks over the other vertices, excluding the empty
    set and the full set (whose complement is just ``{z0}``).
    """
    others = [v for v in range(g.n) if v != z0]
    k = len(others)
    masks = np.arange(1, (1 << k) - 1, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(k, dtype=np.int64)) & 1).astype(np.int8)
    local = {v: i for i, v in enumerate(others)}
    degree = np.zeros(masks.size, dtype=np.int32)
    zero = np.zeros(masks.size, dtype=np.int8)
    for u, v in g.edges:
        a = bits[:, local[u]] if u != z0 else zero
        b = bits[:, local[v]] if v != z0 else zero
        degree += a ^ b
    return others, bits, degree


def ltwz_check(g: Multigraph, beta: Sequence[int], z0: int, pre: Mapping[int, int]) -> LtwzReport:
    """Check the extension lemma's hypotheses for ``(g, beta, z0, pre)``.

    (i) at least 3 vertices; (ii) ``d(z0) <= 4 + |tau(z0)|`` and the
    pre-orientation realizes ``beta(z0)``; (iii) ``d(A) >= 4 + |tau(A)|`` for
    every nonempty ``A`` avoiding ``z0`` whose complement has two or more
    vertices. The first violating ``A`` in bitmask order is reported.
    """
    beta = boundary(g, beta)
    if not 0 <= z0 < g.n:
        raise InvalidArgument(f"z0 = {z0} is not a vertex")
    incident = {i for i, e in enumerate(g.edges) if z0 in e}
    if set(pre) != incident:
        raise InvalidArgument("pre-orientation must cover exactly the edges at z0")
    limits.check("extension-lemma subset sweep", "ltwz_max_n", g.n)
    cond_i = g.n >= 3
    bal = 0
    for e, t in pre.items():
        if t not in g.edges[e]:
            raise InvalidArgument(f"tail {t} is not an end of edge {e}")
        bal += 1 if t == z0 else -1
    d_z0 = len(incident)
    cond_ii = d_z0 <= 4 + tau(beta[z0], d_z0) and (bal - beta[z0]) % 3 == 0

    others, bits, degree = _subset_tables(g, z0)
    if degree.size == 0:
        return LtwzReport(cond_i, cond_ii, True)
    beta_a = (bits.astype(np.int32) @ np.array([beta[v] for v in others], dtype=np.int32)) % 3
    tau_a = np.asarray(TAU_TABLE, dtype=np.int32)[beta_a, degree % 2]
    bad = np.flatnonzero(degree < 4 + tau_a)
    if bad.size == 0:
        return LtwzReport(cond_i, cond_ii, True)
    j = int(bad[0])
    a = tuple(others[i] for i in np.flatnonzero(bits[j]).tolist())
    return LtwzReport(cond_i, cond_ii, False, a, int(degree[j]), int(tau_a[j]))


def extend_orientation(
    g: Multigraph, beta: Sequence[int], z0: int, pre: Mapping[int, int], require_conditions: bool = True
) -> Certificate:
    """Extend ``pre`` to a beta-orientation of ``g`` by search.

    When the lemma's hypotheses hold the extension must exist, so a failed
    search raises :class:`InternalInconsistency`. With
    ``require_conditions=False`` the search also runs on instances outside
    the lemma and may return a nonexistence certificate.
    """
    report = ltwz_check(g, beta, z0, pre)
    if require_conditions and not report.holds:
        raise HypothesisError(f"extension lemma hypotheses fail: {report.to_json()}")
    cert = find_beta_orientation(g, beta, fixed=pre)
    if not cert.exists and report.holds:
        raise InternalInconsistency("pre-orientation does not extend although the lemma applies")
    return cert


def recover_orientation(aug: Augmentation, d_full: Orientation) -> Orientation:
    """Drop ``z0`` and its arcs; the rest is a ``base_beta``-orientation of the base graph."""
    d_full.check_covers(aug.graph)
    for e, t in aug.pre.items():
        if d_full.arcs[e][0] != t:
            raise InvalidArgument(f"orientation disagrees with the pre-orientation on edge {e}")
    if not is_beta_orientation(aug.graph, d_full, aug.beta):
        raise InvalidArgument("orientation is not a beta-orientation of the augmented graph")
    d = Orientation(d_full.arcs[: aug.base.m])
    if not is_beta_orientation(aug.base, d, aug.base_beta):
        raise InternalInconsistency("recovered orientation misses the base boundary")
    return d
