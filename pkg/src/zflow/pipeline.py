"""Constructive versions of the two reduction proofs.

``augmentation_mod3_orientation`` follows the minimal-counterexample argument for
mod-3 orientations: two-vertex graphs are oriented by hand, degree-2
vertices are suppressed, nontrivial 2- and 3-edge-cuts are split and the
halves merged, a small cut avoiding every degree-3/5 vertex is contracted
and re-extended through the extension lemma, and what remains is closed by
the z0-augmentation. ``augmentation_beta_orientation`` does the same for
beta-orientations of 5-edge-connected graphs.

Every use of the extension lemma is recorded with its hypothesis report so
callers can audit it. If a report fails, the extension search still runs
(as a probe) and the outcome is recorded.
"""

from __future__ import annotations

import dataclasses
import functools
from collections.abc import Sequence

from .cutcensus import degree_classes, small_sides
from .errors import InternalInconsistency, InvalidArgument
from .flowsolve import Orientation, boundary, find_beta_orientation, is_beta_orientation
from .gadgets import (
    LtwzReport,
    anchor_augment_3flow,
    ltwz_check,
    recover_orientation,
    z0_augment_3flow,
    z0_augment_z3,
)
from .multigraph import Multigraph


@dataclasses.dataclass(frozen=True)
class LemmaUse:
    """One application of the extension lemma."""

    stage: str  # "augmentation" or "contraction"
    case: str
    n: int
    m: int
    report: LtwzReport
    extended: bool

    def to_json(self) -> dict:
        return {
            "stage": self.stage,
            "case": self.case,
            "n": self.n,
            "m": self.m,
            "extended": self.extended,
            "conditions": self.report.to_json(),
        }


@dataclasses.dataclass
class Trace:
    lemma_uses: list[LemmaUse] = dataclasses.field(default_factory=list)
    reductions: list[str] = dataclasses.field(default_factory=list)

    @property
    def violations(self) -> list[LemmaUse]:
        return [u for u in self.lemma_uses if not u.report.holds]

    @property
    def failed_extensions(self) -> list[LemmaUse]:
        return [u for u in self.lemma_uses if not u.extended]


@dataclasses.dataclass(frozen=True)
class PipelineResult:
    orientation: Orientation | None
    trace: Trace

    @property
    def found(self) -> bool:
        return self.orientation is not None


@dataclasses.dataclass(frozen=True)
class _Options:
    reduce: bool = True
    repair: bool = False


class _Stuck(Exception):
    """An extension probe failed outside the lemma's hypotheses."""


def _extend(g: Multigraph, beta, z0: int, pre: dict[int, int], stage: str, case: str, trace: Trace) -> Orientation:
    report = ltwz_check(g, beta, z0, pre)
    cert = find_beta_orientation(g, beta, fixed=pre)
    trace.lemma_uses.append(LemmaUse(stage, case, g.n, g.m, report, cert.exists))
    if not cert.exists:
        if report.holds:
            raise InternalInconsistency("pre-orientation does not extend although the lemma applies")
        raise _Stuck(f"{stage} extension failed with violated hypotheses {report.to_json()}")
    return cert.payload


def _two_vertex(g: Multigraph, beta_x: int) -> Orientation:
    # a arcs 0->1 and m-a arcs 1->0 give balance 2a - m at vertex 0
    a = next(a for a in range(3) if (2 * a - g.m - beta_x) % 3 == 0)
    if a > g.m:
        raise InvalidArgument("two-vertex graph has too few edges for this boundary")
    return Orientation(tuple((0, 1) if i < a else (1, 0) for i in range(g.m)))


def _remove_vertex(g: Multigraph, x: int, drop: set[int]) -> tuple[Multigraph, list[int]]:
    """Delete vertex ``x`` (isolated once ``drop`` is removed); returns the kept old edge ids."""
    kept = [i for i in range(g.m) if i not in drop]
    relabel = lambda v: v - (v > x)  # noqa: E731
    edges = tuple((relabel(g.edges[i][0]), relabel(g.edges[i][1])) for i in kept)
    return Multigraph(g.n - 1, edges), kept


@functools.lru_cache(maxsize=4096)
def _sides(g: Multigraph, max_size: int) -> tuple[tuple[frozenset[int], int], ...]:
    return tuple(small_sides(g, max_size))


def _merge_sides(g: Multigraph, x: frozenset[int], solve) -> Orientation:
    """Solve ``G/(V-X)`` and ``G/X`` separately and glue along the cut."""
    rest = frozenset(range(g.n)) - x
    inner = g.contract(rest)  # keeps X's edges
    outer = g.contract(x)  # keeps the rest
    d_in = solve(inner.graph)
    d_out = solve(outer.graph)
    cut = g.boundary_edges(x)

    def lift(c, d, e):
        t, _ = d.arcs[c.edge_map[e]]
        u, v = g.edges[e]
        return (u, v) if c.vertex_map[u] == t else (v, u)

    for attempt in (d_out, d_out.reversed()):
        if all(lift(inner, d_in, e) == lift(outer, attempt, e) for e in cut):
            d_out = attempt
            break
    else:
        raise InternalInconsistency("orientations of the two sides cannot be matched on the cut")
    arcs = []
    for e, (u, v) in enumerate(g.edges):
        c, d = (outer, d_out) if (u in rest and v in rest) else (inner, d_in)
        arcs.append(lift(c, d, e))
    return Orientation(tuple(arcs))


def _contract_and_extend(
    g: Multigraph, u_set: frozenset[int], beta: Sequence[int], solve, case: str, trace: Trace
) -> Orientation:
    """Solve ``G/U``, then extend its arcs on ``∂(U)`` into ``U`` with the lemma."""
    rest = frozenset(range(g.n)) - u_set
    small = g.contract(u_set)
    u_new = small.vertex_map[min(u_set)]
    small_beta = [0] * small.graph.n
    for v in range(g.n):
        small_beta[small.vertex_map[v]] += beta[v]
    d_small = solve(small.graph, tuple(b % 3 for b in small_beta))

    big = g.contract(rest)
    z0 = big.vertex_map[min(rest)]
    big_beta = [0] * big.graph.n
    for v in range(g.n):
        big_beta[big.vertex_map[v]] += beta[v]
    pre = {}
    for e in g.boundary_edges(u_set):
        t, _ = d_small.arcs[small.edge_map[e]]
        a, b = g.edges[e]
        inside = a if a in u_set else b
        pre[big.edge_map[e]] = big.vertex_map[inside] if t == u_new else z0
    d_big = _extend(big.graph, tuple(b % 3 for b in big_beta), z0, pre, "contraction", case, trace)

    arcs = []
    for e, (a, b) in enumerate(g.edges):
        if a in u_set and b in u_set:
            t, _ = d_big.arcs[big.edge_map[e]]
            arcs.append((a, b) if big.vertex_map[a] == t else (b, a))
        else:
            t, _ = d_small.arcs[small.edge_map[e]]
            arcs.append((a, b) if small.vertex_map[a] == t else (b, a))
    return Orientation(tuple(arcs))


def _pick_small_set(
    g: Multigraph, sizes: set[int], avoid: frozenset[int], nontrivial: bool = False
) -> frozenset[int] | None:
    """Smallest ``U`` with ``|U| >= 2``, ``|∂(U)|`` in ``sizes`` and ``U`` avoiding ``avoid``.

    ``nontrivial`` also demands at least two vertices outside ``U``.
    """
    rest_min = 2 if nontrivial else 1
    cands = [
        x
        for x, s in _sides(g, max(sizes))
        if s in sizes and len(x) >= 2 and g.n - len(x) >= rest_min and not (x & avoid)
    ]
    if not cands:
        return None
    return min(cands, key=lambda x: (len(x), sorted(x)))


def _mod3(g: Multigraph, trace: Trace, opts: _Options) -> Orientation:
    if g.n == 1:
        return Orientation(())
    if g.n == 2:
        trace.reductions.append("two-vertex")
        return _two_vertex(g, 0)
    if not opts.reduce:
        return _mod3_leaf(g, trace, opts)

    inc = g.incidence()
    deg2 = next((v for v in range(g.n) if len(inc[v]) == 2), None)
    if deg2 is not None:
        e1, e2 = inc[deg2]
        x1, x2 = g.other_end(e1, deg2), g.other_end(e2, deg2)
        if x1 == x2:
            trace.reductions.append("digon-removal")
            h, kept = _remove_vertex(g, deg2, {e1, e2})
            arcs = _lift_kept(g, deg2, kept, _mod3(h, trace, opts))
            arcs[e1], arcs[e2] = (deg2, x1), (x1, deg2)
            return Orientation(tuple(arcs))
        trace.reductions.append("suppress-degree-2")
        h, kept = _remove_vertex(g.add_edges([(x1, x2)]), deg2, {e1, e2})
        d = _mod3(h, trace, opts)
        arcs = _lift_kept(g, deg2, kept, d)
        # the shortcut is the last edge of h; route its direction through deg2
        if d.arcs[-1][0] == x1 - (x1 > deg2):
            arcs[e1], arcs[e2] = (x1, deg2), (deg2, x2)
        else:
            arcs[e2], arcs[e1] = (x2, deg2), (deg2, x1)
        return Orientation(tuple(arcs))

    x = _pick_small_set(g, {2, 3}, frozenset(), nontrivial=True)
    if x is not None:
        trace.reductions.append(f"split-{g.degree_of_set(x)}-cut")
        return _merge_sides(g, x, lambda h: _mod3(h, trace, opts))

    cls = degree_classes(g)
    u_set = _pick_small_set(g, {1, 2, 3, 4, 5}, cls.p_prime | cls.q_prime)
    if u_set is not None:
        trace.reductions.append(f"contract-{g.degree_of_set(u_set)}-cut")
        return _contract_and_extend(g, u_set, (0,) * g.n, lambda h, b: _mod3(h, trace, opts), "mod3", trace)
    return _mod3_leaf(g, trace, opts)


def _lift_kept(g: Multigraph, x: int, kept: list[int], d: Orientation) -> list[tuple[int, int]]:
    """Copy arcs of the graph with ``x`` removed back onto ``g``'s edge ids."""
    arcs: list[tuple[int, int]] = [(0, 0)] * g.m
    for new, old in enumerate(kept):
        if old >= g.m:
            continue
        u, v = g.edges[old]
        arcs[old] = (u, v) if d.arcs[new][0] == u - (u > x) else (v, u)
    return arcs


def _mod3_leaf(g: Multigraph, trace: Trace, opts: _Options) -> Orientation:
    cls = degree_classes(g)
    if opts.repair and len(cls.p_prime) == 1 and len(cls.q_prime) == 1:
        aug = anchor_augment_3flow(g)
    else:
        aug = z0_augment_3flow(g)
    d_full = _extend(aug.graph, aug.beta, aug.z0, dict(aug.pre), "augmentation", aug.case, trace)
    return recover_orientation(aug, d_full)


def augmentation_mod3_orientation(g: Multigraph, reduce: bool = True, repair: bool = False) -> PipelineResult:
    """Mod-3 orientation of a connected bridgeless graph via the augmentation proof.

    With ``reduce=False`` the augmentation is applied to ``g`` directly,
    skipping the small-cut reductions. ``repair=True`` closes graphs with
    exactly one degree-3 and one degree-5 vertex by
    :func:`~zflow.gadgets.anchor_augment_3flow`, where the z0-augmentation
    violates the extension lemma's subset condition.
    """
    opts = _Options(reduce, repair)
    if g.n == 0 or not g.is_connected():
        raise InvalidArgument("pipeline needs a connected graph")
    trace = Trace()
    try:
        d = _mod3(g, trace, opts)
    except _Stuck:
        return PipelineResult(None, trace)
    if not is_beta_orientation(g, d, (0,) * g.n):
        raise InternalInconsistency("pipeline produced an invalid orientation")
    return PipelineResult(d, trace)


def _z3(g: Multigraph, beta: tuple[int, ...], trace: Trace, opts: _Options) -> Orientation:
    if g.n == 1:
        return Orientation(())
    if g.n == 2:
        trace.reductions.append("two-vertex")
        return _two_vertex(g, beta[0])
    if opts.reduce:
        s_prime = degree_classes(g).s_prime
        u_set = _pick_small_set(g, {5}, s_prime)
        if u_set is not None:
            trace.reductions.append("contract-5-cut")
            return _contract_and_extend(g, u_set, beta, lambda h, b: _z3(h, b, trace, opts), "z3", trace)
    aug = z0_augment_z3(g, beta)
    d_full = _extend(aug.graph, aug.beta, aug.z0, dict(aug.pre), "augmentation", aug.case, trace)
    return recover_orientation(aug, d_full)


def augmentation_beta_orientation(g: Multigraph, beta: Sequence[int], reduce: bool = True) -> PipelineResult:
    """Beta-orientation of a 5-edge-connected graph via the augmentation proof."""
    beta = boundary(g, beta)
    opts = _Options(reduce, False)
    if g.n == 0 or not g.is_connected():
        raise InvalidArgument("pipeline needs a connected graph")
    trace = Trace()
    try:
        d = _z3(g, beta, trace, opts)
    except _Stuck:
        return PipelineResult(None, trace)
    if not is_beta_orientation(g, d, beta):
        raise InternalInconsistency("pipeline produced an invalid orientation")
    return PipelineResult(d, trace)
