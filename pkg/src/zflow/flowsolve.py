"""Exact solvers and verifiers for mod-3 orientations, nowhere-zero 3-flows,
Z3-connectivity and flow counting.

Every positive answer carries a :class:`Certificate` that the matching
verifier re-checks. Negative answers are backed only by the node count of a
completed exhaustive search.
"""

from __future__ import annotations

import dataclasses
import itertools
import sys
from collections import deque
from collections.abc import Iterable, Mapping, Sequence
from typing import Any

import numpy as np

from . import limits
from .errors import InvalidArgument
from .multigraph import Multigraph

MOD3 = "mod3-orientation"
BETA = "beta-orientation"
NZ3 = "nz3-flow"
Z3_TABLE = "z3-table"
EXHAUSTED = "nonexistence-by-exhaustion"

# |tau| indexed by [beta(A) mod 3][d(A) mod 2]
TAU_TABLE = ((0, 3), (2, 1), (2, 1))


@dataclasses.dataclass(frozen=True)
class Orientation:
    """One ``(tail, head)`` arc per edge id."""

    arcs: tuple[tuple[int, int], ...]

    def balances(self, n: int) -> list[int]:
        """``d+(v) - d-(v)`` for every vertex."""
        bal = [0] * n
        for t, h in self.arcs:
            bal[t] += 1
            bal[h] -= 1
        return bal

    def out_degree(self, x: Iterable[int]) -> int:
        xs = set(x)
        return sum(1 for t, h in self.arcs if t in xs and h not in xs)

    def in_degree(self, x: Iterable[int]) -> int:
        xs = set(x)
        return sum(1 for t, h in self.arcs if h in xs and t not in xs)

    def reversed(self) -> Orientation:
        return Orientation(tuple((h, t) for t, h in self.arcs))

    def check_covers(self, g: Multigraph) -> None:
        if len(self.arcs) != g.m:
            raise InvalidArgument(f"orientation has {len(self.arcs)} arcs, graph has {g.m} edges")
        for i, (t, h) in enumerate(self.arcs):
            if (min(t, h), max(t, h)) != g.edges[i]:
                raise InvalidArgument(f"arc {i} = ({t}, {h}) does not match edge {g.edges[i]}")

    def to_json(self) -> list[list[int]]:
        return [[i, t, h] for i, (t, h) in enumerate(self.arcs)]


@dataclasses.dataclass(frozen=True)
class FlowAssignment:
    orientation: Orientation
    values: tuple[int, ...]

    def canonical(self) -> FlowAssignment:
        """Flip every negatively valued arc so all values are positive."""
        arcs, vals = [], []
        for (t, h), f in zip(self.orientation.arcs, self.values):
            if f < 0:
                arcs.append((h, t))
                vals.append(-f)
            else:
                arcs.append((t, h))
                vals.append(f)
        return FlowAssignment(Orientation(tuple(arcs)), tuple(vals))

    def to_json(self) -> dict:
        return {
            "orientation": self.orientation.to_json(),
            "flow": [[i, f] for i, f in enumerate(self.values)],
        }


@dataclasses.dataclass(frozen=True)
class Certificate:
    kind: str
    payload: Any
    nodes_searched: int = 0
    beta: tuple[int, ...] | None = None

    @property
    def exists(self) -> bool:
        return self.kind != EXHAUSTED

    def to_json(self) -> dict:
        doc: dict[str, Any] = {"exists": self.exists, "kind": self.kind, "nodes_searched": self.nodes_searched}
        if self.beta is not None:
            doc["beta"] = list(self.beta)
        if isinstance(self.payload, Orientation):
            doc["orientation"] = self.payload.to_json()
        elif isinstance(self.payload, FlowAssignment):
            doc.update(self.payload.to_json())
        elif self.kind == Z3_TABLE:
            doc["table"] = [{"beta": list(b), "orientation": d.to_json()} for b, d in self.payload]
        elif isinstance(self.payload, tuple):
            doc["counterexample"] = list(self.payload)
        return doc


def boundary(g: Multigraph, values: Sequence[int]) -> tuple[int, ...]:
    """Validate and normalize a Z3-boundary."""
    if len(values) != g.n:
        raise InvalidArgument(f"boundary has {len(values)} entries, graph has {g.n} vertices")
    beta = tuple(int(b) % 3 for b in values)
    if sum(beta) % 3:
        raise InvalidArgument("boundary values do not sum to 0 mod 3")
    return beta


def tau(beta_of_a: int, degree_of_a: int) -> int:
    """Magnitude of the value in {0, ±1, ±2, ±3} congruent to ``beta_of_a``
    mod 3 and to ``degree_of_a`` mod 2."""
    return TAU_TABLE[beta_of_a % 3][degree_of_a % 2]


def is_beta_orientation(g: Multigraph, d: Orientation, beta: Sequence[int]) -> bool:
    d.check_covers(g)
    return all((b - t) % 3 == 0 for b, t in zip(d.balances(g.n), beta))


def verify_mod3_orientation(g: Multigraph, d: Orientation) -> bool:
    return is_beta_orientation(g, d, [0] * g.n)


def _vertex_order(g: Multigraph, inc: list[list[int]], free: set[int]) -> list[int]:
    """Greedy order: next vertex has the most free edges into the placed set."""
    deg = [sum(1 for e in inc[v] if e in free) for v in range(g.n)]
    placed = [False] * g.n
    links = [0] * g.n
    order = []
    for _ in range(g.n):
        v = max((u for u in range(g.n) if not placed[u]), key=lambda u: (links[u], deg[u], -u))
        placed[v] = True
        order.append(v)
        for e in inc[v]:
            if e in free:
                links[g.other_end(e, v)] += 1
    return order


def _search(g: Multigraph, beta: Sequence[int], fixed: Mapping[int, int]) -> tuple[list[tuple[int, int]] | None, int]:
    """Backtracking over free edge directions.

    ``fixed`` maps edge id to its tail. A vertex is pruned when its remaining
    free edges cannot reach ``beta`` mod 3: with two or more left every
    residue is reachable, with one left the residue ``bal`` itself is not.
    """
    inc = g.incidence()
    bal = [0] * g.n
    rem = [0] * g.n
    for e, t in fixed.items():
        u, v = g.edges[e]
        if t not in (u, v):
            raise InvalidArgument(f"fixed tail {t} is not an end of edge {e}")
        bal[t] += 1
        bal[g.other_end(e, t)] -= 1
    free = set(range(g.m)) - set(fixed)
    for e in free:
        u, v = g.edges[e]
        rem[u] += 1
        rem[v] += 1

    def ok(x: int) -> bool:
        r = rem[x]
        if r >= 2:
            return True
        gap = (bal[x] - beta[x]) % 3
        return gap != 0 if r == 1 else gap == 0

    if not all(ok(x) for x in range(g.n)):
        return None, 0

    order: list[int] = []
    listed: set[int] = set()
    for v in _vertex_order(g, inc, free):
        for e in inc[v]:
            if e in free and e not in listed:
                listed.add(e)
                order.append(e)
    ends = [g.edges[e] for e in order]
    forward = [True] * len(order)
    nodes = 0

    def rec(i: int) -> bool:
        nonlocal nodes
        if i == len(order):
            return True
        u, v = ends[i]
        rem[u] -= 1
        rem[v] -= 1
        for tail, head in ((u, v), (v, u)):
            nodes += 1
            bal[tail] += 1
            bal[head] -= 1
            if ok(tail) and ok(head) and rec(i + 1):
                forward[i] = tail == u
                return True
            bal[tail] -= 1
            bal[head] += 1
        rem[u] += 1
        rem[v] += 1
        return False

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, len(order) + 200))
    try:
        found = rec(0)
    finally:
        sys.setrecursionlimit(old)
    if not found:
        return None, nodes
    arcs: list[tuple[int, int]] = [(0, 0)] * g.m
    for e, t in fixed.items():
        arcs[e] = (t, g.other_end(e, t))
    for i, e in enumerate(order):
        u, v = ends[i]
        arcs[e] = (u, v) if forward[i] else (v, u)
    return arcs, nodes


def find_beta_orientation(
    g: Multigraph, beta: Sequence[int], fixed: Mapping[int, int] | None = None
) -> Certificate:
    """Search for an orientation with ``d+(v) - d-(v) ≡ beta(v) (mod 3)``.

    ``fixed`` pins the tails of some edges (a pre-orientation).
    """
    beta = boundary(g, beta)
    fixed = dict(fixed or {})
    limits.check("orientation search", "search_max_edges", g.m - len(fixed))
    arcs, nodes = _search(g, beta, fixed)
    kind = MOD3 if not any(beta) else BETA
    if arcs is None:
        return Certificate(EXHAUSTED, None, nodes, beta)
    return Certificate(kind, Orientation(tuple(arcs)), nodes, beta)


def find_mod3_orientation(g: Multigraph) -> Certificate:
    return find_beta_orientation(g, [0] * g.n)


def orientation_to_nz3flow(g: Multigraph, d: Orientation) -> FlowAssignment:
    """Turn a mod-3 orientation into an integer flow with values in {1, -2}.

    Starting from ``f ≡ 1``, every vertex excess is a multiple of 3. Excess
    is pushed to deficit vertices along residual paths, where an arc with
    ``f = 1`` may switch to ``-2`` (moving 3 units forward) and an arc with
    ``f = -2`` may switch back (moving 3 units backward).
    """
    if not verify_mod3_orientation(g, d):
        raise InvalidArgument("not a modulo-3 orientation")
    f = [1] * g.m
    excess = [b // 3 for b in d.balances(g.n)]
    out_arcs: list[list[int]] = [[] for _ in range(g.n)]
    in_arcs: list[list[int]] = [[] for _ in range(g.n)]
    for e, (t, h) in enumerate(d.arcs):
        out_arcs[t].append(e)
        in_arcs[h].append(e)
    while True:
        src = next((v for v in range(g.n) if excess[v] > 0), None)
        if src is None:
            break
        prev: dict[int, tuple[int, int]] = {src: (-1, -1)}
        queue = deque([src])
        sink = None
        while queue and sink is None:
            x = queue.popleft()
            steps = [(e, d.arcs[e][1]) for e in out_arcs[x] if f[e] == 1]
            steps += [(e, d.arcs[e][0]) for e in in_arcs[x] if f[e] == -2]
            for e, y in steps:
                if y not in prev:
                    prev[y] = (x, e)
                    if excess[y] < 0:
                        sink = y
                        break
                    queue.append(y)
        if sink is None:
            raise InvalidArgument("no residual path; orientation is inconsistent")
        y = sink
        while y != src:
            x, e = prev[y]
            f[e] = -2 if f[e] == 1 else 1
            y = x
        excess[src] -= 1
        excess[sink] += 1
    return FlowAssignment(d, tuple(f))


def verify_flow(g: Multigraph, fa: FlowAssignment, k: int) -> bool:
    """Exact conservation with every ``|f(e)|`` in ``1..k-1``."""
    if k < 2:
        raise InvalidArgument("k must be at least 2")
    fa.orientation.check_covers(g)
    if len(fa.values) != g.m:
        raise InvalidArgument("flow value count does not match edge count")
    net = [0] * g.n
    for (t, h), f in zip(fa.orientation.arcs, fa.values):
        if not 1 <= abs(f) <= k - 1:
            return False
        net[t] += f
        net[h] -= f
    return not any(net)


def find_nz3_flow(g: Multigraph) -> Certificate:
    cert = find_mod3_orientation(g)
    if not cert.exists:
        return cert
    return Certificate(NZ3, orientation_to_nz3flow(g, cert.payload), cert.nodes_searched)


def count_nz_zk_flows(g: Multigraph, k: int) -> int:
    """Brute-force count of nowhere-zero Z_k flows against the stored edge
    directions (vectorized over all ``(k-1)^m`` assignments)."""
    if k < 2:
        raise InvalidArgument("k must be at least 2")
    limits.check("Z_k flow enumeration", "brute_force_max_edges", g.m)
    base = k - 1
    total = base**g.m
    count = 0
    chunk = 1 << 18
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        net = np.zeros((idx.size, max(g.n, 1)), dtype=np.int64)
        rest = idx.copy()
        for u, v in g.edges:
            val = rest % base + 1
            rest //= base
            net[:, u] += val
            net[:, v] -= val
        count += int(np.count_nonzero(np.all(net % k == 0, axis=1)))
    return count


def _has_bridge(n: int, edges: Sequence[tuple[int, int]]) -> bool:
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for i, (u, v) in enumerate(edges):
        adj[u].append((v, i))
        adj[v].append((u, i))
    disc = [-1] * n
    low = [0] * n
    timer = 0
    for root in range(n):
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [(root, -1, iter(adj[root]))]
        while stack:
            x, via, it = stack[-1]
            advanced = False
            for y, e in it:
                if e == via:
                    continue
                if disc[y] < 0:
                    disc[y] = low[y] = timer
                    timer += 1
                    stack.append((y, e, iter(adj[y])))
                    advanced = True
                    break
                low[x] = min(low[x], disc[y])
            if advanced:
                continue
            stack.pop()
            if stack:
                parent = stack[-1][0]
                low[parent] = min(low[parent], low[x])
                if low[x] > disc[parent]:
                    return True
    return False


def _normalize(edges: Iterable[tuple[int, int]]) -> tuple[int, tuple[tuple[int, int], ...]]:
    edges = sorted((min(u, v), max(u, v)) for u, v in edges)
    relabel: dict[int, int] = {}
    for u, v in edges:
        relabel.setdefault(u, len(relabel))
        relabel.setdefault(v, len(relabel))
    out = tuple(sorted((min(relabel[u], relabel[v]), max(relabel[u], relabel[v])) for u, v in edges))
    return len(relabel), out


def flow_polynomial(g: Multigraph, k: int) -> int:
    """Number of nowhere-zero k-flows by deletion-contraction.

    ``F(G) = F(G/e) - F(G - e)`` for a non-loop ``e``; edges that become
    loops on contraction each contribute a factor ``k - 1``. Memoized on the
    exact edge multiset after dropping isolated vertices.
    """
    if k < 2:
        raise InvalidArgument("k must be at least 2")
    limits.check("flow polynomial", "flowpoly_max_edges", g.m)
    memo: dict[tuple[int, tuple[tuple[int, int], ...]], int] = {}

    def rec(key: tuple[int, tuple[tuple[int, int], ...]]) -> int:
        if key in memo:
            return memo[key]
        n, edges = key
        if not edges:
            result = 1
        elif _has_bridge(n, edges):
            result = 0
        else:
            deg = [0] * n
            for u, v in edges:
                deg[u] += 1
                deg[v] += 1
            i = min(range(len(edges)), key=lambda j: (min(deg[edges[j][0]], deg[edges[j][1]]), j))
            a, b = edges[i]
            deleted = edges[:i] + edges[i + 1 :]
            loops = sum(1 for e in deleted if e == (a, b))
            merged = [(a if u == b else u, a if v == b else v) for u, v in deleted if (u, v) != (a, b)]
            result = (k - 1) ** loops * rec(_normalize(merged)) - rec(_normalize(deleted))
        memo[key] = result
        return result

    return rec(_normalize(g.edges))


@dataclasses.dataclass(frozen=True)
class Z3Result:
    connected: bool
    certificate: Certificate
    counterexample: tuple[int, ...] | None
    boundaries_checked: int

    def to_json(self) -> dict:
        doc = self.certificate.to_json()
        doc["z3_connected"] = self.connected
        doc["boundaries_checked"] = self.boundaries_checked
        return doc


def all_boundaries(n: int) -> list[tuple[int, ...]]:
    """Every Z3-boundary on ``n`` vertices in lexicographic order."""
    return [b for b in itertools.product(range(3), repeat=n) if sum(b) % 3 == 0]


def z3_connected(g: Multigraph) -> Z3Result:
    """Decide Z3-connectivity by solving every boundary.

    Uses the orientation form: a Z3 value 2 on an arc is the same as value 1
    on the reversed arc, so a nowhere-zero Z3 function realizing ``beta``
    exists iff a beta-orientation does.
    """
    limits.check("Z3-connectivity sweep", "z3_max_n", g.n)
    limits.check("orientation search", "search_max_edges", g.m)
    table = []
    nodes = 0
    checked = 0
    for beta in all_boundaries(g.n):
        checked += 1
        cert = find_beta_orientation(g, beta)
        nodes += cert.nodes_searched
        if not cert.exists:
            return Z3Result(False, Certificate(EXHAUSTED, beta, nodes, beta), beta, checked)
        table.append((beta, cert.payload))
    return Z3Result(True, Certificate(Z3_TABLE, tuple(table), nodes), None, checked)


def verify_certificate(g: Multigraph, cert: Certificate) -> bool:
    """Re-check a positive certificate against ``g``."""
    if cert.kind in (MOD3, BETA):
        beta = cert.beta if cert.beta is not None else (0,) * g.n
        return is_beta_orientation(g, cert.payload, beta)
    if cert.kind == NZ3:
        return verify_flow(g, cert.payload, 3)
    if cert.kind == Z3_TABLE:
        seen = {b for b, _ in cert.payload}
        return seen == set(all_boundaries(g.n)) and all(is_beta_orientation(g, d, b) for b, d in cert.payload)
    return False
