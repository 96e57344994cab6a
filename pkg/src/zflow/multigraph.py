"""Loopless multigraphs with stable edge ids, contraction and a text format.

Vertices are the integers ``0..n-1`` and edges are stored as ``(u, v)`` pairs
with ``u < v``; the position of a pair in :attr:`Multigraph.edges` is its edge
id. Parallel edges are distinct entries. Values are immutable; every operation
returns a new graph.
"""

from __future__ import annotations

import dataclasses
from collections.abc import Iterable
from typing import NamedTuple

from .errors import InvalidArgument, ParseError


@dataclasses.dataclass(frozen=True)
class Multigraph:
    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise InvalidArgument("vertex count must be nonnegative")
        canon = []
        for i, (u, v) in enumerate(self.edges):
            u, v = int(u), int(v)
            if u == v:
                raise InvalidArgument(f"edge {i} is a loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidArgument(f"edge {i} = ({u}, {v}) has an endpoint outside 0..{self.n - 1}")
            canon.append((u, v) if u < v else (v, u))
        object.__setattr__(self, "edges", tuple(canon))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def incidence(self) -> list[list[int]]:
        """Edge ids incident to each vertex, in id order."""
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(self.edges):
            inc[u].append(i)
            inc[v].append(i)
        return inc

    def other_end(self, e: int, v: int) -> int:
        u, w = self.edges[e]
        return w if v == u else u

    def vertex_set(self, x: Iterable[int]) -> frozenset[int]:
        xs = frozenset(int(v) for v in x)
        for v in xs:
            if not 0 <= v < self.n:
                raise InvalidArgument(f"vertex {v} not in graph with {self.n} vertices")
        return xs

    def _proper_set(self, x: Iterable[int]) -> frozenset[int]:
        xs = self.vertex_set(x)
        if not xs or len(xs) == self.n:
            raise InvalidArgument("vertex set must be nonempty and proper")
        return xs

    def boundary_edges(self, x: Iterable[int]) -> frozenset[int]:
        """Ids of the edges with exactly one end in ``x``."""
        xs = self._proper_set(x)
        return frozenset(i for i, (u, v) in enumerate(self.edges) if (u in xs) != (v in xs))

    def degree_of_set(self, a: Iterable[int]) -> int:
        xs = self.vertex_set(a)
        if not xs:
            raise InvalidArgument("vertex set must be nonempty")
        return sum(1 for u, v in self.edges if (u in xs) != (v in xs))

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def components(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            stack, comp = [s], []
            while stack:
                u = stack.pop()
                comp.append(u)
                for w in adj[u]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    def contract(self, x: Iterable[int]) -> Contraction:
        """Merge ``x`` into one vertex, dropping the edges inside ``x``.

        The merged vertex takes the place of ``min(x)``; the remaining
        vertices keep their relative order.
        """
        xs = self.vertex_set(x)
        if not xs:
            raise InvalidArgument("cannot contract an empty vertex set")
        rep = min(xs)
        vmap = []
        nxt = 0
        for v in range(self.n):
            if v in xs and v != rep:
                vmap.append(-1)
            else:
                vmap.append(nxt)
                nxt += 1
        for v in xs:
            vmap[v] = vmap[rep]
        new_edges = []
        emap: dict[int, int] = {}
        for i, (u, v) in enumerate(self.edges):
            a, b = vmap[u], vmap[v]
            if a == b:
                continue
            emap[i] = len(new_edges)
            new_edges.append((a, b))
        return Contraction(Multigraph(nxt, tuple(new_edges)), tuple(vmap), emap)

    def delete_edge(self, e: int) -> Multigraph:
        """Remove edge ``e``; ids above ``e`` shift down by one."""
        if not 0 <= e < self.m:
            raise InvalidArgument(f"no edge with id {e}")
        return Multigraph(self.n, self.edges[:e] + self.edges[e + 1 :])

    def add_edges(self, pairs: Iterable[tuple[int, int]], extra_vertices: int = 0) -> Multigraph:
        return Multigraph(self.n + extra_vertices, self.edges + tuple(pairs))

    def serialize(self) -> str:
        lines = [f"{self.n} {self.m}"]
        lines.extend(f"{u} {v}" for u, v in self.edges)
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> Multigraph:
        header = None
        edges: list[tuple[int, int]] = []
        lineno = last = 0
        for lineno, raw in enumerate(text.split("\n"), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            last = lineno
            parts = line.split()
            try:
                nums = [int(p) for p in parts]
            except ValueError:
                raise ParseError(f"expected integers, got {line!r}", lineno) from None
            if len(nums) != 2:
                raise ParseError(f"expected two integers, got {len(nums)}", lineno)
            if header is None:
                if nums[0] < 0 or nums[1] < 0:
                    raise ParseError("negative count in header", lineno)
                header = (nums[0], nums[1])
                continue
            n = header[0]
            u, v = nums
            if u == v:
                raise ParseError(f"loop at vertex {u}", lineno)
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(f"vertex out of range 0..{n - 1}", lineno)
            if len(edges) == header[1]:
                raise ParseError(f"more than {header[1]} edges", lineno)
            edges.append((u, v))
        if header is None:
            raise ParseError("missing 'n m' header", max(lineno, 1))
        if len(edges) != header[1]:
            raise ParseError(f"header declares {header[1]} edges, found {len(edges)}", last)
        return cls(header[0], tuple(edges))


class Contraction(NamedTuple):
    graph: Multigraph
    vertex_map: tuple[int, ...]
    edge_map: dict[int, int]


def boundary_edges(g: Multigraph, x: Iterable[int]) -> frozenset[int]:
    return g.boundary_edges(x)


def degree_of_set(g: Multigraph, a: Iterable[int]) -> int:
    return g.degree_of_set(a)


def contract(g: Multigraph, x: Iterable[int]) -> Contraction:
    return g.contract(x)


def delete_edge(g: Multigraph, e: int) -> Multigraph:
    return g.delete_edge(e)


def complete_graph(n: int) -> Multigraph:
    return Multigraph(n, tuple((u, v) for u in range(n) for v in range(u + 1, n)))


def cycle_graph(n: int) -> Multigraph:
    return Multigraph(n, tuple((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Multigraph:
    return Multigraph(n, tuple((i, i + 1) for i in range(n - 1)))


def parallel_edges(k: int) -> Multigraph:
    """Two vertices joined by ``k`` parallel edges."""
    return Multigraph(2, ((0, 1),) * k)


def petersen_graph() -> Multigraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Multigraph(10, tuple(outer + spokes + inner))


def k4_triangle_blowup() -> Multigraph:
    """K4 with every vertex replaced by a triangle; contracting the triangles gives K4."""
    edges = []
    for t in range(4):
        a, b, c = 3 * t, 3 * t + 1, 3 * t + 2
        edges += [(a, b), (b, c), (a, c)]
    # port j of triangle t is the vertex that connects toward triangle j
    port = {}
    for t in range(4):
        others = [j for j in range(4) if j != t]
        for k, j in enumerate(others):
            port[t, j] = 3 * t + k
    for s in range(4):
        for t in range(s + 1, 4):
            edges.append((port[s, t], port[t, s]))
    return Multigraph(12, tuple(edges))
