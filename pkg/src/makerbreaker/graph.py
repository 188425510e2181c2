"""Immutable board graphs, generators and the queries used by win detection.

Vertices are the integers ``0..n-1``. Alongside the adjacency lists every
graph carries neighbourhood bitmasks (bit ``v`` set for vertex ``v``), which
is what the game engine and the micro-strategies work with in their inner
loops.
"""
from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

INF = math.inf


def bit_indices(mask: int) -> list[int]:
    """Vertex ids present in ``mask``, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def to_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


@dataclass(frozen=True, eq=True)
class Graph:
    """Undirected simple graph with canonical (sorted) adjacency lists."""

    n: int
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        if len(self.adjacency) != self.n:
            raise ValueError(f"adjacency has {len(self.adjacency)} rows, expected {self.n}")
        for v, nbrs in enumerate(self.adjacency):
            if list(nbrs) != sorted(set(nbrs)):
                raise ValueError(f"neighbours of {v} must be sorted and unique")
            for u in nbrs:
                if not 0 <= u < self.n:
                    raise ValueError(f"neighbour {u} of {v} out of range")
                if u == v:
                    raise ValueError(f"self-loop at {v}")
                if v not in self.adjacency[u]:
                    raise ValueError(f"edge {v}-{u} is not symmetric")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {u}-{v} out of range for n={n}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs))

    def __hash__(self) -> int:
        return hash((self.n, self.adjacency))

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def nbr_masks(self) -> tuple[int, ...]:
        return tuple(to_mask(a) for a in self.adjacency)

    @cached_property
    def closed_masks(self) -> tuple[int, ...]:
        return tuple(m | (1 << v) for v, m in enumerate(self.nbr_masks))

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.adjacency)

    @cached_property
    def distance_matrix(self) -> tuple[tuple[float, ...], ...]:
        return tuple(tuple(bfs_distances(self, s)) for s in range(self.n))

    @cached_property
    def closeness(self) -> tuple[float, ...]:
        """Closeness centrality within each vertex's own component (0 if isolated)."""
        out = []
        for row in self.distance_matrix:
            finite = [d for d in row if d != INF]
            total = sum(finite)
            out.append((len(finite) - 1) / total if total > 0 else 0.0)
        return tuple(out)

    def to_edge_list(self) -> str:
        edges = self.edges()
        lines = [f"{self.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edge_list(cls, text: str) -> "Graph":
        rows = [ln.split() for ln in text.splitlines() if ln.strip()]
        if not rows or len(rows[0]) != 2:
            raise ValueError("edge list must start with a 'n m' header")
        n, m = int(rows[0][0]), int(rows[0][1])
        body = rows[1:]
        if len(body) != m:
            raise ValueError(f"header declares {m} edges, found {len(body)}")
        return cls.from_edges(n, ((int(a), int(b)) for a, b in body))


def grid_graph(rows: int, cols: int) -> Graph:
    """The ``rows x cols`` grid; cell ``(r, c)`` is vertex ``r * cols + c``."""
    if rows < 1 or cols < 1:
        raise ValueError(f"grid dimensions must be positive, got {rows}x{cols}")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph.from_edges(rows * cols, edges)


def er_graph(n: int, p: float, seed: int) -> Graph:
    """G(n, p) drawn with one uniform variate per pair, pairs in lexicographic order."""
    if n < 1:
        raise ValueError("n must be positive")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    rng = random.Random(seed)
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.append((u, v))
    return Graph.from_edges(n, edges)


def flower_snark(t: int) -> Graph:
    """Flower snark J_t for odd ``t >= 5``.

    Block ``i`` has a centre ``a_i = 4i`` joined to ``b_i = 4i+1``,
    ``c_i = 4i+2`` and ``d_i = 4i+3``. The ``b`` vertices form a t-cycle and
    the sequence ``c_0..c_{t-1}, d_0..d_{t-1}`` forms a single 2t-cycle.
    """
    if t < 5 or t % 2 == 0:
        raise ValueError(f"flower snark needs an odd t >= 5, got {t}")
    a = lambda i: 4 * i
    b = lambda i: 4 * i + 1
    c = lambda i: 4 * i + 2
    d = lambda i: 4 * i + 3
    edges = []
    for i in range(t):
        edges += [(a(i), b(i)), (a(i), c(i)), (a(i), d(i))]
        edges.append((b(i), b((i + 1) % t)))
    outer = [c(i) for i in range(t)] + [d(i) for i in range(t)]
    for j in range(2 * t):
        edges.append((outer[j], outer[(j + 1) % (2 * t)]))
    return Graph.from_edges(4 * t, edges)


def bfs_distances(g: Graph, source: int) -> list[float]:
    if not 0 <= source < g.n:
        raise ValueError(f"source {source} out of range")
    dist: list[float] = [INF] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if dist[w] == INF:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def multi_source_distances(g: Graph, sources_mask: int) -> list[float]:
    """Hop distance from each vertex to the nearest vertex of ``sources_mask``."""
    dist: list[float] = [INF] * g.n
    frontier = sources_mask
    seen = sources_mask
    level = 0
    nbr = g.nbr_masks
    while frontier:
        nxt = 0
        m = frontier
        while m:
            low = m & -m
            v = low.bit_length() - 1
            dist[v] = level
            nxt |= nbr[v]
            m ^= low
        frontier = nxt & ~seen
        seen |= frontier
        level += 1
    return dist


def component_masks(g: Graph, restriction: int) -> list[int]:
    """Connected components of the subgraph induced by ``restriction`` as bitmasks,
    ordered by smallest member."""
    nbr = g.nbr_masks
    out = []
    remaining = restriction
    while remaining:
        seed = remaining & -remaining
        comp = seed
        frontier = seed
        while frontier:
            nxt = 0
            m = frontier
            while m:
                low = m & -m
                nxt |= nbr[low.bit_length() - 1]
                m ^= low
            frontier = nxt & restriction & ~comp
            comp |= frontier
        out.append(comp)
        remaining &= ~comp
    return out


def components(g: Graph, restriction: Iterable[int]) -> list[frozenset[int]]:
    mask = _checked_mask(g, restriction)
    return [frozenset(bit_indices(c)) for c in component_masks(g, mask)]


def is_dominating(g: Graph, s: Iterable[int]) -> bool:
    covered = 0
    closed = g.closed_masks
    for v in bit_indices(_checked_mask(g, s)):
        covered |= closed[v]
    return covered == g.full_mask


def _extend_induced(nbr: Sequence[int], avail: int, path: int, end: int, remaining: int) -> bool:
    """Can the induced path ``path`` (one free end at ``end``) grow by ``remaining``
    vertices drawn from ``avail``? A new vertex may touch only the current end."""
    if remaining == 0:
        return True
    end_bit = 1 << end
    cand = nbr[end] & avail & ~path
    while cand:
        low = cand & -cand
        w = low.bit_length() - 1
        cand ^= low
        if nbr[w] & path == end_bit and _extend_induced(nbr, avail, path | low, w, remaining - 1):
            return True
    return False


def has_induced_path(g: Graph, marked: int, k: int) -> bool:
    """Bitmask form of :func:`contains_induced_k_path`."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if marked.bit_count() < k:
        return False
    nbr = g.nbr_masks
    for v in bit_indices(marked):
        if _extend_induced(nbr, marked, 1 << v, v, k - 1):
            return True
    return False


def has_induced_path_through(g: Graph, marked: int, k: int, v: int) -> bool:
    """Is there an induced k-vertex path inside ``marked`` that uses ``v``?

    The path is grown rightwards from ``v`` first; at every length the
    leftward extension from ``v`` is tried for the vertices still missing.
    """
    if marked.bit_count() < k:
        return False
    nbr = g.nbr_masks

    def right(path: int, end: int, length: int) -> bool:
        if length == k:
            return True
        # v stays the left end; when the path is just {v} both ends coincide.
        if left(path, v, end, k - length):
            return True
        end_bit = 1 << end
        cand = nbr[end] & marked & ~path
        while cand:
            low = cand & -cand
            w = low.bit_length() - 1
            cand ^= low
            if nbr[w] & path == end_bit and right(path | low, w, length + 1):
                return True
        return False

    def left(path: int, lend: int, rend: int, remaining: int) -> bool:
        if remaining == 0:
            return True
        lbit = 1 << lend
        cand = nbr[lend] & marked & ~path
        while cand:
            low = cand & -cand
            w = low.bit_length() - 1
            cand ^= low
            if nbr[w] & path == lbit and left(path | low, w, rend, remaining - 1):
                return True
        return False

    return right(1 << v, v, 1)


def contains_induced_k_path(g: Graph, marked: Iterable[int], k: int) -> bool:
    return has_induced_path(g, _checked_mask(g, marked), k)


def _checked_mask(g: Graph, vertices: Iterable[int] | int) -> int:
    if isinstance(vertices, int):
        mask = vertices
    else:
        mask = 0
        for v in vertices:
            if not 0 <= v < g.n:
                raise ValueError(f"vertex {v} out of range for n={g.n}")
            mask |= 1 << v
    if mask >> g.n:
        raise ValueError("vertex set has members outside the graph")
    return mask
