"""Directed graphs, brute-force reference oracles, and seeded test-graph generators.

Distances are floats with ``math.inf`` for unreachable; arithmetic saturates
(finite + inf = inf) and no finite sentinel is ever used for infinity.
"""

from __future__ import annotations

import heapq
import math
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import numpy as np

INF = math.inf


class Edge(NamedTuple):
    tail: int
    head: int
    weight: float
    edge_id: int


class GraphFormatError(ValueError):
    """Raised for malformed graph documents."""


@dataclass(frozen=True)
class DiGraph:
    """Immutable digraph with optional strictly positive real weights.

    Unweighted graphs reuse the weighted representation with all weights 1.
    Parallel edges are permitted; the minimum weight wins in distances.
    """

    n: int
    edges: tuple[Edge, ...]
    weighted: bool = False
    _adj: tuple[tuple[Edge, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        adj: list[list[Edge]] = [[] for _ in range(self.n)]
        for e in self.edges:
            if not (0 <= e.tail < self.n and 0 <= e.head < self.n):
                raise GraphFormatError(f"vertex index out of range in edge {e}")
            if e.tail == e.head:
                raise GraphFormatError(f"self-loop at vertex {e.tail}")
            if e.weight <= 0:
                raise GraphFormatError(f"non-positive weight on edge {e}")
            adj[e.tail].append(e)
        object.__setattr__(self, "_adj", tuple(tuple(a) for a in adj))

    @property
    def m(self) -> int:
        return len(self.edges)

    def out_edges(self, v: int) -> tuple[Edge, ...]:
        return self._adj[v]


def make_graph(n: int, arcs: Iterable[tuple[int, int] | tuple[int, int, float]], weighted: bool = False) -> DiGraph:
    """Build a DiGraph from (tail, head[, weight]) tuples; edge_id is list order."""
    edges = []
    for i, a in enumerate(arcs):
        if len(a) == 2:
            t, h = a
            w = 1.0
        else:
            t, h, w = a
        edges.append(Edge(t, h, float(w), i))
    return DiGraph(n=n, edges=tuple(edges), weighted=weighted)


def load_graph(text: str) -> DiGraph:
    """Parse the edge-list document format.

    First non-comment line is ``n m`` or ``n m w``; then m lines ``tail head``
    or ``tail head weight``. Lines starting with ``#`` are comments.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise GraphFormatError("empty document")
    header = lines[0].split()
    if len(header) not in (2, 3) or (len(header) == 3 and header[2] != "w"):
        raise GraphFormatError(f"bad header line: {lines[0]!r}")
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError as exc:
        raise GraphFormatError(f"bad header line: {lines[0]!r}") from exc
    weighted = len(header) == 3
    if len(lines) - 1 != m:
        raise GraphFormatError(f"expected {m} edge lines, got {len(lines) - 1}")
    edges = []
    for i, ln in enumerate(lines[1:]):
        parts = ln.split()
        want = 3 if weighted else 2
        if len(parts) != want:
            raise GraphFormatError(f"bad edge line: {ln!r}")
        try:
            t, h = int(parts[0]), int(parts[1])
            w = float(parts[2]) if weighted else 1.0
        except ValueError as exc:
            raise GraphFormatError(f"bad edge line: {ln!r}") from exc
        if w <= 0:
            raise GraphFormatError(f"non-positive weight on line: {ln!r}")
        edges.append(Edge(t, h, w, i))
    return DiGraph(n=n, edges=tuple(edges), weighted=weighted)


def dump_graph(g: DiGraph) -> str:
    """Inverse of load_graph."""
    head = f"{g.n} {g.m} w" if g.weighted else f"{g.n} {g.m}"
    out = [head]
    for e in g.edges:
        if g.weighted:
            out.append(f"{e.tail} {e.head} {e.weight!r}")
        else:
            out.append(f"{e.tail} {e.head}")
    return "\n".join(out) + "\n"


def reverse(g: DiGraph) -> DiGraph:
    """Reverse every edge, preserving weights and edge ids."""
    edges = tuple(Edge(e.head, e.tail, e.weight, e.edge_id) for e in g.edges)
    return DiGraph(n=g.n, edges=edges, weighted=g.weighted)


def sssp(g: DiGraph, s: int) -> list[float]:
    """Single-source distances: BFS when unweighted, Dijkstra otherwise."""
    if not g.weighted:
        dist = [INF] * g.n
        dist[s] = 0.0
        q = deque([s])
        while q:
            u = q.popleft()
            du = dist[u]
            for e in g.out_edges(u):
                if dist[e.head] == INF:
                    dist[e.head] = du + 1.0
                    q.append(e.head)
        return dist
    return sssp_from_sources(g, {s: 0.0})


def sssp_from_sources(g: DiGraph, sources: dict[int, float]) -> list[float]:
    """Dijkstra from a supersource attached to ``sources`` with the given offsets."""
    dist = [INF] * g.n
    heap = []
    for v, off in sources.items():
        if off < dist[v]:
            dist[v] = off
            heapq.heappush(heap, (off, v))
    while heap:
        du, u = heapq.heappop(heap)
        if du > dist[u]:
            continue
        for e in g.out_edges(u):
            nd = du + e.weight
            if nd < dist[e.head]:
                dist[e.head] = nd
                heapq.heappush(heap, (nd, e.head))
    return dist


def apsp_reference(g: DiGraph) -> list[list[float]]:
    """All-pairs distances by n single-source runs; the ground truth for tests."""
    return [sssp(g, s) for s in range(g.n)]


def bottleneck_apsp_reference(g: DiGraph) -> list[list[float]]:
    """All-pairs bottleneck distances (min over paths of max edge weight).

    Max-min transitive closure in the style of Floyd-Warshall, vectorized.
    The diagonal is 0 by the empty-path convention.
    """
    n = g.n
    beta = np.full((n, n), INF)
    for e in g.edges:
        if e.weight < beta[e.tail, e.head]:
            beta[e.tail, e.head] = e.weight
    np.fill_diagonal(beta, 0.0)
    for k in range(n):
        via = np.maximum(beta[:, k][:, None], beta[k, :][None, :])
        np.minimum(beta, via, out=beta)
    return beta.tolist()


def reachability_reference(g: DiGraph) -> list[list[bool]]:
    """All-pairs reachability by n BFS runs."""
    out = []
    for s in range(g.n):
        seen = [False] * g.n
        seen[s] = True
        q = deque([s])
        while q:
            u = q.popleft()
            for e in g.out_edges(u):
                if not seen[e.head]:
                    seen[e.head] = True
                    q.append(e.head)
        out.append(seen)
    return out


def is_strongly_connected(g: DiGraph) -> bool:
    """True iff every vertex reaches every other; two BFS runs from vertex 0."""
    if g.n <= 1:
        return True

    def full_reach(graph: DiGraph) -> bool:
        seen = [False] * graph.n
        seen[0] = True
        q = deque([0])
        count = 1
        while q:
            u = q.popleft()
            for e in graph.out_edges(u):
                if not seen[e.head]:
                    seen[e.head] = True
                    count += 1
                    q.append(e.head)
        return count == graph.n

    return full_reach(g) and full_reach(reverse(g))


def _dyadic_weights(rng: random.Random, count: int, lo: float, hi: float) -> list[float]:
    # quarter-integer weights: exactly representable, tie-prone on purpose
    lo_q, hi_q = int(lo * 4), int(hi * 4)
    return [rng.randint(lo_q, hi_q) / 4 for _ in range(count)]


def generate_grid(
    width: int,
    height: int,
    seed: int = 0,
    orientation: str = "bidirected",
    weighted: bool = False,
    weight_range: tuple[float, float] = (1.0, 10.0),
) -> DiGraph:
    """Seeded planar grid; vertex (x, y) has index y*width + x.

    ``bidirected`` emits every grid edge in both directions; ``random`` orients
    each grid edge one way chosen by the seed. Weights, when requested, are
    seeded quarter-integers in ``weight_range`` (exact binary representation).
    """
    if width < 1 or height < 1:
        raise ValueError("grid dimensions must be >= 1")
    if orientation not in ("bidirected", "random"):
        raise ValueError(f"unknown orientation scheme {orientation!r}")
    rng = random.Random(seed)
    undirected = []
    for y in range(height):
        for x in range(width):
            v = y * width + x
            if x + 1 < width:
                undirected.append((v, v + 1))
            if y + 1 < height:
                undirected.append((v, v + width))
    arcs: list[tuple[int, int]] = []
    for u, v in undirected:
        if orientation == "bidirected":
            arcs.append((u, v))
            arcs.append((v, u))
        else:
            arcs.append((u, v) if rng.random() < 0.5 else (v, u))
    if weighted:
        ws = _dyadic_weights(rng, len(arcs), *weight_range)
        return make_graph(width * height, [(t, h, w) for (t, h), w in zip(arcs, ws)], weighted=True)
    return make_graph(width * height, arcs)


def generate_path(k: int, bidirected: bool = True, weighted: bool = False, seed: int = 0) -> DiGraph:
    """Path on k vertices; directed 0->1->... or bidirected."""
    arcs: list[tuple[int, int]] = []
    for i in range(k - 1):
        arcs.append((i, i + 1))
        if bidirected:
            arcs.append((i + 1, i))
    if weighted:
        rng = random.Random(seed)
        ws = _dyadic_weights(rng, len(arcs), 1.0, 10.0)
        return make_graph(k, [(t, h, w) for (t, h), w in zip(arcs, ws)], weighted=True)
    return make_graph(k, arcs)


def generate_cycle(k: int, bidirected: bool = False, weighted: bool = False, seed: int = 0) -> DiGraph:
    """Cycle on k vertices; directed by default."""
    arcs: list[tuple[int, int]] = []
    for i in range(k):
        j = (i + 1) % k
        arcs.append((i, j))
        if bidirected:
            arcs.append((j, i))
    if weighted:
        rng = random.Random(seed)
        ws = _dyadic_weights(rng, len(arcs), 1.0, 10.0)
        return make_graph(k, [(t, h, w) for (t, h), w in zip(arcs, ws)], weighted=True)
    return make_graph(k, arcs)
