"""Edge partition of a digraph into pieces with small shared boundaries.

Pieces are edge-induced subgraphs found by recursive bisection: BFS-level
separators on the underlying undirected graph, recursing until each region
holds at most r edges. Boundary vertices are those appearing in two or more
pieces. On grids and planar meshes the per-piece boundary grows like sqrt(r);
that growth is audited empirically, not proven.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field

from .graph import DiGraph, Edge


@dataclass(frozen=True)
class Piece:
    piece_id: int
    edge_ids: frozenset[int]
    vertices: tuple[int, ...]          # ascending
    boundary: tuple[int, ...]          # ascending, subset of vertices
    vertex_index: dict[int, int] = field(init=False, repr=False, compare=False)
    boundary_index: dict[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertex_index", {v: i for i, v in enumerate(self.vertices)})
        object.__setattr__(self, "boundary_index", {b: i for i, b in enumerate(self.boundary)})


@dataclass(frozen=True)
class RDivision:
    pieces: tuple[Piece, ...]
    r: int
    vertex_to_pieces: dict[int, tuple[int, ...]]
    boundary_union: tuple[int, ...]    # ascending


def _undirected_adj(n: int, edges: list[Edge]) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {}
    for e in edges:
        adj.setdefault(e.tail, []).append(e.head)
        adj.setdefault(e.head, []).append(e.tail)
    return adj


def _bisect_edges(edges: list[Edge], rng: random.Random) -> tuple[list[Edge], list[Edge]]:
    """Split an edge region in two along a BFS level of its undirected graph."""
    adj = _undirected_adj(0, edges)
    verts = sorted(adj)
    root = verts[rng.randrange(len(verts))]
    level = {root: 0}
    order = deque([root])
    while order:
        u = order.popleft()
        for v in adj[u]:
            if v not in level:
                level[v] = level[u] + 1
                order.append(v)
    if len(level) < len(verts):
        # region disconnected despite earlier component split (parallel arcs
        # only): split by components of the undirected graph
        comp = set(level)
        a = [e for e in edges if e.tail in comp]
        b = [e for e in edges if e.tail not in comp]
        if a and b:
            return a, b
    max_level = max(level.values())
    if max_level == 0:
        half = len(edges) // 2
        return edges[:half], edges[half:]
    # choose the cut level: smallest level set among those splitting the
    # vertices roughly in half, falling back to the most balanced cut
    counts = [0] * (max_level + 1)
    for v in verts:
        counts[level[v]] += 1
    total = len(verts)
    best = None
    prefix = 0
    for lv in range(max_level):
        prefix += counts[lv]
        balanced = total / 4 <= prefix <= 3 * total / 4
        key = (0 if balanced else 1, counts[lv] if balanced else abs(prefix - total / 2), lv)
        if best is None or key < best[0]:
            best = (key, lv)
    cut = best[1]
    a = [e for e in edges if max(level[e.tail], level[e.head]) <= cut]
    b = [e for e in edges if max(level[e.tail], level[e.head]) > cut]
    if not a or not b:
        half = len(edges) // 2
        return edges[:half], edges[half:]
    return a, b


def _partition(edges: list[Edge], r: int, rng: random.Random, out: list[list[Edge]]) -> None:
    if len(edges) <= r:
        out.append(edges)
        return
    # split into undirected connected components first
    adj = _undirected_adj(0, edges)
    seen: set[int] = set()
    comps: list[set[int]] = []
    for v in adj:
        if v in seen:
            continue
        comp = {v}
        q = deque([v])
        seen.add(v)
        while q:
            u = q.popleft()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    q.append(w)
        comps.append(comp)
    if len(comps) > 1:
        for comp in comps:
            _partition([e for e in edges if e.tail in comp], r, rng, out)
        return
    a, b = _bisect_edges(edges, rng)
    _partition(a, r, rng, out)
    _partition(b, r, rng, out)


def build_r_division(g: DiGraph, r: int, seed: int = 0) -> RDivision:
    """Partition g's edges into pieces of at most r edges each.

    Deterministic for a fixed seed. Vertices on no edge become singleton
    pieces with empty boundary. Boundary order within a piece is ascending
    vertex id; downstream pattern tables index into this order.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    rng = random.Random(seed)
    regions: list[list[Edge]] = []
    if g.edges:
        _partition(list(g.edges), r, rng, regions)
    regions.sort(key=lambda es: min(e.edge_id for e in es))

    vert_sets = []
    for es in regions:
        vs = set()
        for e in es:
            vs.add(e.tail)
            vs.add(e.head)
        vert_sets.append(vs)
    covered = set().union(*vert_sets) if vert_sets else set()
    for v in range(g.n):
        if v not in covered:
            regions.append([])
            vert_sets.append({v})

    multiplicity: dict[int, int] = {}
    for vs in vert_sets:
        for v in vs:
            multiplicity[v] = multiplicity.get(v, 0) + 1

    pieces = []
    vertex_to_pieces: dict[int, list[int]] = {}
    for pid, (es, vs) in enumerate(zip(regions, vert_sets)):
        boundary = tuple(sorted(v for v in vs if multiplicity[v] > 1))
        pieces.append(
            Piece(
                piece_id=pid,
                edge_ids=frozenset(e.edge_id for e in es),
                vertices=tuple(sorted(vs)),
                boundary=boundary,
            )
        )
        for v in vs:
            vertex_to_pieces.setdefault(v, []).append(pid)

    boundary_union = tuple(sorted(v for v, c in multiplicity.items() if c > 1))
    return RDivision(
        pieces=tuple(pieces),
        r=r,
        vertex_to_pieces={v: tuple(ps) for v, ps in vertex_to_pieces.items()},
        boundary_union=boundary_union,
    )


def piece_graph(g: DiGraph, p: Piece) -> DiGraph:
    """The edge-induced subgraph of a piece, on g's vertex numbering."""
    edges = tuple(e for e in g.edges if e.edge_id in p.edge_ids)
    return DiGraph(n=g.n, edges=edges, weighted=g.weighted)


def validate_r_division(g: DiGraph, rd: RDivision) -> dict:
    """Check the partition and boundary invariants; report measured maxima."""
    seen_edges: set[int] = set()
    cover_ok = True
    for p in rd.pieces:
        if p.edge_ids & seen_edges:
            cover_ok = False
        seen_edges |= p.edge_ids
        induced = set()
        for eid in p.edge_ids:
            e = g.edges[eid]
            induced.add(e.tail)
            induced.add(e.head)
        if p.edge_ids and induced != set(p.vertices):
            cover_ok = False
        if not set(p.boundary) <= set(p.vertices):
            cover_ok = False
    if seen_edges != {e.edge_id for e in g.edges}:
        cover_ok = False
    # boundary = vertices shared by >= 2 pieces
    mult: dict[int, int] = {}
    for p in rd.pieces:
        for v in p.vertices:
            mult[v] = mult.get(v, 0) + 1
    for p in rd.pieces:
        want = tuple(sorted(v for v in p.vertices if mult.get(v, 0) > 1))
        if want != p.boundary:
            cover_ok = False
    all_verts = set()
    for p in rd.pieces:
        all_verts |= set(p.vertices)
    if all_verts != set(range(g.n)):
        cover_ok = False
    return {
        "piece_count": len(rd.pieces),
        "max_edges": max((len(p.edge_ids) for p in rd.pieces), default=0),
        "max_boundary": max((len(p.boundary) for p in rd.pieces), default=0),
        "cover_ok": cover_ok,
    }
