"""Multiball vectors, ball-piece intersections, pivot patterns, and growth audits.

A multiball vector records, per vertex, the first concentric ball (base radius
plus shift) containing it. Restrictions of these vectors to piece boundaries
are the deduplication keys for all shared per-piece precomputation: equal
restrictions guarantee equal derived tables.

Pivot patterns are boundary-offset vectors clamped to a window around a pivot
boundary vertex; inside an unweighted piece with at most r edges every finite
piece distance is at most r, which is what makes the clamped window lossless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynstrings import StringId, StringStore
from .graph import INF, DiGraph, sssp, sssp_from_sources
from .rdivision import Piece, RDivision


@dataclass(frozen=True)
class ShiftSet:
    """Strictly increasing finite shifts, implicitly bracketed by -inf and +inf.

    With deltas (d1, .., d_{l-1}) the index codomain is 1..l; index l means
    "only the infinite shift contains it".
    """

    deltas: tuple[float, ...]

    def __post_init__(self):
        for a, b in zip(self.deltas, self.deltas[1:]):
            if not a < b:
                raise ValueError("shifts must be strictly increasing")

    @property
    def l(self) -> int:
        return len(self.deltas) + 1


@dataclass(frozen=True)
class MultiballVector:
    center: int
    base_radius: float
    shifts: ShiftSet
    values: tuple[int, ...]    # y_u in [1..l], indexed by vertex id


def multiball_from_dists(center: int, dists, base: float, shifts: ShiftSet) -> MultiballVector:
    """Assemble the multiball vector given precomputed distances from center."""
    l = shifts.l
    values = []
    for d in dists:
        y = l
        for i, delta in enumerate(shifts.deltas, start=1):
            if d <= base + delta:
                y = i
                break
        values.append(y)
    return MultiballVector(center=center, base_radius=base, shifts=shifts, values=tuple(values))


def multiball_vector(g: DiGraph, v: int, base: float, shifts: ShiftSet) -> MultiballVector:
    """One single-source run from v, then threshold against base + shifts."""
    return multiball_from_dists(v, sssp(g, v), base, shifts)


def restrict(mv: MultiballVector, s) -> tuple[int, ...]:
    """The vector's values listed in the order of the given vertices."""
    return tuple(mv.values[u] for u in s)


def piece_supersource_distances(p: Piece, pg: DiGraph, boundary_dists: dict[int, float]) -> dict[int, float]:
    """Per piece vertex v: min over boundary b of boundary_dists[b] + d_P(b, v).

    When boundary_dists[b] = d_G(u, b) for an external source u, this equals
    d_G(u, v) for every v in the piece, because a shortest path into the piece
    passes through some last boundary vertex.
    """
    sources = {b: d for b, d in boundary_dists.items() if d != INF}
    if not sources:
        return {v: INF for v in p.vertices}
    dist = sssp_from_sources(pg, sources)
    return {v: dist[v] for v in p.vertices}


def ball_piece_intersection(p: Piece, pg: DiGraph, boundary_dists: dict[int, float], q: float) -> set[int]:
    """The radius-q ball of the external source, intersected with the piece."""
    ssd = piece_supersource_distances(p, pg, boundary_dists)
    return {v for v, d in ssd.items() if d <= q}


def pivot_indices(sorted_dists: list[float], r: int) -> list[int]:
    """1-based pivot positions over distances sorted ascending.

    Position 1 is always a pivot; position i is a pivot iff the previous pivot
    j satisfies d[j] <= d[i] - r. Infinite distances never become pivots.
    """
    pivots: list[int] = []
    last = None
    for i, d in enumerate(sorted_dists, start=1):
        if d == INF:
            break
        if last is None or sorted_dists[last - 1] <= d - r:
            pivots.append(i)
            last = i
    return pivots


# Pattern alphabet: clamped offset v in [-r, cap] encodes as v + r; the next
# two codes are the +inf and -inf sentinels (-inf is reserved, unused here).
def pattern_alphabet_size(r: int, cap: int) -> int:
    return cap + r + 3


def _encode(v: float, r: int, cap: int) -> int:
    if v == INF:
        return cap + r + 1
    return int(v) + r


def pattern_symbol_value(sym: int, r: int, cap: int) -> float:
    """Inverse of the offset encoding; the +inf sentinel decodes to inf."""
    if sym == cap + r + 1:
        return INF
    if sym == cap + r + 2:
        return -INF
    return sym - r


@dataclass
class ProxyPatternSet:
    """Per-pivot pattern ids for one (source, piece) boundary-distance profile."""

    pivots: list[int]                       # 1-based positions in sorted order
    pattern_ids: list[StringId]             # one per pivot, coordinates in piece boundary order
    sorted_boundary: list[int]              # boundary vertices sorted by (distance, vertex id)
    substitutions: int                      # total substitution count, for audits


def sort_boundary(boundary, dists: dict[int, float]) -> list[int]:
    """Boundary order used everywhere: ascending distance, ties by vertex id."""
    return sorted(boundary, key=lambda b: (dists[b], b))


def proxy_patterns(
    p: Piece,
    store: StringStore,
    dists: dict[int, float],
    r: int,
    cap: int | None = None,
) -> ProxyPatternSet:
    """Build the clamped offset pattern for every pivot via substitution chains.

    The coordinate for boundary vertex b_t (position t in sorted order) under
    pivot pi_i is max(-r, d_t - d_pi) while t precedes the next pivot and
    min(cap, d_t - d_pi) after it. Chains start from the all-cap sentinel;
    each coordinate changes a bounded number of times across the whole chain.
    Pattern strings are laid out in piece boundary order (ascending vertex id)
    so equal patterns from different sources collide independently of their
    sorted orders.
    """
    if cap is None:
        cap = r
    k = len(p.boundary)
    order = sort_boundary(p.boundary, dists)
    sorted_d = [dists[b] for b in order]
    pivots = pivot_indices(sorted_d, r)
    if not pivots:
        return ProxyPatternSet(pivots=[], pattern_ids=[], sorted_boundary=order, substitutions=0)

    sentinel = store.insert_explicit([cap + r] * k)
    subs = 0
    current = sentinel
    symbols = [cap + r] * k
    # infinite coordinates once, then never again
    for t, d in enumerate(sorted_d, start=1):
        if d == INF:
            pos = p.boundary_index[order[t - 1]]
            current = store.insert_substitution(current, pos, cap + r + 1)
            symbols[pos] = cap + r + 1
            subs += 1

    pattern_ids = []
    bounds = pivots + [k + 1]
    for idx, pi in enumerate(pivots):
        d_pi = sorted_d[pi - 1]
        nxt = bounds[idx + 1]
        for t in range(1, k + 1):
            d_t = sorted_d[t - 1]
            if d_t == INF:
                continue
            off = d_t - d_pi
            val = max(-r, off) if t < nxt else min(cap, off)
            sym = _encode(val, r, cap)
            pos = p.boundary_index[order[t - 1]]
            if symbols[pos] != sym:
                current = store.insert_substitution(current, pos, sym)
                symbols[pos] = sym
                subs += 1
        pattern_ids.append(current)
    return ProxyPatternSet(pivots=pivots, pattern_ids=pattern_ids, sorted_boundary=order, substitutions=subs)


@dataclass
class PatternBalls:
    """Nested ball-piece intersections decoded from one pivot pattern.

    ``per_position`` maps each in-window boundary position (piece boundary
    order) to the id of the ball whose radius is that vertex's distance.
    ``chain`` lists the distinct ball ids smallest-first; ``members_of`` the
    decoded vertex sets. ``window`` holds (offset, position) pairs in the
    rank order of the window. ``next_members`` is the non-boundary part of
    the first ball beyond the window, or None when the pattern has no finite
    coordinate at or past the clamp radius (last window of its source).
    """

    per_position: dict[int, StringId]
    chain: list[StringId]
    members_of: dict[StringId, frozenset[int]]
    window: list[tuple[float, int]]
    next_members: frozenset[int] | None


def balls_from_pattern(
    p: Piece,
    pg: DiGraph,
    store: StringStore,
    pattern: StringId,
    ball_store: StringStore,
    r: int,
    cap: int | None = None,
) -> PatternBalls:
    """Decode a pivot pattern into its window of nested ball intersections.

    Membership rule: a piece vertex is in the ball of window vertex b_l iff it
    is piece-reachable from a clamped (value -r) boundary vertex, or its
    minimum over exact-offset boundary vertices of offset + d_P is at most
    b_l's offset. One supersource run decides all balls of the window at once;
    ids along the nested chain are built by flipping each membership bit at
    most once.
    """
    if cap is None:
        cap = r
    syms = store.string_of(pattern)
    offsets: dict[int, float] = {}
    for pos, sym in enumerate(syms):
        offsets[pos] = pattern_symbol_value(sym, r, cap)
    # exact coordinates (strictly inside the clamp range) act as supersource
    # entries; clamped -r coordinates certify membership in every window ball
    exact_sources = {}
    wide_sources = {}
    pre_sources = {}
    for pos, off in offsets.items():
        b = p.boundary[pos]
        if off == -r:
            pre_sources[b] = 0.0
        elif -r < off < r:
            exact_sources[b] = float(off)
            wide_sources[b] = float(off)
        elif r <= off < cap:
            wide_sources[b] = float(off)
    minoff = sssp_from_sources(pg, exact_sources) if exact_sources else None
    prereach = sssp_from_sources(pg, pre_sources) if pre_sources else None

    window = [(off, p.boundary[pos], pos) for pos, off in offsets.items() if 0 <= off < r]
    window.sort()
    vlist = p.vertices
    vidx = p.vertex_index

    def in_ball(v: int, radius: float) -> bool:
        if prereach is not None and prereach[v] != INF:
            return True
        return minoff is not None and minoff[v] <= radius

    # the first ball past the window, determined by the smallest coordinate at
    # or beyond the clamp radius; only its non-boundary part is well-defined
    # when that coordinate is itself clamped
    next_offs = [off for off in offsets.values() if r <= off != INF]
    next_members: frozenset[int] | None = None
    boundary_set = set(p.boundary)
    if next_offs:
        target = min(next_offs)
        if target < cap:
            wmin = sssp_from_sources(pg, wide_sources) if wide_sources else None
            next_members = frozenset(
                v
                for v in p.vertices
                if v not in boundary_set
                and ((prereach is not None and prereach[v] != INF) or (wmin is not None and wmin[v] <= target))
            )
        else:
            next_members = frozenset(
                v
                for v in p.vertices
                if v not in boundary_set
                and ((prereach is not None and prereach[v] != INF) or (minoff is not None and minoff[v] != INF))
            )

    per_position: dict[int, StringId] = {}
    chain: list[StringId] = []
    members_of: dict[StringId, frozenset[int]] = {}
    window_ranks = [(off, pos) for off, b, pos in window]
    if not window:
        return PatternBalls(
            per_position=per_position,
            chain=chain,
            members_of=members_of,
            window=window_ranks,
            next_members=next_members,
        )

    bits = [1 if in_ball(v, window[0][0]) else 0 for v in vlist]
    sid = ball_store.insert_explicit(bits)
    members = frozenset(v for v, bit in zip(vlist, bits) if bit)
    chain.append(sid)
    members_of[sid] = members
    per_position[window[0][2]] = sid
    prev_radius = window[0][0]
    for off, b, pos in window[1:]:
        if off != prev_radius:
            new_members = set(members)
            for v in vlist:
                i = vidx[v]
                if not bits[i] and in_ball(v, off):
                    sid = ball_store.insert_substitution(sid, i, 1)
                    bits[i] = 1
                    new_members.add(v)
            members = frozenset(new_members)
            if sid not in members_of:
                members_of[sid] = members
            if not chain or chain[-1] != sid:
                chain.append(sid)
            prev_radius = off
        per_position[pos] = sid
    return PatternBalls(
        per_position=per_position,
        chain=chain,
        members_of=members_of,
        window=window_ranks,
        next_members=next_members,
    )


def count_patterns_audit(
    g: DiGraph,
    rd: RDivision,
    shifts: ShiftSet,
    sources,
) -> dict:
    """Distinct restricted multiball vectors per piece over sampled sources.

    For each sampled source one single-source run is taken; per piece, every
    distinct finite boundary distance serves as a base radius and the
    restriction of the resulting multiball vector to the piece boundary is
    collected. Reports per-piece counts and a fitted log-log slope of count
    against boundary size times the number of shifts.
    """
    per_piece: dict[int, set] = {p.piece_id: set() for p in rd.pieces}
    l = shifts.l
    for u in sources:
        dists = sssp(g, u)
        for p in rd.pieces:
            if not p.boundary:
                continue
            bdists = sorted({dists[b] for b in p.boundary if dists[b] != INF})
            if not bdists:
                bdists = [0.0]
            for base in bdists:
                mv = multiball_from_dists(u, dists, base, shifts)
                per_piece[p.piece_id].add(restrict(mv, p.boundary))
    rows = []
    xs, ys = [], []
    for p in rd.pieces:
        count = len(per_piece[p.piece_id])
        rows.append({"piece_id": p.piece_id, "boundary": len(p.boundary), "count": count})
        if p.boundary and count:
            xs.append(len(p.boundary) * l)
            ys.append(count)
    slope = fit_loglog_slope(xs, ys)
    return {"per_piece": rows, "slope": slope, "l": l}


def fit_loglog_slope(xs, ys) -> float | None:
    """Least-squares slope of log y against log x; None if under-determined."""
    pts = [(x, y) for x, y in zip(xs, ys) if x > 0 and y > 0]
    if len(pts) < 2 or len({x for x, _ in pts}) < 2:
        return None
    lx = np.log([x for x, _ in pts])
    ly = np.log([y for _, y in pts])
    return float(np.polyfit(lx, ly, 1)[0])
