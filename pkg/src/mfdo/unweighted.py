"""Exact unweighted distance oracle with pattern-shared ball tables.

Queries for a target inside a piece not containing the source binary-search
the piece boundary, sorted by source distance, for the largest rank whose
source ball misses the target; the answer combines that boundary distance
with a precomputed multi-source distance row inside the piece.

Ball tables are produced exclusively through pivot patterns: equal patterns
share decoded balls, distance rows, and (for the distance-sum computation)
cached per-pattern partial sums. A debug flag switches to a naive per-source
ball computation for differential testing; both paths must produce identical
tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .dynstrings import StringId, StringStore
from .graph import INF, DiGraph, is_strongly_connected, reverse, sssp, sssp_from_sources
from .patterns import (
    PatternBalls,
    balls_from_pattern,
    pattern_alphabet_size,
    piece_supersource_distances,
    proxy_patterns,
    sort_boundary,
)
from .rdivision import RDivision, build_r_division, piece_graph


@dataclass
class SourceRef:
    """Per (external source, piece): sorted boundary and per-rank ball ids."""

    sorted_boundary: list[int]          # ascending (distance, vertex id)
    sorted_dists: list[float]
    rank_ball: list[StringId]           # one per finite rank
    pivots: list[int]                   # 1-based positions into the sorted order
    pattern_ids: list[StringId]         # one per pivot


@dataclass
class PieceTables:
    piece: Piece
    pg: DiGraph
    pattern_store: StringStore
    ball_store: StringStore
    ball_members: dict[int, frozenset[int]] = field(default_factory=dict)   # ball token -> members
    ball_rows: dict[int, dict[int, float]] = field(default_factory=dict)    # ball token -> d_P(ball, v)
    ball_maxrow: dict[int, float] = field(default_factory=dict)             # max over interior vertices
    decoded: dict[int, PatternBalls] = field(default_factory=dict)          # pattern token -> decode
    sources: dict[int, SourceRef] = field(default_factory=dict)
    intra_dP: dict[int, dict[int, float]] = field(default_factory=dict)
    intra_dG: dict[int, dict[int, float]] = field(default_factory=dict)
    wiener_cache: dict[int, tuple[dict[int, int], float]] = field(default_factory=dict)
    pattern_hits: int = 0
    pattern_misses: int = 0


class UnweightedOracle:
    """Exact distance oracle for unweighted digraphs over an edge partition."""

    def __init__(self, g: DiGraph, r: int, seed: int = 0, naive_balls: bool = False,
                 rd: RDivision | None = None):
        if g.weighted:
            raise ValueError("unweighted oracle requires an unweighted graph")
        self.g = g
        self.r = r
        self.seed = seed
        self.naive_balls = naive_balls
        self.rd = rd if rd is not None else build_r_division(g, r, seed)
        self.cap = 2 * r    # wide clamp so distance sums can reuse patterns
        self._build()

    # -- construction ------------------------------------------------------

    def _build(self) -> None:
        g, rd, r = self.g, self.rd, self.r
        grev = reverse(g)
        self.to_boundary: dict[int, list[float]] = {b: sssp(grev, b) for b in rd.boundary_union}
        self.interior_piece: dict[int, int] = {}
        boundary_set = set(rd.boundary_union)
        for p in rd.pieces:
            for v in p.vertices:
                if v not in boundary_set:
                    self.interior_piece[v] = p.piece_id

        self.tables: dict[int, PieceTables] = {}
        for p in rd.pieces:
            pg = piece_graph(g, p)
            pt = PieceTables(
                piece=p,
                pg=pg,
                pattern_store=StringStore(pattern_alphabet_size(r, self.cap)),
                ball_store=StringStore(2),
            )
            self.tables[p.piece_id] = pt
            self._build_intra(pt)
            if p.boundary and len(p.vertices) > len(p.boundary):
                self._build_sources(pt)

    def _build_intra(self, pt: PieceTables) -> None:
        p, pg = pt.piece, pt.pg
        for u in p.vertices:
            dP = sssp(pg, u)
            offs = {b: self.to_boundary[b][u] for b in p.boundary}
            via = sssp_from_sources(pg, {b: d for b, d in offs.items() if d != INF}) if offs else None
            rowP, rowG = {}, {}
            for v in p.vertices:
                rowP[v] = dP[v]
                rowG[v] = dP[v] if via is None else min(dP[v], via[v])
            pt.intra_dP[u] = rowP
            pt.intra_dG[u] = rowG

    def _register_ball(self, pt: PieceTables, sid: StringId, members: frozenset[int]) -> None:
        tok = sid.token
        if tok in pt.ball_rows:
            return
        pt.ball_members[tok] = members
        row = sssp_from_sources(pt.pg, {v: 0.0 for v in members}) if members else None
        interior = [v for v in pt.piece.vertices if v not in pt.piece.boundary_index]
        rowd = {v: (row[v] if row is not None else INF) for v in pt.piece.vertices}
        pt.ball_rows[tok] = rowd
        pt.ball_maxrow[tok] = max((rowd[v] for v in interior), default=-INF)

    def _build_sources(self, pt: PieceTables) -> None:
        p = pt.piece
        pvs = set(p.vertices)
        for u in range(self.g.n):
            if u in pvs:
                continue
            dists = {b: self.to_boundary[b][u] for b in p.boundary}
            if self.naive_balls:
                ref = self._source_ref_naive(pt, u, dists)
            else:
                ref = self._source_ref_patterns(pt, dists)
            pt.sources[u] = ref

    def _source_ref_patterns(self, pt: PieceTables, dists: dict[int, float]) -> SourceRef:
        p = pt.piece
        pps = proxy_patterns(p, pt.pattern_store, dists, self.r, self.cap)
        for sid in pps.pattern_ids:
            if sid.token not in pt.decoded:
                pt.pattern_misses += 1
                pb = balls_from_pattern(p, pt.pg, pt.pattern_store, sid, pt.ball_store, self.r, self.cap)
                pt.decoded[sid.token] = pb
                for ball_sid in pb.chain:
                    self._register_ball(pt, ball_sid, pb.members_of[ball_sid])
            else:
                pt.pattern_hits += 1
        sorted_d = [dists[b] for b in pps.sorted_boundary]
        rank_ball: list[StringId] = []
        bounds = pps.pivots + [len(p.boundary) + 1]
        block = 0
        for t, d in enumerate(sorted_d, start=1):
            if d == INF:
                break
            while block + 1 < len(bounds) and t >= bounds[block + 1]:
                block += 1
            pb = pt.decoded[pps.pattern_ids[block].token]
            pos = p.boundary_index[pps.sorted_boundary[t - 1]]
            rank_ball.append(pb.per_position[pos])
        return SourceRef(
            sorted_boundary=pps.sorted_boundary,
            sorted_dists=sorted_d,
            rank_ball=rank_ball,
            pivots=pps.pivots,
            pattern_ids=pps.pattern_ids,
        )

    def _source_ref_naive(self, pt: PieceTables, u: int, dists: dict[int, float]) -> SourceRef:
        p = pt.piece
        order = sort_boundary(p.boundary, dists)
        sorted_d = [dists[b] for b in order]
        ssd = piece_supersource_distances(p, pt.pg, dists)
        rank_ball: list[StringId] = []
        for d in sorted_d:
            if d == INF:
                break
            bits = [1 if ssd[v] <= d else 0 for v in p.vertices]
            sid = pt.ball_store.insert_explicit(bits)
            members = frozenset(v for v, bit in zip(p.vertices, bits) if bit)
            self._register_ball(pt, sid, members)
            rank_ball.append(sid)
        return SourceRef(sorted_boundary=order, sorted_dists=sorted_d, rank_ball=rank_ball,
                         pivots=[], pattern_ids=[])

    # -- queries -----------------------------------------------------------

    def query_distance(self, u: int, v: int) -> float:
        if u == v:
            return 0.0
        if v in self.to_boundary:
            return self.to_boundary[v][u]
        pid = self.interior_piece[v]
        pt = self.tables[pid]
        if u in pt.intra_dG:
            return pt.intra_dG[u][v]
        if not pt.piece.boundary:
            return INF    # isolated component, unreachable from outside
        ref = pt.sources[u]
        f = len(ref.rank_ball)
        if f == 0:
            return INF
        # largest finite rank whose ball misses v; ranks past f contain it
        if v in pt.ball_members[ref.rank_ball[0].token]:
            return ref.sorted_dists[0]
        lo, hi = 0, f - 1    # invariant: v not in ball[lo]
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if v in pt.ball_members[ref.rank_ball[mid].token]:
                hi = mid - 1
            else:
                lo = mid
        tok = ref.rank_ball[lo].token
        return ref.sorted_dists[lo] + pt.ball_rows[tok][v]

    def eccentricities(self) -> list[float]:
        g = self.g
        ecc = [0.0] * g.n
        for u in range(g.n):
            best = 0.0
            for b, row in self.to_boundary.items():
                if u != b:
                    best = max(best, row[u])
            for pid in self.rd.vertex_to_pieces.get(u, ()):
                pt = self.tables[pid]
                for v, d in pt.intra_dG[u].items():
                    if v != u:
                        best = max(best, d)
            for pt in self.tables.values():
                if u in pt.intra_dG:
                    continue
                p = pt.piece
                if len(p.vertices) <= len(p.boundary):
                    continue    # no interior targets
                if not p.boundary:
                    best = INF    # isolated component u cannot reach
                    continue
                ref = pt.sources[u]
                if ref.sorted_dists[-1] == INF:
                    best = INF
                    continue
                tok = ref.rank_ball[-1].token
                best = max(best, ref.sorted_dists[-1] + pt.ball_maxrow[tok])
            ecc[u] = best
        return ecc

    # -- distance sum ------------------------------------------------------

    def _wiener_cache(self, pt: PieceTables, pattern_tok: int) -> tuple[dict[int, int], float]:
        cached = pt.wiener_cache.get(pattern_tok)
        if cached is not None:
            return cached
        pb = pt.decoded[pattern_tok]
        p = pt.piece
        interior = frozenset(v for v in p.vertices if v not in p.boundary_index)
        c_by_pos: dict[int, int] = {}
        z = 0.0
        entries = pb.window
        for idx, (off, pos) in enumerate(entries):
            tok = pb.per_position[pos].token
            members = pt.ball_members[tok]
            if idx + 1 < len(entries):
                noff, npos = entries[idx + 1]
                if noff == off:
                    c_by_pos[pos] = 0
                    continue
                nxt = pt.ball_members[pb.per_position[npos].token] & interior
            else:
                nxt = pb.next_members if pb.next_members is not None else interior
            diff = (nxt - members) & interior
            c_by_pos[pos] = len(diff)
            row = pt.ball_rows[tok]
            z += sum(row[v] for v in diff)
        result = (c_by_pos, z)
        pt.wiener_cache[pattern_tok] = result
        return result

    def wiener_index(self) -> float:
        g = self.g
        if not is_strongly_connected(g):
            return INF
        total = 0.0
        for b, row in self.to_boundary.items():
            total += sum(row)
        for pt in self.tables.values():
            p = pt.piece
            interior = [v for v in p.vertices if v not in p.boundary_index]
            if not interior:
                continue
            for u in p.vertices:
                rowG = pt.intra_dG[u]
                total += sum(rowG[v] for v in interior)
            for u, ref in pt.sources.items():
                sigma = 0.0
                bounds = ref.pivots + [len(p.boundary) + 1]
                block = 0
                for t, d in enumerate(ref.sorted_dists, start=1):
                    while block + 1 < len(bounds) and t >= bounds[block + 1]:
                        block += 1
                    c_by_pos, _ = self._wiener_cache(pt, ref.pattern_ids[block].token)
                    pos = p.boundary_index[ref.sorted_boundary[t - 1]]
                    sigma += d * c_by_pos[pos]
                for sid in ref.pattern_ids:
                    _, z = self._wiener_cache(pt, sid.token)
                    sigma += z
                total += sigma
        return total

    # -- reporting ---------------------------------------------------------

    def stats(self) -> dict:
        per_piece = []
        for pt in self.tables.values():
            per_piece.append(
                {
                    "piece_id": pt.piece.piece_id,
                    "edges": len(pt.piece.edge_ids),
                    "boundary": len(pt.piece.boundary),
                    "distinct_patterns": len(pt.decoded),
                    "distinct_balls": len(pt.ball_rows),
                    "pattern_hits": pt.pattern_hits,
                    "pattern_misses": pt.pattern_misses,
                    "sources": len(pt.sources),
                }
            )
        return {
            "kind": "unweighted",
            "n": self.g.n,
            "m": self.g.m,
            "r": self.r,
            "boundary_union": len(self.rd.boundary_union),
            "pieces": per_piece,
        }

    def canonical_ball_tables(self):
        """Ball tables keyed by member sets, independent of id issue order."""
        out = {}
        for pid in sorted(self.tables):
            pt = self.tables[pid]
            balls = {}
            for tok, members in sorted(pt.ball_members.items(), key=lambda kv: tuple(sorted(kv[1]))):
                key = tuple(sorted(members))
                row = pt.ball_rows[tok]
                balls[key] = tuple(sorted(row.items()))
            refs = {}
            for u in sorted(pt.sources):
                ref = pt.sources[u]
                refs[u] = tuple(
                    tuple(sorted(pt.ball_members[s.token])) for s in ref.rank_ball
                )
            out[pid] = {"balls": balls, "refs": refs}
        return out


def build_unweighted_oracle(g: DiGraph, r: int, seed: int = 0, naive_balls: bool = False) -> UnweightedOracle:
    return UnweightedOracle(g, r, seed=seed, naive_balls=naive_balls)
