"""(1+eps)-approximate distance oracles with shared threshold-ball tables.

For a source u and a piece P, the boundary subsets reachable within
geometrically growing radii form a nested chain; only the distinct sets are
kept, interned per piece in a 0/1 string store so that sources whose chains
pass through the same subset share one piece-local distance row. A query
combines a radius threshold with the stored row minimum and takes the best
over the chain's change points.

Two variants: the bounded one evaluates the whole chain; the unbounded one
first asks a bottleneck oracle for a crude range of the answer and only
evaluates the chain inside a logarithmic window around it, after an implicit
rescaling of all thresholds by (min positive weight) * eps.

Thresholds are floats; set membership compares with a relative guard of four
machine epsilons so that values meant to sit exactly on a threshold are
classified consistently.
"""

from __future__ import annotations

import sys
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field

from .decremental import BottleneckOracle
from .dynstrings import StringStore
from .graph import INF, DiGraph, reverse, sssp, sssp_from_sources
from .rdivision import RDivision, build_r_division, piece_graph

_GUARD = 1.0 + 4.0 * sys.float_info.epsilon


@dataclass
class _ApproxPiece:
    piece: object
    pg: DiGraph
    store: StringStore
    intra_dG: dict[int, dict[int, float]] = field(default_factory=dict)
    rows: dict[int, dict[int, float]] = field(default_factory=dict)   # token -> min-dist row
    chains: dict[int, tuple[int, list[tuple[int, int]]]] = field(default_factory=dict)
    # source -> (zero-radius token, [(threshold index, token)] at change points)


class ApproxOracle:
    """Distance estimates within a (1+eps) factor; co-piece pairs exact."""

    def __init__(self, g: DiGraph, r: int, eps: float, mode: str = "bounded",
                 W: float | None = None, seed: int = 0):
        if not (0.0 < eps <= 1.0):
            raise ValueError("eps must be in (0, 1]")
        if mode not in ("bounded", "unbounded"):
            raise ValueError(f"unknown mode {mode!r}")
        self.g = g
        self.r = r
        self.eps = eps
        self.mode = mode
        self.seed = seed
        self.rd = build_r_division(g, r, seed)
        self.bottleneck: BottleneckOracle | None = None
        self._build(W)

    # -- construction ------------------------------------------------------

    def _build(self, W: float | None) -> None:
        g, rd = self.g, self.rd
        grev = reverse(g)
        to_boundary = {b: sssp(grev, b) for b in rd.boundary_union}
        boundary_set = set(rd.boundary_union)
        self.interior_piece = {}
        self.vertex_pieces = rd.vertex_to_pieces
        for p in rd.pieces:
            for v in p.vertices:
                if v not in boundary_set:
                    self.interior_piece[v] = p.piece_id

        max_dist = 0.0
        for row in to_boundary.values():
            for d in row:
                if d != INF and d > max_dist:
                    max_dist = d

        if self.mode == "unbounded":
            positives = [e.weight for e in g.edges if e.weight > 0]
            c = min(positives) if positives else 1.0
            base = c * self.eps
            limit = max(max_dist, base)
            self.bottleneck = BottleneckOracle(g, self.r, seed=self.seed)
        else:
            base = 1.0
            if W is not None:
                limit = 2.0 * g.n * W
            else:
                limit = max(2.0 * max_dist, 1.0)
        self.thresholds = [base]
        while self.thresholds[-1] < limit:
            self.thresholds.append(self.thresholds[-1] * (1.0 + self.eps))

        self.pieces: dict[int, _ApproxPiece] = {}
        for p in rd.pieces:
            ap = _ApproxPiece(piece=p, pg=piece_graph(g, p), store=StringStore(2))
            self.pieces[p.piece_id] = ap
            self._build_intra(ap, to_boundary)
            self._build_chains(ap, to_boundary)

    def _build_intra(self, ap: _ApproxPiece, to_boundary) -> None:
        p = ap.piece
        for u in p.vertices:
            dP = sssp(ap.pg, u)
            offs = {b: to_boundary[b][u] for b in p.boundary if to_boundary[b][u] != INF}
            via = sssp_from_sources(ap.pg, offs) if offs else None
            ap.intra_dG[u] = {
                v: (dP[v] if via is None else min(dP[v], via[v])) for v in p.vertices
            }

    def _threshold_index(self, d: float) -> int | None:
        """Smallest index whose threshold admits d, honoring the guard."""
        if d == INF:
            return None
        idx = bisect_left(self.thresholds, d)
        if idx > 0 and d <= self.thresholds[idx - 1] * _GUARD:
            idx -= 1
        return idx if idx < len(self.thresholds) else None

    def _build_chains(self, ap: _ApproxPiece, to_boundary) -> None:
        p = ap.piece
        k = len(p.boundary)
        for u in range(self.g.n):
            if u in p.vertex_index:
                continue
            entry: dict[int, list[int]] = {}
            zero_positions = []
            for pos, b in enumerate(p.boundary):
                d = to_boundary[b][u]
                if d <= 0.0:
                    zero_positions.append(pos)
                    entry.setdefault(0, []).append(pos)
                    continue
                j = self._threshold_index(d)
                if j is not None:
                    entry.setdefault(j, []).append(pos)
            sid = ap.store.insert_explicit([0] * k)
            if zero_positions:
                neg_sid = sid
                for pos in zero_positions:
                    neg_sid = ap.store.insert_substitution(neg_sid, pos, 1)
            else:
                neg_sid = sid
            changes: list[tuple[int, int]] = []
            for j in sorted(entry):
                for pos in entry[j]:
                    sid = ap.store.insert_substitution(sid, pos, 1)
                changes.append((j, sid.token))
            ap.chains[u] = (neg_sid.token, changes)
            self._ensure_row(ap, neg_sid.token)
            for _, tok in changes:
                self._ensure_row(ap, tok)

    def _ensure_row(self, ap: _ApproxPiece, tok: int) -> None:
        if tok in ap.rows:
            return
        from .dynstrings import StringId
        bits = ap.store.string_of(StringId(tok))
        members = {b for b, bit in zip(ap.piece.boundary, bits) if bit}
        if members:
            row = sssp_from_sources(ap.pg, {b: 0.0 for b in members})
            ap.rows[tok] = {v: row[v] for v in ap.piece.vertices}
        else:
            ap.rows[tok] = {v: INF for v in ap.piece.vertices}

    # -- queries -----------------------------------------------------------

    def _estimate(self, ap: _ApproxPiece, u: int, v: int,
                  lo: int | None = None, hi: int | None = None) -> float:
        neg_tok, changes = ap.chains[u]
        best = ap.rows[neg_tok][v]
        if not changes:
            return best
        start, end = 0, len(changes) - 1
        if lo is not None:
            # keep the last change point at or below the window start; its
            # set equals the one active at the window start, so pairing it
            # with the window-start threshold stays a valid overestimate
            start = bisect_right([j for j, _ in changes], lo) - 1
        if hi is not None:
            end = bisect_right([j for j, _ in changes], hi) - 1
        for idx in range(max(start, 0), end + 1):
            j, tok = changes[idx]
            if lo is not None and j < lo:
                j = lo
            term = self.thresholds[j] + ap.rows[tok][v]
            if term < best:
                best = term
        return best

    def query_approx(self, u: int, v: int) -> float:
        if u == v:
            return 0.0
        shared = set(self.vertex_pieces.get(u, ())) & set(self.vertex_pieces.get(v, ()))
        if shared:
            pid = min(shared)
            return self.pieces[pid].intra_dG[u][v]
        pid = (self.interior_piece[v] if v in self.interior_piece
               else min(self.vertex_pieces[v]))
        ap = self.pieces[pid]
        if self.mode == "bounded":
            return self._estimate(ap, u, v)
        x = self.bottleneck.query_bottleneck(u, v)
        if x == INF:
            return INF
        if x == 0.0:
            return 0.0
        thr = self.thresholds
        p = bisect_right(thr, self.eps * x * _GUARD) - 1
        p = max(p, 0)
        y = self.g.n * x
        q = bisect_left(thr, y)
        q = min(q, len(thr) - 1)
        return self._estimate(ap, u, v, lo=p, hi=q)

    def stats(self) -> dict:
        per_piece = []
        for pid in sorted(self.pieces):
            ap = self.pieces[pid]
            per_piece.append(
                {
                    "piece_id": pid,
                    "boundary": len(ap.piece.boundary),
                    "distinct_sets": len(ap.rows),
                    "thresholds": len(self.thresholds),
                }
            )
        return {
            "kind": "approx",
            "n": self.g.n,
            "m": self.g.m,
            "r": self.r,
            "eps": self.eps,
            "mode": self.mode,
            "pieces": per_piece,
        }


def build_approx(g: DiGraph, r: int, eps: float, mode: str = "bounded",
                 W: float | None = None, seed: int = 0) -> ApproxOracle:
    return ApproxOracle(g, r, eps, mode=mode, W=W, seed=seed)


def query_approx(o: ApproxOracle, u: int, v: int) -> float:
    return o.query_approx(u, v)
