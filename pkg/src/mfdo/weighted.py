"""Exact distance oracle for positively weighted digraphs.

Cross-piece queries locate, among the boundary vertices of the target's
piece, one minimizing source-distance plus piece-distance. The comparison
"is the route via v_i strictly shorter than via v_j" is rearranged so that
the source side only needs to know where d(s,v_i) - d(s,v_j) falls relative
to the piece-local difference set {d_P(v_j,t) - d_P(v_i,t)}. Sources sharing
that cell vector share all per-target comparison tables.

Cell vectors refine the plain interval index with exact-hit information:
each coordinate records whether the source difference equals a difference
set member or falls strictly between two, so the strict inequality is always
decidable. Infinite distances get three dedicated cell codes.

The minimum is found by repeated probing: ask whether any candidate beats
the current guess; the answer set strictly shrinks, and with random guesses
the expected probe count is logarithmic in the boundary size. A fixed
per-target permutation gives a deterministic variant.
"""

from __future__ import annotations

import math
import random
from bisect import bisect_left
from dataclasses import dataclass, field

from .graph import INF, DiGraph, reverse, sssp, sssp_from_sources
from .rdivision import RDivision, build_r_division, piece_graph

# cell codes: finite cells are -1..2l-1 (even 2m = exact hit on the m-th
# difference, odd = strictly between two); the sentinels sit far below
NEGINF_CELL = -101      # d(s,v_i) finite, d(s,v_j) infinite
POSINF_CELL = -102      # d(s,v_i) infinite, d(s,v_j) finite
BOTHINF_CELL = -103     # both infinite


@dataclass
class _PieceData:
    piece: object
    pg: DiGraph
    intra_dP: dict[int, dict[int, float]] = field(default_factory=dict)
    intra_dG: dict[int, dict[int, float]] = field(default_factory=dict)
    deltas: list[list[float]] = field(default_factory=list)          # per boundary index j
    target_code: list[dict[int, list[int]]] = field(default_factory=list)
    # per j: map t -> per-i even cell code of d_P(v_j,t)-d_P(v_i,t), or None markers
    patterns: list[dict[tuple, int]] = field(default_factory=list)   # per j: cell tuple -> index
    x_tables: dict[tuple[int, int, int], frozenset[int]] = field(default_factory=dict)
    # (t, j, pattern index) -> strictly-better boundary subset
    source_pattern: dict[int, list[int]] = field(default_factory=dict)  # s -> per-j pattern index
    tau_rank: dict[int, dict[int, int]] = field(default_factory=dict)   # t -> boundary vertex -> rank


class MinFindView:
    """Oracle view of a hidden permutation: probing x reveals its predecessors."""

    def __init__(self, sigma: list[int]):
        self.sigma = list(sigma)
        self.position = {x: i for i, x in enumerate(sigma)}
        self.probes = 0

    def query(self, x: int) -> frozenset[int]:
        self.probes += 1
        return frozenset(self.sigma[: self.position[x]])


def min_find(view, n: int, strategy: str = "random", rng: random.Random | None = None,
             tau: list[int] | None = None) -> tuple[int, int]:
    """Locate the permutation's first element; returns (element, probe count).

    Each probe returns the set of elements preceding the probed one; that set
    must strictly shrink, otherwise the view is inconsistent and an error is
    raised.
    """
    if strategy == "random":
        if rng is None:
            raise ValueError("random strategy needs an rng")
    elif strategy == "permutation":
        if tau is None:
            raise ValueError("permutation strategy needs tau")
        rank = {x: i for i, x in enumerate(tau)}
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    candidates = frozenset(range(n))
    probes = 0
    while True:
        if strategy == "random":
            x = rng.choice(sorted(candidates))
        else:
            x = min(candidates, key=lambda v: rank[v])
        better = view.query(x)
        probes += 1
        if not better:
            return x, probes
        if x in better or not better < candidates:
            raise ValueError("inconsistent min-finding view: candidate set did not shrink")
        candidates = better


class WeightedOracle:
    """Exact oracle over strictly positive real weights; no tolerance anywhere."""

    def __init__(self, g: DiGraph, r: int, seed: int = 0, rd: RDivision | None = None):
        if not g.weighted:
            raise ValueError("weighted oracle requires a weighted graph")
        self.g = g
        self.r = r
        self.seed = seed
        self.rd = rd if rd is not None else build_r_division(g, r, seed)
        self.last_probe_count = 0
        self._build()

    # -- construction ------------------------------------------------------

    def _build(self) -> None:
        g, rd = self.g, self.rd
        grev = reverse(g)
        self.to_boundary = {b: sssp(grev, b) for b in rd.boundary_union}
        boundary_set = set(rd.boundary_union)
        self.interior_piece = {}
        for p in rd.pieces:
            for v in p.vertices:
                if v not in boundary_set:
                    self.interior_piece[v] = p.piece_id

        self.pieces: dict[int, _PieceData] = {}
        for p in rd.pieces:
            pd = _PieceData(piece=p, pg=piece_graph(g, p))
            self.pieces[p.piece_id] = pd
            self._build_intra(pd)
            if p.boundary and len(p.vertices) > len(p.boundary):
                self._build_deltas(pd)
                self._build_source_patterns(pd)
                self._build_x_tables(pd)
                self._build_tau(pd)

    def _build_intra(self, pd: _PieceData) -> None:
        p = pd.piece
        for u in p.vertices:
            dP = sssp(pd.pg, u)
            offs = {b: self.to_boundary[b][u] for b in p.boundary if self.to_boundary[b][u] != INF}
            via = sssp_from_sources(pd.pg, offs) if offs else None
            pd.intra_dP[u] = {v: dP[v] for v in p.vertices}
            pd.intra_dG[u] = {v: (dP[v] if via is None else min(dP[v], via[v])) for v in p.vertices}

    def _build_deltas(self, pd: _PieceData) -> None:
        p = pd.piece
        k = len(p.boundary)
        for j in range(k):
            vj = p.boundary[j]
            row_j = pd.intra_dP[vj]
            values = set()
            codes: dict[int, list[int]] = {}
            raw: dict[int, list[float | None]] = {}
            for t in p.vertices:
                per_i: list[float | None] = []
                for vi in p.boundary:
                    dj, di = row_j[t], pd.intra_dP[vi][t]
                    if dj == INF or di == INF:
                        per_i.append(None)
                    else:
                        c = dj - di
                        values.add(c)
                        per_i.append(c)
                raw[t] = per_i
            deltas = sorted(values)
            index_of = {c: i for i, c in enumerate(deltas)}
            pd.deltas.append(deltas)
            for t in p.vertices:
                codes[t] = [
                    (None if c is None else 2 * index_of[c]) for c in raw[t]
                ]
            pd.target_code.append(codes)
            pd.patterns.append({})

    def _cell(self, lhs: float, deltas: list[float]) -> int:
        # even 2m: lhs == deltas[m]; odd 2m+1: deltas[m] < lhs < deltas[m+1];
        # cell -0.5 .. below everything maps to -1 -> code -1? use 2*idx scheme
        idx = bisect_left(deltas, lhs)
        if idx < len(deltas) and deltas[idx] == lhs:
            return 2 * idx
        return 2 * idx - 1

    def _build_source_patterns(self, pd: _PieceData) -> None:
        p = pd.piece
        k = len(p.boundary)
        for s in range(self.g.n):
            if s in p.vertex_index:
                continue
            ds = [self.to_boundary[b][s] for b in p.boundary]
            per_j = []
            for j in range(k):
                dj = ds[j]
                cells = []
                for i in range(k):
                    di = ds[i]
                    if di == INF and dj == INF:
                        cells.append(BOTHINF_CELL)
                    elif di == INF:
                        cells.append(POSINF_CELL)
                    elif dj == INF:
                        cells.append(NEGINF_CELL)
                    else:
                        cells.append(self._cell(di - dj, pd.deltas[j]))
                key = tuple(cells)
                table = pd.patterns[j]
                idx = table.get(key)
                if idx is None:
                    idx = len(table)
                    table[key] = idx
                per_j.append(idx)
            pd.source_pattern[s] = per_j

    def _build_x_tables(self, pd: _PieceData) -> None:
        p = pd.piece
        k = len(p.boundary)
        boundary = p.boundary
        for j in range(k):
            inv = {idx: key for key, idx in pd.patterns[j].items()}
            vj = boundary[j]
            for t in p.vertices:
                tcodes = pd.target_code[j][t]
                dvec = [pd.intra_dP[vi][t] for vi in boundary]
                dj_t = pd.intra_dP[vj][t]
                for idx, key in inv.items():
                    members = []
                    for i in range(k):
                        cell = key[i]
                        if cell == BOTHINF_CELL or cell == POSINF_CELL:
                            continue    # route via v_i is infinite or not better
                        if cell == NEGINF_CELL:
                            # route via v_j infinite; v_i wins iff it reaches t
                            if dvec[i] != INF:
                                members.append(boundary[i])
                            continue
                        if dvec[i] == INF:
                            continue
                        if dj_t == INF:
                            members.append(boundary[i])
                            continue
                        if cell < tcodes[i]:
                            members.append(boundary[i])
                    pd.x_tables[(t, j, idx)] = frozenset(members)

    def _build_tau(self, pd: _PieceData) -> None:
        p = pd.piece
        for t in p.vertices:
            rng = random.Random((self.seed * 1_000_003 + pd.piece.piece_id) * 1_000_003 + t)
            order = list(p.boundary)
            rng.shuffle(order)
            pd.tau_rank[t] = {b: i for i, b in enumerate(order)}

    # -- queries -----------------------------------------------------------

    def _route(self, pd: _PieceData, s: int, b: int, t: int) -> float:
        return self.to_boundary[b][s] + pd.intra_dP[b][t]

    def _query_cross(self, pd: _PieceData, s: int, t: int, pick) -> float:
        p = pd.piece
        bidx = p.boundary_index
        per_j = pd.source_pattern[s]
        candidates = frozenset(p.boundary)
        probes = 0
        while True:
            vj = pick(candidates)
            j = bidx[vj]
            better = pd.x_tables[(t, j, per_j[j])]
            probes += 1
            if not better:
                self.last_probe_count = probes
                return self._route(pd, s, vj, t)
            candidates = better

    def query_randomized(self, s: int, t: int, rng: random.Random) -> float:
        direct = self._query_direct(s, t)
        if direct is not None:
            self.last_probe_count = 0
            return direct
        pd = self.pieces[self.interior_piece[t]]
        if not pd.piece.boundary:
            self.last_probe_count = 0
            return INF
        return self._query_cross(pd, s, t, lambda c: rng.choice(sorted(c)))

    def query_deterministic(self, s: int, t: int) -> float:
        direct = self._query_direct(s, t)
        if direct is not None:
            self.last_probe_count = 0
            return direct
        pd = self.pieces[self.interior_piece[t]]
        if not pd.piece.boundary:
            self.last_probe_count = 0
            return INF
        rank = pd.tau_rank[t]
        return self._query_cross(pd, s, t, lambda c: min(c, key=lambda b: rank[b]))

    def _query_direct(self, s: int, t: int) -> float | None:
        if s == t:
            return 0.0
        if t in self.to_boundary:
            return self.to_boundary[t][s]
        pd = self.pieces[self.interior_piece[t]]
        if s in pd.intra_dG:
            return pd.intra_dG[s][t]
        return None

    def ensure_probe_bound(self, bound_fn, max_attempts: int = 8) -> int:
        """Re-seed the per-target permutations until every deterministic
        query stays within bound_fn(boundary_size) probes; returns the number
        of re-seeding rounds used. Exhaustive over all cross-piece pairs.
        """
        for attempt in range(max_attempts):
            worst_ok = True
            for pd in self.pieces.values():
                if not pd.tau_rank:
                    continue
                k = len(pd.piece.boundary)
                limit = bound_fn(k)
                for t in pd.piece.vertices:
                    if t in self.to_boundary:
                        continue
                    for s in pd.source_pattern:
                        self.query_deterministic(s, t)
                        if self.last_probe_count > limit:
                            worst_ok = False
                            break
                    if not worst_ok:
                        break
                if not worst_ok:
                    break
            if worst_ok:
                return attempt
            self.seed += 1
            for pd in self.pieces.values():
                if pd.tau_rank:
                    self._build_tau(pd)
        raise RuntimeError("probe bound not met after re-seeding attempts")

    # -- reporting ---------------------------------------------------------

    def stats(self) -> dict:
        per_piece = []
        for pid in sorted(self.pieces):
            pd = self.pieces[pid]
            per_piece.append(
                {
                    "piece_id": pid,
                    "boundary": len(pd.piece.boundary),
                    "distinct_patterns": [len(tbl) for tbl in pd.patterns],
                    "delta_sizes": [len(d) for d in pd.deltas],
                }
            )
        return {
            "kind": "weighted",
            "n": self.g.n,
            "m": self.g.m,
            "r": self.r,
            "boundary_union": len(self.rd.boundary_union),
            "pieces": per_piece,
        }


def build_weighted_oracle(g: DiGraph, r: int, seed: int = 0) -> WeightedOracle:
    return WeightedOracle(g, r, seed=seed)
