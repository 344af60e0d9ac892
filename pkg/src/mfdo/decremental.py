"""Decremental reachability over an edge partition, and bottleneck distances.

Single-source reachability under deletions is maintained with level-tracking
trees (breadth-first levels that only ever increase; a vertex whose level
would exceed the depth bound is reported unreachable exactly once). Per
piece, every vertex keeps an intra-piece tree; per boundary vertex of the
whole division, a reverse-graph tree maintains who still reaches it. The
boundary-reachability set of each (piece, source) pair is interned as a
0/1 string; sources sharing a set share one piece-level supersource tree,
which is spawned on the current piece state when its set first appears.

The bottleneck oracle tears the graph down in order of decreasing weight,
timestamping every reachability loss; a query binary-searches the recorded
history for the last moment the pair was connected.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field

from .dynstrings import StringId, StringStore
from .graph import INF, DiGraph, Edge
from .rdivision import RDivision, build_r_division


class SharedGraph:
    """Mutable adjacency shared by several trees; supports parallel edges."""

    def __init__(self, n: int, edges):
        self.n = n
        self.out: dict[int, dict[int, int]] = {}
        self.inn: dict[int, dict[int, int]] = {}
        for e in edges:
            self._add(e.tail, e.head)

    def _add(self, u: int, v: int) -> None:
        self.out.setdefault(u, {})[v] = self.out.get(u, {}).get(v, 0) + 1
        self.inn.setdefault(v, {})[u] = self.inn.get(v, {}).get(u, 0) + 1

    def delete(self, u: int, v: int) -> None:
        cnt = self.out.get(u, {}).get(v)
        if not cnt:
            raise KeyError(f"edge {u}->{v} not present")
        if cnt == 1:
            del self.out[u][v]
            del self.inn[v][u]
        else:
            self.out[u][v] = cnt - 1
            self.inn[v][u] = cnt - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.out.get(u, {}).get(v))


class ESTree:
    """Decremental multi-source reachability with monotone level increases."""

    def __init__(self, sg: SharedGraph, sources, depth: int):
        self.sg = sg
        self.sources = frozenset(sources)
        self.depth = depth
        self.level: dict[int, int] = {}
        frontier = [s for s in self.sources]
        for s in frontier:
            self.level[s] = 0
        while frontier:
            nxt = []
            for u in frontier:
                for v in self.sg.out.get(u, {}):
                    if v not in self.level and self.level[u] + 1 <= depth:
                        self.level[v] = self.level[u] + 1
                        nxt.append(v)
            frontier = nxt

    def reaches(self, v: int) -> bool:
        return v in self.level

    def on_delete(self, u: int, v: int) -> list[int]:
        """Fix levels after the shared graph lost one (u, v) edge.

        Returns the vertices that just became unreachable, each reported
        exactly once over the structure's lifetime.
        """
        if v not in self.level or u not in self.level:
            return []
        if self.sg.has_edge(u, v):
            return []    # a parallel edge still supports v
        if self.level[v] != self.level[u] + 1:
            return []
        lost: list[int] = []
        work = {v}
        while work:
            x = work.pop()
            if x not in self.level:
                continue
            if x in self.sources:
                continue
            best = INF
            for w in self.sg.inn.get(x, {}):
                lw = self.level.get(w)
                if lw is not None and lw + 1 < best:
                    best = lw + 1
            if best == self.level[x]:
                continue
            outs = list(self.sg.out.get(x, {}))
            if best == INF or best > self.depth:
                del self.level[x]
                lost.append(x)
            else:
                self.level[x] = best
            for y in outs:
                if y in self.level and self.level.get(y, 0) != 0:
                    work.add(y)
        return lost


def es_tree_delete(t: ESTree, edge: tuple[int, int]) -> list[int]:
    """Delete one (u, v) edge from the tree's graph and fix the tree."""
    u, v = edge
    t.sg.delete(u, v)
    return t.on_delete(u, v)


@dataclass
class _DecPiece:
    piece: object
    sg: SharedGraph
    intra: dict[int, ESTree]
    store: StringStore
    bits: dict[int, list[int]]                  # source -> boundary bit vector
    sid: dict[int, StringId]                    # source -> current pattern id
    l_trees: dict[int, ESTree] = field(default_factory=dict)   # pattern token -> tree
    l_spawn: dict[int, int] = field(default_factory=dict)      # pattern token -> spawn step
    l_death: dict[int, dict[int, int]] = field(default_factory=dict)
    intra_death: dict[int, dict[int, int]] = field(default_factory=dict)
    versions: dict[int, list[tuple[int, int]]] = field(default_factory=dict)


class DecReachOracle:
    """All-pairs reachability under edge deletions with O(1)-probe queries."""

    def __init__(self, g: DiGraph, r: int, seed: int = 0, record: bool = False):
        self.g = g
        self.rd = build_r_division(g, r, seed)
        self.record = record
        self.step = 0
        self.last_probe_count = 0
        rd = self.rd

        self.live_edges: dict[tuple[int, int], list[int]] = {}
        self.edge_piece: dict[int, int] = {}
        for p in rd.pieces:
            for eid in p.edge_ids:
                self.edge_piece[eid] = p.piece_id
        for e in g.edges:
            self.live_edges.setdefault((e.tail, e.head), []).append(e.edge_id)

        self.sg_rev = SharedGraph(g.n, (Edge(e.head, e.tail, e.weight, e.edge_id) for e in g.edges))
        self.btrees = {b: ESTree(self.sg_rev, {b}, g.n) for b in rd.boundary_union}
        self.death_rev: dict[int, dict[int, int]] = {}
        if record:
            for b, t in self.btrees.items():
                self.death_rev[b] = {u: 0 for u in range(g.n) if u not in t.level}

        boundary_set = set(rd.boundary_union)
        self.interior_piece = {}
        self.pieces: dict[int, _DecPiece] = {}
        for p in rd.pieces:
            for v in p.vertices:
                if v not in boundary_set:
                    self.interior_piece[v] = p.piece_id
            sg = SharedGraph(g.n, (g.edges[eid] for eid in p.edge_ids))
            intra = {u: ESTree(sg, {u}, g.n) for u in p.vertices}
            dp = _DecPiece(
                piece=p,
                sg=sg,
                intra=intra,
                store=StringStore(2),
                bits={},
                sid={},
            )
            if record:
                for u in p.vertices:
                    dp.intra_death[u] = {v: 0 for v in p.vertices if v not in intra[u].level}
            for u in range(g.n):
                bits = [1 if (self.btrees[b].reaches(u)) else 0 for b in p.boundary]
                sid = dp.store.insert_explicit(bits)
                dp.bits[u] = bits
                dp.sid[u] = sid
                self._ensure_l(dp, sid)
                if record:
                    dp.versions[u] = [(0, sid.token)]
            self.pieces[p.piece_id] = dp

    def _ensure_l(self, dp: _DecPiece, sid: StringId) -> None:
        tok = sid.token
        if tok in dp.l_trees:
            return
        members = {b for b, bit in zip(dp.piece.boundary, dp.store.string_of(sid)) if bit}
        tree = ESTree(dp.sg, members, self.g.n)
        dp.l_trees[tok] = tree
        dp.l_spawn[tok] = self.step
        if self.record:
            dp.l_death[tok] = {v: self.step for v in dp.piece.vertices if v not in tree.level}

    # -- updates -----------------------------------------------------------

    def delete_edge(self, u: int, v: int) -> None:
        ids = self.live_edges.get((u, v))
        if not ids:
            raise KeyError(f"edge {u}->{v} not present")
        self.delete_edge_id(ids[-1])

    def delete_edge_id(self, eid: int) -> None:
        e = self.g.edges[eid]
        u, v = e.tail, e.head
        ids = self.live_edges.get((u, v), [])
        if eid not in ids:
            raise KeyError(f"edge id {eid} not present")
        ids.remove(eid)
        self.step += 1

        dp = self.pieces[self.edge_piece[eid]]
        dp.sg.delete(u, v)
        for s, tree in dp.intra.items():
            for t in tree.on_delete(u, v):
                if self.record and t in dp.piece.vertex_index:
                    dp.intra_death[s][t] = self.step
        for tok, tree in dp.l_trees.items():
            for t in tree.on_delete(u, v):
                if self.record and t in dp.piece.vertex_index:
                    dp.l_death[tok][t] = self.step

        self.sg_rev.delete(v, u)
        lost: dict[int, list[int]] = {}
        for b, tree in self.btrees.items():
            for s in tree.on_delete(v, u):
                lost.setdefault(s, []).append(b)
                if self.record:
                    self.death_rev[b][s] = self.step

        for s, bs in lost.items():
            touched: set[int] = set()
            for b in bs:
                for pid in self.rd.vertex_to_pieces.get(b, ()):
                    dp2 = self.pieces[pid]
                    pos = dp2.piece.boundary_index[b]
                    if dp2.bits[s][pos]:
                        dp2.bits[s][pos] = 0
                        dp2.sid[s] = dp2.store.insert_substitution(dp2.sid[s], pos, 0)
                        touched.add(pid)
            for pid in touched:
                dp2 = self.pieces[pid]
                self._ensure_l(dp2, dp2.sid[s])
                if self.record:
                    dp2.versions[s].append((self.step, dp2.sid[s].token))

    # -- queries -----------------------------------------------------------

    def query_reachable(self, u: int, v: int) -> bool:
        self.last_probe_count = 0
        if u == v:
            return True
        if v in self.btrees:
            self.last_probe_count = 1
            return self.btrees[v].reaches(u)
        pid = self.interior_piece[v]
        dp = self.pieces[pid]
        if u in dp.intra:
            self.last_probe_count += 1
            if dp.intra[u].reaches(v):
                return True
        self.last_probe_count += 1
        return dp.l_trees[dp.sid[u].token].reaches(v)

    def pattern_counts(self) -> dict[int, int]:
        """Distinct boundary-reachability patterns interned per piece."""
        return {pid: len(dp.store) for pid, dp in self.pieces.items()}


def new_dec_oracle(g: DiGraph, r: int, seed: int = 0) -> DecReachOracle:
    return DecReachOracle(g, r, seed=seed)


class BottleneckOracle:
    """Static min-over-paths-of-max-weight oracle built from a full teardown."""

    def __init__(self, g: DiGraph, r: int, seed: int = 0):
        if not g.weighted:
            raise ValueError("bottleneck oracle requires a weighted graph")
        self.g = g
        self.n = g.n
        self.m = g.m
        self.last_probe_count = 0
        order = sorted(g.edges, key=lambda e: (-e.weight, -e.edge_id))
        self.w_desc = [e.weight for e in order]    # weight deleted at step tau (1-based)
        dec = DecReachOracle(g, r, seed=seed, record=True)
        for e in order:
            dec.delete_edge_id(e.edge_id)
        # retain only the timestamp tables
        self.death_rev = dec.death_rev
        self.interior_piece = dec.interior_piece
        self.piece_data = {}
        for pid, dp in dec.pieces.items():
            self.piece_data[pid] = {
                "vertices": set(dp.piece.vertices),
                "intra_death": dp.intra_death,
                "l_death": dp.l_death,
                "versions": dp.versions,
            }

    def _beta_from_last_alive(self, tau_star: int) -> float:
        if tau_star < 0:
            return INF
        # the deletion at step tau_star + 1 is the lightest edge every
        # surviving route must use
        return self.w_desc[tau_star]

    def query_bottleneck(self, s: int, t: int) -> float:
        if s == t:
            self.last_probe_count = 0
            return 0.0
        if t in self.death_rev:
            self.last_probe_count = 1
            death = self.death_rev[t].get(s, self.m + 1)
            return self._beta_from_last_alive(min(death, self.m) - 1)
        pid = self.interior_piece[t]
        pdta = self.piece_data[pid]
        probes = 0
        tau_star = -1
        if s in pdta["intra_death"]:
            probes += 1
            death = pdta["intra_death"][s].get(t, self.m + 1)
            tau_star = max(tau_star, min(death, self.m) - 1)
        versions = pdta["versions"][s]
        l_death = pdta["l_death"]

        def alive_at(i: int) -> bool:
            tau_i, tok = versions[i]
            return l_death[tok].get(t, self.m + 1) > tau_i

        lo, hi = 0, len(versions) - 1
        probes += 1
        if alive_at(0):
            while lo < hi:
                mid = (lo + hi + 1) // 2
                probes += 1
                if alive_at(mid):
                    lo = mid
                else:
                    hi = mid - 1
            tau_i, tok = versions[lo]
            nxt = versions[lo + 1][0] if lo + 1 < len(versions) else self.m + 1
            death = min(l_death[tok].get(t, self.m + 1), nxt, self.m + 1)
            tau_star = max(tau_star, min(death, self.m) - 1)
        self.last_probe_count = probes
        return self._beta_from_last_alive(tau_star)


def build_bottleneck_oracle(g: DiGraph, r: int, seed: int = 0) -> BottleneckOracle:
    return BottleneckOracle(g, r, seed=seed)
