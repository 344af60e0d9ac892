import math
import random

import pytest

from mfdo.decremental import (
    BottleneckOracle,
    DecReachOracle,
    ESTree,
    SharedGraph,
    es_tree_delete,
)
from mfdo.graph import (
    INF,
    DiGraph,
    Edge,
    bottleneck_apsp_reference,
    generate_cycle,
    generate_grid,
    make_graph,
    reachability_reference,
    sssp,
)


def _shared(g):
    return SharedGraph(g.n, g.edges)


def test_es_tree_reports_lost_vertex_once():
    g = make_graph(3, [(0, 1), (1, 2)])
    sg = _shared(g)
    t = ESTree(sg, {0}, g.n)
    assert t.reaches(2)
    lost = es_tree_delete(t, (1, 2))
    assert lost == [2]
    assert not t.reaches(2)


def test_es_tree_irrelevant_deletion_empty_report():
    g = make_graph(3, [(0, 1), (0, 2), (1, 2)])
    sg = _shared(g)
    t = ESTree(sg, {0}, g.n)
    assert es_tree_delete(t, (1, 2)) == []
    assert t.reaches(2)


def test_es_tree_absent_edge_errors():
    g = make_graph(2, [(0, 1)])
    sg = _shared(g)
    t = ESTree(sg, {0}, g.n)
    with pytest.raises(KeyError):
        es_tree_delete(t, (1, 0))


def test_es_tree_parallel_edges():
    g = make_graph(2, [(0, 1), (0, 1)])
    sg = _shared(g)
    t = ESTree(sg, {0}, g.n)
    assert es_tree_delete(t, (0, 1)) == []
    assert t.reaches(1)
    assert es_tree_delete(t, (0, 1)) == [1]


def test_es_tree_depth_bounded_matches_truncated_bfs():
    rng = random.Random(3)
    g = generate_grid(4, 4, seed=3, orientation="random")
    for depth in (2, 4):
        sg = _shared(g)
        t = ESTree(sg, {0}, depth)
        edges = list(g.edges)
        rng.shuffle(edges)
        live = {(e.tail, e.head): 0 for e in edges}
        for e in edges:
            es_tree_delete(t, (e.tail, e.head))
            remaining = [x for x in edges if x != e]
            edges = remaining
            h = DiGraph(g.n, tuple(Edge(x.tail, x.head, 1.0, i)
                                   for i, x in enumerate(edges)), False)
            d = sssp(h, 0)
            expect = {v for v in range(g.n) if d[v] <= depth}
            assert {v for v in range(g.n) if t.reaches(v)} == expect


def test_dec_oracle_empty_graph():
    g = make_graph(3, [])
    o = DecReachOracle(g, 4)
    for u in range(3):
        for v in range(3):
            assert o.query_reachable(u, v) == (u == v)


def test_dec_oracle_initial_matrix_is_transitive_closure():
    g = generate_grid(5, 4, seed=1, orientation="random")
    o = DecReachOracle(g, 8, seed=1)
    reach = reachability_reference(g)
    for u in range(g.n):
        for v in range(g.n):
            assert o.query_reachable(u, v) == reach[u][v]
            assert o.last_probe_count <= 3


def test_dec_oracle_triangle_teardown():
    g = generate_cycle(3)
    o = DecReachOracle(g, 2)
    edges = list(g.edges)
    for e in edges:
        o.delete_edge(e.tail, e.head)
        live = [x for x in edges if x.edge_id > e.edge_id]
        h = DiGraph(g.n, tuple(Edge(x.tail, x.head, 1.0, i)
                               for i, x in enumerate(live)), False)
        reach = reachability_reference(h)
        for u in range(3):
            for v in range(3):
                assert o.query_reachable(u, v) == reach[u][v]


def test_dec_oracle_absent_edge_errors():
    g = make_graph(2, [(0, 1)])
    o = DecReachOracle(g, 2)
    o.delete_edge(0, 1)
    with pytest.raises(KeyError):
        o.delete_edge(0, 1)


def test_boundary_vertex_answers_agree_across_pieces():
    g = generate_grid(6, 5, seed=2, orientation="random")
    o = DecReachOracle(g, 8, seed=2)
    rng = random.Random(0)
    edges = list(g.edges)
    rng.shuffle(edges)
    for e in edges[: g.m // 2]:
        o.delete_edge(e.tail, e.head)
    for b in o.rd.boundary_union:
        pids = o.rd.vertex_to_pieces[b]
        if len(pids) < 2:
            continue
        for u in range(g.n):
            answers = set()
            for pid in pids:
                dp = o.pieces[pid]
                pos = dp.piece.boundary_index[b]
                answers.add(bool(dp.bits[u][pos]))
            assert len(answers) == 1
            assert answers.pop() == (o.btrees[b].reaches(u))


def test_pattern_counts_monotone_and_reported():
    g = generate_grid(5, 4, seed=0)
    o = DecReachOracle(g, 8, seed=0)
    before = o.pattern_counts()
    rng = random.Random(1)
    edges = list(g.edges)
    rng.shuffle(edges)
    for e in edges:
        o.delete_edge(e.tail, e.head)
    after = o.pattern_counts()
    for pid in before:
        assert after[pid] >= before[pid]


def test_bottleneck_examples():
    single = make_graph(2, [(0, 1, 7.0)], weighted=True)
    b = BottleneckOracle(single, 2)
    assert b.query_bottleneck(0, 1) == 7.0
    assert b.query_bottleneck(0, 0) == 0.0
    assert b.query_bottleneck(1, 0) == INF


def test_bottleneck_matches_reference():
    for seed in (0, 1):
        for orient in ("bidirected", "random"):
            g = generate_grid(5, 4, seed=seed, orientation=orient, weighted=True)
            b = BottleneckOracle(g, 8, seed=seed)
            ref = bottleneck_apsp_reference(g)
            for s in range(g.n):
                for t in range(g.n):
                    assert b.query_bottleneck(s, t) == ref[s][t]
                    assert b.last_probe_count <= 2 * math.log2(g.m) + 4


def test_bottleneck_tie_order_independence():
    # duplicate weights: answers depend only on weight values, so the oracle
    # must agree with the closure regardless of which equal edge dies first
    g0 = generate_grid(4, 4, seed=5)
    arcs = [(e.tail, e.head, 1.0 + (e.edge_id % 3)) for e in g0.edges]
    g = make_graph(g0.n, arcs, weighted=True)
    b = BottleneckOracle(g, 6, seed=0)
    ref = bottleneck_apsp_reference(g)
    for s in range(g.n):
        for t in range(g.n):
            assert b.query_bottleneck(s, t) == ref[s][t]


def test_bottleneck_requires_weighted():
    g = make_graph(2, [(0, 1)])
    with pytest.raises(ValueError):
        BottleneckOracle(g, 2)
