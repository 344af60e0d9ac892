import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mfdo.graph import (
    INF,
    DiGraph,
    Edge,
    GraphFormatError,
    apsp_reference,
    bottleneck_apsp_reference,
    dump_graph,
    generate_cycle,
    generate_grid,
    generate_path,
    load_graph,
    make_graph,
    reverse,
    sssp,
)

G3_TEXT = "3 3 w\n0 1 1.0\n1 2 2.0\n0 2 5.0"


def test_load_graph_unweighted():
    g = load_graph("3 2\n0 1\n1 2")
    assert g.n == 3 and g.m == 2 and not g.weighted
    assert [(e.tail, e.head) for e in g.edges] == [(0, 1), (1, 2)]
    assert [e.edge_id for e in g.edges] == [0, 1]


def test_load_graph_weighted():
    g = load_graph(G3_TEXT)
    assert g.weighted and g.m == 3
    assert [e.weight for e in g.edges] == [1.0, 2.0, 5.0]


def test_load_graph_rejects_nonpositive_weight():
    with pytest.raises(GraphFormatError):
        load_graph("2 1 w\n0 1 0.0")


def test_load_graph_rejects_bad_vertex_and_malformed():
    with pytest.raises(GraphFormatError):
        load_graph("2 1\n0 5")
    with pytest.raises(GraphFormatError):
        load_graph("2 1\n0")


def test_load_graph_comments_and_roundtrip():
    g = load_graph("# header\n3 2\n0 1\n# mid\n1 2")
    assert g.m == 2
    assert load_graph(dump_graph(g)).edges == g.edges


def test_reverse_path_and_involution():
    p = make_graph(3, [(0, 1), (1, 2)])
    rp = reverse(p)
    assert {(e.tail, e.head) for e in rp.edges} == {(1, 0), (2, 1)}
    cyc = make_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert reverse(reverse(cyc)).edges == cyc.edges
    empty = make_graph(2, [])
    assert reverse(empty).edges == ()


def test_sssp_examples():
    p = make_graph(3, [(0, 1), (1, 2)])
    assert sssp(p, 0) == [0, 1, 2]
    assert sssp(p, 2) == [INF, INF, 0]
    g3 = load_graph(G3_TEXT)
    assert sssp(g3, 0) == [0, 1, 3]


def test_apsp_examples():
    p = make_graph(3, [(0, 1), (1, 2)])
    assert apsp_reference(p) == [[0, 1, 2], [INF, 0, 1], [INF, INF, 0]]
    cyc = make_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    ref = apsp_reference(cyc)
    assert ref[0][3] == 3 and ref[3][1] == 2
    for i in range(4):
        assert ref[i][i] == 0


def test_bottleneck_examples():
    g3 = load_graph(G3_TEXT)
    b = bottleneck_apsp_reference(g3)
    assert b[0][2] == 2
    single = make_graph(2, [(0, 1, 7.0)], weighted=True)
    bs = bottleneck_apsp_reference(single)
    assert bs[0][1] == 7.0
    assert bs[1][0] == INF


def test_generate_grid_examples():
    g = generate_grid(2, 2, seed=0)
    assert g.n == 4 and g.m == 8
    path = generate_grid(1, 5, seed=0)
    ref = apsp_reference(path)
    assert ref[0][4] == 4 and ref[4][0] == 4
    a = generate_grid(4, 4, seed=3, orientation="random", weighted=True)
    b = generate_grid(4, 4, seed=3, orientation="random", weighted=True)
    assert a.edges == b.edges


def test_generators_paths_cycles():
    assert apsp_reference(generate_path(4))[0][3] == 3
    c = generate_cycle(5)
    assert apsp_reference(c)[0][4] == 4


def test_triangle_inequality_and_source_zero():
    for seed in range(3):
        g = generate_grid(5, 4, seed=seed, orientation="random", weighted=True)
        for s in range(0, g.n, 3):
            dist = sssp(g, s)
            assert dist[s] == 0
            for e in g.edges:
                if dist[e.tail] != INF:
                    assert dist[e.head] <= dist[e.tail] + e.weight


def test_bottleneck_below_apsp_and_observation_bound():
    g = generate_grid(5, 5, seed=1, orientation="random", weighted=True)
    d = apsp_reference(g)
    b = bottleneck_apsp_reference(g)
    for u in range(g.n):
        for v in range(g.n):
            assert b[u][v] <= d[u][v]
            if u != v and d[u][v] != INF:
                assert d[u][v] < g.n * b[u][v]


def test_digraph_rejects_self_loops_and_bad_weights():
    with pytest.raises(ValueError):
        make_graph(2, [(0, 0)])
    with pytest.raises(ValueError):
        make_graph(2, [(0, 1, -1.0)], weighted=True)


def test_parallel_edges_min_weight_wins():
    g = make_graph(2, [(0, 1, 5.0), (0, 1, 2.0)], weighted=True)
    assert sssp(g, 0)[1] == 2.0


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000))
def test_random_digraph_sssp_consistency(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 8)
    arcs = []
    for _ in range(rng.randint(0, 14)):
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            arcs.append((u, v))
    g = make_graph(n, arcs)
    ref = apsp_reference(g)
    for s in range(n):
        assert sssp(g, s) == ref[s]
