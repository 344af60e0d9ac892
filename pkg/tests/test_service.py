import pytest
from fastapi.testclient import TestClient

from mfdo.graph import INF, apsp_reference, dump_graph, generate_grid
from mfdo.service import create_app


@pytest.fixture()
def client():
    return TestClient(create_app())


def _build(client, g, **kwargs):
    body = {"graph_text": dump_graph(g), "r": 8, "seed": 0}
    body.update(kwargs)
    resp = client.post("/build", json=body)
    assert resp.status_code == 200, resp.text
    return resp.json()["oracle_id"]


def test_health(client):
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json()["status"] == "ok"


def test_build_and_query_sampled_pairs(client):
    import random

    g = generate_grid(4, 4, seed=1, orientation="random")
    oid = _build(client, g, kind="unweighted")
    ref = apsp_reference(g)
    rng = random.Random(0)
    pairs = [(rng.randrange(g.n), rng.randrange(g.n)) for _ in range(40)]
    for u, v in pairs:
        resp = client.post("/query", json={"oracle_id": oid, "u": u, "v": v})
        assert resp.status_code == 200
        d = resp.json()["distance"]
        if ref[u][v] == INF:
            assert d is None
        else:
            assert d == ref[u][v]


def test_weighted_query_modes(client):
    g = generate_grid(4, 4, seed=2, weighted=True)
    oid = _build(client, g, kind="weighted")
    ref = apsp_reference(g)
    for mode in ("det", "rand"):
        resp = client.post("/query", json={"oracle_id": oid, "u": 0, "v": g.n - 1,
                                           "query_mode": mode})
        assert resp.status_code == 200
        assert resp.json()["distance"] == ref[0][g.n - 1]


def test_decr_reports_reachability(client):
    g = generate_grid(3, 3, seed=0)
    oid = _build(client, g, kind="decr")
    resp = client.post("/query", json={"oracle_id": oid, "u": 0, "v": g.n - 1})
    assert resp.status_code == 200
    assert resp.json()["reachable"] is True


def test_build_errors(client):
    g = generate_grid(3, 3, seed=0, weighted=True)
    resp = client.post("/build", json={"graph_text": "junk", "kind": "unweighted"})
    assert resp.status_code == 422
    resp = client.post("/build", json={"graph_text": dump_graph(g), "kind": "mystery"})
    assert resp.status_code == 422
    resp = client.post("/build", json={"graph_text": dump_graph(g), "kind": "approx"})
    assert resp.status_code == 422   # missing eps


def test_query_errors(client):
    g = generate_grid(3, 3, seed=0)
    oid = _build(client, g, kind="unweighted")
    resp = client.post("/query", json={"oracle_id": oid + 99, "u": 0, "v": 1})
    assert resp.status_code == 404
    resp = client.post("/query", json={"oracle_id": oid, "u": 0, "v": g.n + 5})
    assert resp.status_code == 422
