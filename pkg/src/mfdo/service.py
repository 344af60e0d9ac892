"""HTTP front end: build oracles in memory and answer distance queries.

The service keeps built oracles in a process-local registry keyed by an
integer handle; the CLI (and tests) talk to it with small JSON bodies.
"""

from __future__ import annotations

import math
import random
from typing import Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .graph import GraphFormatError, load_graph
from .oraclefile import KIND_NAMES, build_oracle


class BuildRequest(BaseModel):
    graph_text: str
    kind: str = "unweighted"
    r: int = Field(default=16, ge=1)
    seed: int = 0
    eps: Optional[float] = None
    mode: str = "bounded"
    W: Optional[float] = None


class BuildResponse(BaseModel):
    oracle_id: int
    kind: str
    stats: dict


class QueryRequest(BaseModel):
    oracle_id: int
    u: int
    v: int
    query_mode: str = "det"   # weighted oracles: "det" or "rand"
    seed: int = 0


class QueryResponse(BaseModel):
    u: int
    v: int
    distance: Optional[float]   # null encodes +infinity
    reachable: Optional[bool] = None


def create_app() -> FastAPI:
    app = FastAPI(title="mfdo", version="0.1.0")
    registry: dict[int, tuple[str, object]] = {}

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "oracles": len(registry)}

    @app.post("/build", response_model=BuildResponse)
    def build(req: BuildRequest) -> BuildResponse:
        if req.kind not in KIND_NAMES:
            raise HTTPException(status_code=422, detail=f"unknown kind {req.kind!r}")
        try:
            g = load_graph(req.graph_text)
        except GraphFormatError as e:
            raise HTTPException(status_code=422, detail=str(e))
        params = {"r": req.r, "seed": req.seed}
        if req.kind == "approx":
            if req.eps is None:
                raise HTTPException(status_code=422, detail="approx kind requires eps")
            params.update({"eps": req.eps, "mode": req.mode, "W": req.W})
        try:
            oracle = build_oracle(req.kind, params, g)
        except ValueError as e:
            raise HTTPException(status_code=422, detail=str(e))
        oid = len(registry) + 1
        registry[oid] = (req.kind, oracle)
        stats = oracle.stats() if hasattr(oracle, "stats") else {"kind": req.kind}
        return BuildResponse(oracle_id=oid, kind=req.kind, stats=stats)

    @app.post("/query", response_model=QueryResponse)
    def query(req: QueryRequest) -> QueryResponse:
        entry = registry.get(req.oracle_id)
        if entry is None:
            raise HTTPException(status_code=404, detail="unknown oracle id")
        kind, oracle = entry
        u, v = req.u, req.v
        try:
            if kind == "unweighted":
                d = oracle.query_distance(u, v)
            elif kind == "weighted":
                if req.query_mode == "rand":
                    d = oracle.query_randomized(u, v, random.Random(req.seed))
                else:
                    d = oracle.query_deterministic(u, v)
            elif kind == "decr":
                ok = oracle.query_reachable(u, v)
                return QueryResponse(u=u, v=v, distance=None, reachable=ok)
            elif kind == "bottleneck":
                d = oracle.query_bottleneck(u, v)
            else:
                d = oracle.query_approx(u, v)
        except (KeyError, IndexError):
            raise HTTPException(status_code=422, detail="vertex out of range")
        return QueryResponse(u=u, v=v, distance=None if math.isinf(d) else d)

    return app


app = create_app()
