"""Command-line front end: build, query, verify, bench, and audit oracles.

Exit codes: 0 success, 1 verification failure, 2 usage or input errors.
All JSON output is deterministic for a fixed (graph, flags, seed) triple;
wall-clock timings are only included when explicitly requested.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
import time

from .approx import ApproxOracle
from .decremental import BottleneckOracle, DecReachOracle
from .graph import (
    INF,
    DiGraph,
    GraphFormatError,
    apsp_reference,
    bottleneck_apsp_reference,
    load_graph,
    sssp,
)
from .oraclefile import (
    KIND_NAMES,
    OracleFileError,
    build_oracle,
    load_oracle,
    write_oracle_file,
)
from .patterns import ShiftSet, count_patterns_audit, fit_loglog_slope
from .rdivision import build_r_division, validate_r_division
from .unweighted import UnweightedOracle
from .weighted import WeightedOracle


def _read_graph(path: str) -> DiGraph:
    with open(path) as f:
        return load_graph(f.read())


def _fmt_dist(d: float) -> str:
    if d == INF:
        return "inf"
    if float(d).is_integer():
        return str(int(d))
    return repr(float(d))


def _sanitize(obj):
    if isinstance(obj, float) and math.isinf(obj):
        return "inf"
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    return obj


def _emit(report: dict, json_path: str | None) -> None:
    text = json.dumps(_sanitize(report), sort_keys=True, indent=2) + "\n"
    if json_path:
        with open(json_path, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _approx_params(args) -> dict:
    params = {"r": args.r, "seed": args.seed}
    if args.kind == "approx":
        if args.eps is None:
            raise SystemExit(2)
        params.update({"eps": args.eps, "mode": args.mode, "W": args.W})
    return params


# -- subcommands -----------------------------------------------------------

def cmd_build(args) -> int:
    g = _read_graph(args.graph)
    params = _approx_params(args)
    build_oracle(args.kind, params, g)   # fail early on bad inputs
    write_oracle_file(args.output, args.kind, params, g)
    print(f"wrote {args.kind} oracle for n={g.n} m={g.m} to {args.output}")
    return 0


def cmd_query(args) -> int:
    kind, params, oracle = load_oracle(args.oracle)
    rng = random.Random(args.seed)
    with open(args.queries) as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if parts[0] in ("Q", "D"):
                op, rest = parts[0], parts[1:]
            else:
                op, rest = "Q", parts
            u, v = int(rest[0]), int(rest[1])
            if op == "D":
                if kind != "decr":
                    print("error: D lines only valid for decr oracles", file=sys.stderr)
                    return 2
                oracle.delete_edge(u, v)
                continue
            if kind == "unweighted":
                d = oracle.query_distance(u, v)
            elif kind == "weighted":
                if args.query_mode == "rand":
                    d = oracle.query_randomized(u, v, rng)
                else:
                    d = oracle.query_deterministic(u, v)
            elif kind == "decr":
                d = 1 if oracle.query_reachable(u, v) else 0
            elif kind == "bottleneck":
                d = oracle.query_bottleneck(u, v)
            else:
                d = oracle.query_approx(u, v)
            print(f"{u} {v} {_fmt_dist(d)}")
    return 0


def _verify_pairs(g: DiGraph, sample: str, seed: int):
    if sample == "all":
        for u in range(g.n):
            for v in range(g.n):
                yield u, v
    else:
        rng = random.Random(seed)
        for _ in range(int(sample)):
            yield rng.randrange(g.n), rng.randrange(g.n)


def cmd_verify(args) -> int:
    if args.oracle:
        try:
            kind, params, oracle = load_oracle(args.oracle)
        except (OracleFileError, OSError) as e:
            _emit({"verdict": False, "error": str(e)}, args.json)
            return 1
        g = oracle.g
        eps = params.get("eps")
    else:
        if not args.graph:
            print("error: verify needs a graph or an oracle file", file=sys.stderr)
            return 2
        g = _read_graph(args.graph)
        kind = args.kind
        eps = args.eps
        oracle = build_oracle(kind, _approx_params(args), g)

    mismatches = 0
    checked = 0
    max_ratio = 1.0
    if kind in ("unweighted", "weighted", "approx"):
        ref = apsp_reference(g)
    elif kind == "bottleneck":
        ref = bottleneck_apsp_reference(g)
    else:
        ref = [sssp(g, u) for u in range(g.n)]
    rng = random.Random(args.seed)
    for u, v in _verify_pairs(g, args.sample, args.seed):
        checked += 1
        expected = ref[u][v]
        if kind == "unweighted":
            ok = oracle.query_distance(u, v) == expected
        elif kind == "weighted":
            ok = (oracle.query_deterministic(u, v) == expected
                  and oracle.query_randomized(u, v, rng) == expected)
        elif kind == "decr":
            ok = oracle.query_reachable(u, v) == (expected != INF)
        elif kind == "bottleneck":
            ok = oracle.query_bottleneck(u, v) == expected
        else:
            est = oracle.query_approx(u, v)
            if expected == INF or est == INF:
                ok = (expected == INF) == (est == INF)
            elif expected == 0:
                ok = est == 0
            else:
                ratio = est / expected
                max_ratio = max(max_ratio, ratio)
                ok = expected <= est <= (1 + eps) * expected
        if not ok:
            mismatches += 1
    verdict = mismatches == 0
    report = {
        "kind": kind,
        "n": g.n,
        "m": g.m,
        "checked": checked,
        "mismatches": mismatches,
        "verdict": verdict,
    }
    if kind == "approx":
        report["max_ratio"] = max_ratio
    _emit(report, args.json)
    return 0 if verdict else 1


def cmd_bench(args) -> int:
    g = _read_graph(args.graph)
    reports = []
    for r in [int(x) for x in args.r_list.split(",")]:
        start = time.perf_counter()
        if args.kind == "unweighted":
            oracle = UnweightedOracle(g, r, seed=args.seed)
        elif args.kind == "weighted":
            oracle = WeightedOracle(g, r, seed=args.seed)
        elif args.kind == "bottleneck":
            oracle = BottleneckOracle(g, r, seed=args.seed)
        elif args.kind == "approx":
            oracle = ApproxOracle(g, r, args.eps or 0.5, seed=args.seed)
        else:
            oracle = DecReachOracle(g, r, seed=args.seed)
        build_time = time.perf_counter() - start
        rng = random.Random(args.seed)
        probes = []
        for _ in range(args.queries):
            u, v = rng.randrange(g.n), rng.randrange(g.n)
            if args.kind == "unweighted":
                oracle.query_distance(u, v)
            elif args.kind == "weighted":
                oracle.query_deterministic(u, v)
                probes.append(oracle.last_probe_count)
            elif args.kind == "bottleneck":
                oracle.query_bottleneck(u, v)
                probes.append(oracle.last_probe_count)
            elif args.kind == "approx":
                oracle.query_approx(u, v)
            else:
                oracle.query_reachable(u, v)
        report = {
            "kind": args.kind,
            "r": r,
            "n": g.n,
            "m": g.m,
            "queries": args.queries,
            "dist_to_boundary_cells": g.n * len(build_r_division(g, r, args.seed).boundary_union),
        }
        if hasattr(oracle, "stats"):
            report["stats"] = oracle.stats()
        if probes:
            report["probe_max"] = max(probes)
            report["probe_mean"] = sum(probes) / len(probes)
        if args.timings:
            report["build_seconds"] = build_time
        reports.append(report)
    _emit({"reports": reports}, args.json)
    return 0


def cmd_decr(args) -> int:
    g = _read_graph(args.graph)
    oracle = DecReachOracle(g, args.r, seed=args.seed)
    with open(args.workload) as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            op, u, v = line.split()
            u, v = int(u), int(v)
            if op == "D":
                oracle.delete_edge(u, v)
            elif op == "Q":
                print(f"{u} {v} {1 if oracle.query_reachable(u, v) else 0}")
            else:
                print(f"error: bad workload op {op!r}", file=sys.stderr)
                return 2
    return 0


def cmd_rdiv(args) -> int:
    g = _read_graph(args.graph)
    rd = build_r_division(g, args.r, args.seed)
    report = validate_r_division(g, rd)
    report.update(
        {
            "r": args.r,
            "n": g.n,
            "m": g.m,
            "boundary_union": len(rd.boundary_union),
            "pieces": [
                {
                    "piece_id": p.piece_id,
                    "edges": len(p.edge_ids),
                    "vertices": len(p.vertices),
                    "boundary": len(p.boundary),
                }
                for p in rd.pieces
            ],
        }
    )
    _emit(report, args.json)
    return 0 if report["cover_ok"] else 1


def cmd_audit_patterns(args) -> int:
    g = _read_graph(args.graph)
    rd = build_r_division(g, args.r, args.seed)
    rng = random.Random(args.seed)
    sources = sorted(rng.sample(range(g.n), min(g.n, args.sources)))
    shifts = ShiftSet(tuple(range(args.shifts)))
    audit = count_patterns_audit(g, rd, shifts, sources)
    bound = (args.h - 1) + 0.5
    slope = audit["slope"]
    verdict = slope is None or slope <= bound
    report = {
        "r": args.r,
        "h": args.h,
        "slope": slope,
        "slope_bound": bound,
        "per_piece": audit["per_piece"],
        "verdict": verdict,
    }
    _emit(report, args.json)
    return 0 if verdict else 1


def cmd_workload_gen(args) -> int:
    g = _read_graph(args.graph)
    rng = random.Random(args.seed)
    order = list(g.edges)
    rng.shuffle(order)
    lines = []
    if args.kind == "teardown":
        for i, e in enumerate(order):
            lines.append(f"D {e.tail} {e.head}")
            if (i + 1) % args.q_every == 0:
                lines.append(f"Q {rng.randrange(g.n)} {rng.randrange(g.n)}")
    else:
        deleted = 0
        while deleted < len(order):
            if rng.random() < args.mix_ratio:
                e = order[deleted]
                lines.append(f"D {e.tail} {e.head}")
                deleted += 1
            else:
                lines.append(f"Q {rng.randrange(g.n)} {rng.randrange(g.n)}")
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_stats(args) -> int:
    kind, params, oracle = load_oracle(args.oracle)
    report = oracle.stats() if hasattr(oracle, "stats") else {"kind": kind}
    report["params"] = params
    _emit(report, args.json)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


# -- argument parsing ------------------------------------------------------

def _add_common(p, kind=True):
    p.add_argument("--r", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    if kind:
        p.add_argument("--kind", choices=sorted(KIND_NAMES), default="unweighted")
        p.add_argument("--eps", type=float, default=None)
        p.add_argument("--W", type=float, default=None)
        p.add_argument("--mode", choices=["bounded", "unbounded"], default="bounded")


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mfdo", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build an oracle and write it to a file")
    _add_common(p)
    p.add_argument("graph")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="answer queries from a file against an oracle")
    p.add_argument("oracle")
    p.add_argument("queries")
    p.add_argument("--query-mode", choices=["rand", "det"], default="det")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("verify", help="differentially verify an oracle against references")
    _add_common(p)
    p.add_argument("graph", nargs="?")
    p.add_argument("--oracle")
    p.add_argument("--sample", default="all")
    p.add_argument("--json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="build/query metrics over a list of r values")
    _add_common(p)
    p.add_argument("graph")
    p.add_argument("--r-list", default="16")
    p.add_argument("--queries", type=int, default=100)
    p.add_argument("--timings", action="store_true")
    p.add_argument("--json")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("decr", help="run a deletion/query workload")
    _add_common(p, kind=False)
    p.add_argument("graph")
    p.add_argument("--workload", required=True)
    p.set_defaults(func=cmd_decr)

    p = sub.add_parser("rdiv", help="build and validate an r-division")
    _add_common(p, kind=False)
    p.add_argument("graph")
    p.add_argument("--json")
    p.set_defaults(func=cmd_rdiv)

    p = sub.add_parser("audit-patterns", help="measure pattern-count growth slopes")
    _add_common(p, kind=False)
    p.add_argument("graph")
    p.add_argument("--h", type=int, default=5, dest="h")
    p.add_argument("--shifts", type=int, default=3)
    p.add_argument("--sources", type=int, default=16)
    p.add_argument("--json")
    p.set_defaults(func=cmd_audit_patterns)

    p = sub.add_parser("workload-gen", help="generate a deletion/query workload")
    _add_common(p, kind=False)
    p.add_argument("graph")
    p.add_argument("--kind", choices=["teardown", "mixed"], default="teardown")
    p.add_argument("--q-every", type=int, default=8)
    p.add_argument("--mix-ratio", type=float, default=0.5)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_workload_gen)

    p = sub.add_parser("stats", help="print stats for a stored oracle")
    p.add_argument("oracle")
    p.add_argument("--json")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return ap


def main(argv=None) -> int:
    ap = make_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (GraphFormatError, OracleFileError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
