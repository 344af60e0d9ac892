import json

import pytest

from mfdo.cli import main
from mfdo.graph import dump_graph, generate_grid, make_graph


@pytest.fixture()
def grid_file(tmp_path):
    g = generate_grid(5, 4, seed=1, orientation="random")
    path = tmp_path / "grid.txt"
    path.write_text(dump_graph(g))
    return str(path), g


@pytest.fixture()
def weighted_grid_file(tmp_path):
    g = generate_grid(5, 4, seed=1, orientation="random", weighted=True)
    path = tmp_path / "wgrid.txt"
    path.write_text(dump_graph(g))
    return str(path), g


def test_build_query_roundtrip(tmp_path, grid_file, capsys):
    path, g = grid_file
    oracle_path = str(tmp_path / "o.mfdo")
    assert main(["build", "--kind", "unweighted", "--r", "8",
                 path, "-o", oracle_path]) == 0
    qfile = tmp_path / "q.txt"
    qfile.write_text("0 5\nQ 3 7\n# comment\n\n")
    capsys.readouterr()
    assert main(["query", oracle_path, str(qfile)]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) == 2
    for line in out:
        u, v, d = line.split()
        assert d == "inf" or int(d) >= 0


def test_verify_all_kinds_green(tmp_path, grid_file, weighted_grid_file):
    upath, _ = grid_file
    wpath, _ = weighted_grid_file
    assert main(["verify", "--kind", "unweighted", "--r", "8", upath]) == 0
    assert main(["verify", "--kind", "weighted", "--r", "8", wpath]) == 0
    assert main(["verify", "--kind", "decr", "--r", "8", upath]) == 0
    assert main(["verify", "--kind", "bottleneck", "--r", "8", wpath]) == 0
    assert main(["verify", "--kind", "approx", "--eps", "0.5", "--r", "8",
                 wpath]) == 0


def test_verify_sampled_and_json_report(tmp_path, grid_file):
    path, g = grid_file
    report_path = str(tmp_path / "v.json")
    assert main(["verify", "--kind", "unweighted", "--r", "8",
                 "--sample", "50", "--json", report_path, path]) == 0
    report = json.loads(open(report_path).read())
    assert report["verdict"] is True
    assert report["checked"] == 50
    assert report["mismatches"] == 0


def test_verify_corrupted_oracle_fails(tmp_path, grid_file):
    path, _ = grid_file
    oracle_path = str(tmp_path / "o.mfdo")
    assert main(["build", "--kind", "unweighted", "--r", "8",
                 path, "-o", oracle_path]) == 0
    raw = bytearray(open(oracle_path, "rb").read())
    raw[-3] ^= 0x55
    open(oracle_path, "wb").write(bytes(raw))
    report_path = str(tmp_path / "v.json")
    assert main(["verify", "--oracle", oracle_path, "--json", report_path]) == 1
    assert json.loads(open(report_path).read())["verdict"] is False


def test_bench_same_seed_byte_identical(tmp_path, grid_file):
    path, _ = grid_file
    a, b = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    argv = ["bench", "--kind", "unweighted", "--r-list", "4,9",
            "--queries", "32", "--seed", "7", path]
    assert main(argv + ["--json", a]) == 0
    assert main(argv + ["--json", b]) == 0
    assert open(a, "rb").read() == open(b, "rb").read()


def test_bench_timings_opt_in(tmp_path, weighted_grid_file):
    path, _ = weighted_grid_file
    out = str(tmp_path / "t.json")
    assert main(["bench", "--kind", "weighted", "--r-list", "8",
                 "--queries", "8", "--timings", "--json", out, path]) == 0
    report = json.loads(open(out).read())["reports"][0]
    assert "build_seconds" in report
    assert report["probe_max"] >= 0


def test_workload_gen_teardown_then_decr(tmp_path, grid_file, capsys):
    path, g = grid_file
    wl = str(tmp_path / "wl.txt")
    assert main(["workload-gen", "--kind", "teardown", "--q-every", "4",
                 "--seed", "3", "-o", wl, path]) == 0
    lines = open(wl).read().strip().splitlines()
    d_lines = [ln for ln in lines if ln.startswith("D ")]
    assert len(d_lines) == g.m
    # deterministic for a fixed seed
    wl2 = str(tmp_path / "wl2.txt")
    assert main(["workload-gen", "--kind", "teardown", "--q-every", "4",
                 "--seed", "3", "-o", wl2, path]) == 0
    assert open(wl).read() == open(wl2).read()
    capsys.readouterr()
    assert main(["decr", "--r", "8", "--workload", wl, path]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) == sum(1 for ln in lines if ln.startswith("Q "))
    for line in out:
        assert line.split()[2] in ("0", "1")


def test_rdiv_report(tmp_path, grid_file):
    path, g = grid_file
    out = str(tmp_path / "rdiv.json")
    assert main(["rdiv", "--r", "8", "--json", out, path]) == 0
    report = json.loads(open(out).read())
    assert report["cover_ok"] is True
    assert sum(p["edges"] for p in report["pieces"]) >= g.m
    assert all(p["edges"] <= 8 for p in report["pieces"])


def test_audit_patterns_report(tmp_path, grid_file):
    path, _ = grid_file
    out = str(tmp_path / "audit.json")
    rc = main(["audit-patterns", "--r", "8", "--h", "5", "--json", out, path])
    report = json.loads(open(out).read())
    assert rc == 0 and report["verdict"] is True
    assert report["slope"] is None or report["slope"] <= report["slope_bound"]


def test_stats_command(tmp_path, weighted_grid_file, capsys):
    path, _ = weighted_grid_file
    oracle_path = str(tmp_path / "o.mfdo")
    assert main(["build", "--kind", "weighted", "--r", "8",
                 path, "-o", oracle_path]) == 0
    capsys.readouterr()
    assert main(["stats", oracle_path]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["params"]["r"] == 8


def test_exit_2_on_bad_inputs(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("this is not a graph\n")
    assert main(["verify", "--kind", "unweighted", str(bad)]) == 2
    assert main(["verify", "--kind", "unweighted",
                 str(tmp_path / "missing.txt")]) == 2
    g = make_graph(2, [(0, 1)])
    gp = tmp_path / "g.txt"
    gp.write_text(dump_graph(g))
    # weighted oracle on an unweighted graph is a usage error
    assert main(["verify", "--kind", "weighted", str(gp)]) == 2
