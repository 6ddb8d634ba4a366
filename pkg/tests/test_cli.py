import json
import subprocess
import sys

import pytest

from comptile import cli
from comptile.graphs import complete_graph, complete_multipartite, cycle_graph, format_graph
from comptile.graphs import MultipartiteSpec


@pytest.fixture()
def files(tmp_path):
    paths = {}
    for name, g in (("k2", complete_graph(2)), ("k3", complete_graph(3)),
                    ("c4", cycle_graph(4)), ("k6", complete_graph(6)),
                    ("k111", complete_multipartite(MultipartiteSpec((1, 1, 1)))[0])):
        p = tmp_path / f"{name}.graph"
        p.write_text(format_graph(g), encoding="ascii")
        paths[name] = str(p)
    gens = tmp_path / "gens.txt"
    gens.write_text("1,2\n2,1\n", encoding="ascii")
    paths["gens"] = str(gens)
    paths["tmp"] = tmp_path
    return paths


def run_cli(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_invariants_json(files, capsys):
    code, out, _ = run_cli(["invariants", files["k3"]], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["invariants"]["chi_star"] == "3/1"
    assert payload["invariants"]["hcf_chi"] == "inf"
    assert payload["schema_version"] == 1 and "seed" in payload and "budget" in payload


def test_solve_exit_codes(files, capsys):
    code, out, _ = run_cli(["solve", "--pattern", files["k2"],
                            "--graph", files["c4"]], capsys)
    assert code == 0 and json.loads(out)["status"] == "found"
    # ko base at n=6 has no triangle factor: proven none -> exit 1
    from comptile.construct import kuhn_osthus_base
    base = kuhn_osthus_base(complete_graph(3), 6)
    p = files["tmp"] / "ko6.graph"
    p.write_text(format_graph(base.graph), encoding="ascii")
    code, out, _ = run_cli(["solve", "--pattern", files["k111"],
                            "--graph", str(p)], capsys)
    assert code == 1 and json.loads(out)["reason"] == "exhausted"
    code, out, _ = run_cli(["solve", "--pattern", files["k3"],
                            "--graph", files["k6"], "--budget", "3"], capsys)
    assert code == 2


def test_solve_modes(files, capsys):
    code, out, _ = run_cli(["solve", "--pattern", files["k3"], "--graph",
                            files["k6"], "--mode", "count"], capsys)
    assert code == 0 and json.loads(out)["count"] == 20
    code, out, _ = run_cli(["solve", "--pattern", files["k3"], "--graph",
                            files["k6"], "--mode", "greedy", "--seed", "5"], capsys)
    assert code == 0 and json.loads(out)["uncovered"] == 0
    code, out, _ = run_cli(["solve", "--pattern", files["k3"], "--graph",
                            files["k6"], "--mode", "max"], capsys)
    body = json.loads(out)
    assert code == 0 and body["copies"] == 2 and body["optimal"]


def test_lattice_cli(files, capsys):
    code, out, _ = run_cli(["lattice", "--generators", files["gens"],
                            "--target", "1,-1"], capsys)
    assert code == 0
    body = json.loads(out)
    assert body["member"] and body["coefficients"] == [-1, 1]
    code, out, _ = run_cli(["lattice", "--generators", files["gens"],
                            "--transferral"], capsys)
    assert json.loads(out)["transferral"]["i"] == 0


def test_absorb_cli(files, capsys):
    code, out, _ = run_cli(["absorb", "find", "--graph", files["k6"],
                            "--pattern", files["k2"], "--u", "0", "--v", "3"],
                           capsys)
    assert code == 0 and json.loads(out)["s"] == [1]
    code, out, _ = run_cli(["absorb", "verify", "--kind", "connector",
                            "--graph", files["k6"], "--pattern", files["k2"],
                            "--s", "2", "--u", "0", "--v", "3"], capsys)
    assert code == 0 and json.loads(out)["ok"]
    code, out, _ = run_cli(["absorb", "verify", "--kind", "absorber",
                            "--graph", files["k6"], "--pattern", files["k2"],
                            "--s", "0,1", "--a", "2,3", "--t", "1"], capsys)
    assert code == 0 and json.loads(out)["ok"]
    code, out, _ = run_cli(["absorb", "verify", "--kind", "absorbing-set",
                            "--graph", files["k6"], "--pattern", files["k2"],
                            "--a", "0,1", "--xi", "1/3"], capsys)
    assert code == 0 and json.loads(out)["verdict"] == "proven"


def test_regcount_cli(files, capsys):
    code, out, _ = run_cli(["regcount", "density", "--graph", files["c4"],
                            "--x", "0,2", "--y", "1,3"], capsys)
    assert code == 0 and json.loads(out)["density"] == "1/1"
    parts = files["tmp"] / "parts.txt"
    parts.write_text("0 1\n2 3\n4 5\n", encoding="ascii")
    code, out, _ = run_cli(["regcount", "count", "--graph", files["k6"],
                            "--parts", str(parts), "--sizes", "1,1,1"], capsys)
    assert code == 0 and json.loads(out)["count"]["total"] == 8
    # parts need not cover the whole vertex set
    partial = files["tmp"] / "partial.txt"
    partial.write_text("0 1\n2\n", encoding="ascii")
    code, out, _ = run_cli(["regcount", "count", "--graph", files["k6"],
                            "--parts", str(partial), "--sizes", "1,1"], capsys)
    assert code == 0 and json.loads(out)["count"]["total"] == 2
    csv_path = files["tmp"] / "sweep.csv"
    code, out, _ = run_cli(["regcount", "sweep", "--graph", files["k6"],
                            "--parts", str(parts), "--sizes", "1,1,1",
                            "--mus", "0,1/6", "--csv", str(csv_path)], capsys)
    assert code == 0
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0] == "mu,total,compatible,c_observed" and len(lines) == 3


def test_error_exit_codes(files, capsys, tmp_path):
    code, _, err = run_cli(["invariants", str(tmp_path / "missing.graph")], capsys)
    assert code == 66 and json.loads(err)["error"] == "io"
    bad = tmp_path / "bad.graph"
    bad.write_text("not a graph\n", encoding="ascii")
    code, _, err = run_cli(["invariants", str(bad)], capsys)
    assert code == 65 and json.loads(err)["error"] == "parse"
    code, _, err = run_cli(["solve", "--pattern", files["k2"]], capsys)
    assert code == 64
    code, _, err = run_cli(["solve", "--pattern", files["k2"],
                            "--graph", files["c4"], "--jobs", "0"], capsys)
    assert code == 64
    # domain-invalid construction: structured error, usage-style exit
    code, _, err = run_cli(["construct", "--pattern", files["k111"], "--n", "12",
                            "--mu", "1/6", "--out", str(tmp_path / "x")], capsys)
    assert code == 64 and "too small" in json.loads(err)["detail"]
    code, _, err = run_cli(["acceptance", "--only", "Z9"], capsys)
    assert code == 64 and "unknown criterion" in json.loads(err)["detail"]


def test_construct_cli_writes_artifacts(files, capsys, tmp_path):
    out_dir = tmp_path / "inst"
    code, out, _ = run_cli(["construct", "--pattern", files["k111"], "--n", "24",
                            "--mu", "1/6", "--out", str(out_dir)], capsys)
    assert code == 0
    for fname in ("graph.txt", "partition.txt", "incompat.txt", "certificates.json"):
        assert (out_dir / fname).exists()
    cert = json.loads((out_dir / "certificates.json").read_text())
    assert cert["construct"]["certificates"]["all_hold"]
    # the emitted files reload into a consistent instance
    from comptile.graphs import parse_graph, parse_partition
    from comptile.incompat import parse_system_any
    g = parse_graph((out_dir / "graph.txt").read_text())
    part = parse_partition((out_dir / "partition.txt").read_text(), g.n)
    f = parse_system_any((out_dir / "incompat.txt").read_text(), g)
    assert part.k == 3 and f.bound_report().delta == 4


def test_subprocess_determinism_across_hash_seeds(files, tmp_path):
    outs = []
    for hash_seed in ("1", "271828"):
        proc = subprocess.run(
            [sys.executable, "-m", "comptile.cli", "construct",
             "--pattern", files["k111"], "--n", "24", "--mu", "1/6",
             "--out", str(tmp_path / f"d{hash_seed}")],
            capture_output=True, text=True, cwd="/root/pkg",
            env={"PYTHONHASHSEED": hash_seed, "PATH": "/usr/bin:/bin"})
        assert proc.returncode == 0, proc.stderr
        outs.append(proc.stdout)
        outs.append((tmp_path / f"d{hash_seed}" / "incompat.txt").read_text())
    assert outs[0] == outs[2] and outs[1] == outs[3]
