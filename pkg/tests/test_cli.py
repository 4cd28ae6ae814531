import json
import subprocess
import sys

import numpy as np
import pytest

from conic_qaoa.qaoa import read_landscape


def run(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "conic_qaoa", *map(str, args)], capture_output=True, text=True, cwd=cwd)


@pytest.fixture
def graph_file(tmp_path):
    path = tmp_path / "ring5.txt"
    path.write_text("# 5-ring\n5 5\n0 1\n1 2\n2 3\n3 4\n0 4\n")
    return path


def test_landscape_command(tmp_path, graph_file):
    out = tmp_path / "optimisation_landscape_p=2.txt"
    res = run("landscape", "--graph", graph_file, "--p", 2, "--grid", 8, "--out", out)
    assert res.returncode == 0, res.stderr
    rows = read_landscape(out)
    assert rows.shape == (64, 3)
    assert rows[0, 2] == pytest.approx(-2.5, abs=1e-10)
    assert out.read_text().splitlines()[0] == "gamma beta energy"
    assert "ring5.txt" in out.read_text().splitlines()[1]


def test_optimize_command(tmp_path, graph_file):
    out = tmp_path / "opt.json"
    res = run("optimize", "--graph", graph_file, "--p", 1, "--seed", 4, "--step-size", 0.02,
              "--max-iter", 200, "--jumps", 1, "--out", out)
    assert res.returncode == 0, res.stderr
    report = json.loads(out.read_text())
    assert report["config"]["seed"] == 4 and report["ground_energy"] == -4.0


def test_jump_demo_command(graph_file):
    res = run("jump-demo", "--graph", graph_file, "--pool-size", 5, "--seed", 2)
    assert res.returncode == 0, res.stderr
    data = json.loads(res.stdout)
    E = np.array(data["moments"]["E"]["re"]) + 1j * np.array(data["moments"]["E"]["im"])
    assert E.shape == (5, 5)
    assert data["energy_after"] == pytest.approx(data["gep"]["lambda_opt"], abs=1e-9)
    assert [r["encoding"] for r in data["lcu"]] == ["root", "naive"]
    assert all(r["passed"] for r in data["lcu"])


def test_benchmark_command(tmp_path):
    cfg = tmp_path / "bench.json"
    cfg.write_text(json.dumps({
        "configs": [{"generator": {"kind": "ring", "n": 4}, "p": 1, "optimizer": {"step_size": 0.02, "max_iter": 150},
                     "pool": {"size": 3}}],
        "seeds": [0, 1],
    }))
    res = run("benchmark", "--config", cfg, "--out", tmp_path / "out")
    assert res.returncode == 0, res.stderr
    lines = (tmp_path / "out" / "benchmark.csv").read_text().splitlines()
    assert len(lines) == 5


def test_error_record(tmp_path):
    res = run("landscape", "--graph", tmp_path / "nope.txt", "--p", 2, "--out", tmp_path / "x.txt")
    assert res.returncode != 0
    record = json.loads(res.stderr.strip().splitlines()[-1])
    assert record["error"] == "FileNotFoundError"

    bad = tmp_path / "bad.txt"
    bad.write_text("2 2\n0 1\n1 0\n")
    res = run("landscape", "--graph", bad, "--p", 2, "--out", tmp_path / "x.txt")
    record = json.loads(res.stderr)
    assert res.returncode == 1 and record["error"] == "ParseError" and "line 3" in record["message"]


def test_usage_error_is_machine_readable():
    res = run("landscape", "--p", "2")
    assert res.returncode == 2
    assert json.loads(res.stderr)["error"] == "UsageError"
