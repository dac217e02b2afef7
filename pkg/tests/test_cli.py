import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from kernelcover.cli import main
from kernelcover.covering import Cover
from kernelcover.signatures import save_points


@pytest.fixture
def pts(tmp_path):
    path = tmp_path / "X.csv"
    save_points(path, np.random.default_rng(0).uniform(0, 1, (20, 2)))
    return path


def test_bound_output(capsys):
    assert main(["bound", "--eps", "0.05", "--dim", "10"]) == 0
    out = capsys.readouterr().out
    assert "M=1024" in out
    assert main(["bound", "--eps", "0.1", "--dim", "20"]) == 0
    assert "N=211" in capsys.readouterr().out


def test_missing_input_exits_one(tmp_path, capsys):
    code = main(["build", "--input", str(tmp_path / "nope.csv"), "--eps", "0.3", "--out", str(tmp_path / "c.json")])
    assert code == 1
    assert "not found" in capsys.readouterr().err


def test_bad_eps_exits_one(pts, tmp_path):
    assert main(["build", "--input", str(pts), "--eps", "1.5", "--out", str(tmp_path / "c.json")]) == 1


def test_unknown_kernel_lists_families(pts, tmp_path, capsys):
    code = main(["build", "--input", str(pts), "--eps", "0.3", "--kernel", "cosine",
                 "--method", "naive", "--out", str(tmp_path / "c.json")])
    assert code == 1
    err = capsys.readouterr().err
    assert "gaussian" in err and "epanechnikov" in err


def test_build_verify_roundtrip(pts, tmp_path, capsys):
    cov = tmp_path / "c.json"
    assert main(["build", "--input", str(pts), "--eps", "0.3", "--method", "naive",
                 "--out", str(cov), "--report", str(tmp_path / "b.json")]) == 0
    loaded = Cover.load(cov)
    assert loaded.meta["epsilon"] == 0.3
    capsys.readouterr()
    args = ["verify", "--input", str(pts), "--cover", str(cov), "--trials", "2000", "--seed", "4"]
    assert main(args + ["--report", str(tmp_path / "r1.json")]) == 0
    assert main(args + ["--report", str(tmp_path / "r2.json")]) == 0
    r1 = json.loads((tmp_path / "r1.json").read_text())
    r2 = json.loads((tmp_path / "r2.json").read_text())
    assert r1["max_error"] == r2["max_error"] and r1["passed"]
    assert capsys.readouterr().out.startswith("PASS")


def test_verify_failure_exits_two(pts, tmp_path):
    cov = tmp_path / "tiny.json"
    c = Cover(np.array([[0.5, 0.5]]), np.array([9.0, 0.5]), {"epsilon": 0.05})
    c.save(cov)
    assert main(["verify", "--input", str(pts), "--cover", str(cov), "--trials", "500"]) == 2


def test_sample_sizes(capsys):
    assert main(["sample", "--mode", "pd", "--eps", "0.1", "--delta", "0.01"]) == 0
    assert capsys.readouterr().out.strip() == "10"
    assert main(["sample", "--mode", "pd", "--eps", "0.2", "--c", "1"]) == 0
    assert capsys.readouterr().out.strip() == "58"
    assert main(["sample", "--mode", "vc", "--eps", "0.2"]) == 1


def test_sample_writes_points(pts, tmp_path, capsys):
    out = tmp_path / "S.csv"
    assert main(["sample", "--input", str(pts), "--mode", "pd", "--eps", "0.3", "--out", str(out)]) == 0
    n = int(capsys.readouterr().out.strip())
    assert np.loadtxt(out, delimiter=",", ndmin=2).shape == (n, 2)


def test_embed_command(pts, tmp_path):
    q = tmp_path / "Q.csv"
    save_points(q, np.random.default_rng(1).normal(size=(5, 2)))
    out = tmp_path / "F.csv"
    assert main(["embed", "--input", str(pts), "--queries", str(q), "--eps-prime", "0.5", "--out", str(out)]) == 0
    assert np.loadtxt(out, delimiter=",", ndmin=2).shape == (5, 3)


def test_lowerbound_command(tmp_path, capsys):
    out = tmp_path / "w.json"
    assert main(["lowerbound", "--eps", "0.01", "--dim", "2", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["indices"] == [32, 33, 34, 35, 36] and data["packing_size"] == 6
    assert main(["lowerbound", "--eps", "0.1", "--dim", "2"]) == 1


def test_bench(tmp_path):
    conf = tmp_path / "b.toml"
    conf.write_text('[grid]\nn = [10]\nd = [1, 2]\neps = [0.4]\ntrials = 300\n')
    out = tmp_path / "b.csv"
    assert main(["bench", "--config", str(conf), "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 2 and all(r["passed"] == "True" for r in rows)


def test_threads_env(monkeypatch):
    from kernelcover.cli import _threads

    monkeypatch.setenv("COVER_THREADS", "3")
    assert _threads(8) == 3


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "kernelcover", "bound", "--eps", "0.05", "--dim", "10"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "M=1024" in res.stdout
