import json

import pytest

from hypercolor.cli import main
from hypercolor.hypergraph import load


@pytest.fixture
def xyz_file(tmp_path):
    path = tmp_path / "h.txt"
    assert main(["generate", "xyz", "--n", "30", "--k", "3", "--epsilon", "0.8", "--out", str(path)]) == 0
    return path


def test_generate_and_decide(xyz_file, tmp_path):
    h = load(str(xyz_file))
    assert h.num_edges == 8 * 8 * 14
    report = tmp_path / "r.json"
    assert main(["decide", "--in", str(xyz_file), "--report", str(report)]) == 0
    data = json.loads(report.read_text())
    assert data["colorable"] is True and len(data["witness"]) == 30


def test_decide_exit_codes(tmp_path, capsys):
    tri = tmp_path / "tri.txt"
    tri.write_text("3 3\n2 0 1\n2 1 2\n2 0 2\n")
    assert main(["decide", "--in", str(tri)]) == 1
    assert json.loads(capsys.readouterr().out)["status"] == "not_colorable"
    assert main(["decide", "--in", str(tri), "--brute-force"]) == 1
    k9 = tmp_path / "k9.txt"
    from itertools import combinations

    edges = list(combinations(range(9), 3))
    k9.write_text(f"9 {len(edges)}\n" + "".join(f"3 {a} {b} {c}\n" for a, b, c in edges))
    assert main(["decide", "--in", str(k9), "--budget", "1"]) == 2


def test_perturb(xyz_file, tmp_path):
    out = tmp_path / "p.txt"
    assert main(["perturb", "--in", str(xyz_file), "--ell", "2", "--count", "20", "--seed", "4", "--out", str(out)]) == 0
    assert load(str(out)).arities == (2, 3)
    out2 = tmp_path / "q.txt"
    assert main(["perturb", "--in", str(xyz_file), "--ell", "2", "--prob", "0.05", "--out", str(out2)]) == 0


def test_components_and_families(tmp_path, capsys):
    g = tmp_path / "g.txt"
    assert main(["generate", "components", "--layout", "[[4,4]]", "--out", str(g)]) == 0
    assert main(["extract-families", "--in", str(g), "--delta", "0.6666666666666666", "--ell", "2"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["families"] == [[0]] and data["degrees"] == [[4]]
    assert all(data["invariants"].values())


def test_grow_witness_and_run_stages(xyz_file, tmp_path):
    rep = tmp_path / "w.json"
    code = main(["grow-witness", "--in", str(xyz_file), "--epsilon", "0.8", "--ell", "2", "--report", str(rep)])
    data = json.loads(rep.read_text())
    assert code in (0, 1)
    if code == 0:
        assert data["verified"] is True
    rep2 = tmp_path / "s.json"
    code = main(["run-stages", "--in", str(xyz_file), "--epsilon", "0.8", "--ell", "2", "--rho", "30", "--seed", "1", "--report", str(rep2)])
    data = json.loads(rep2.read_text())
    assert code == {"colorable": 0, "non_2_colorable": 1, "inconclusive": 2}[data["verdict"]]


def test_sweep(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"base": "xyz", "n": 40, "k": 3, "ell": 2, "epsilon": 0.8, "rho_grid": [0.1, 1.0, 5.0], "trials": 8}))
    out, rep, gp = tmp_path / "c.csv", tmp_path / "c.json", tmp_path / "c.gp"
    args = ["sweep", "--config", str(cfg), "--out", str(out), "--seed", "2", "--report", str(rep), "--gnuplot", str(gp)]
    assert main(args) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "n,k,ell,epsilon,rho,r_count,trials,colorable,undecided,survival,ci_lo,ci_hi"
    assert len(lines) == 4
    first = out.read_text()
    assert main(args) == 0
    assert out.read_text() == first
    assert "c.csv" in gp.read_text()


def test_bad_input_reports_error(tmp_path, capsys):
    assert main(["decide", "--in", str(tmp_path / "missing.txt")]) == 3
    assert "error" in capsys.readouterr().err
