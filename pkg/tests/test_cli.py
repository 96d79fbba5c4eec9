import math
import subprocess
import sys

import numpy as np
import pytest

from treewalk.cli import main, read_config


def data_rows(path):
    lines = [l for l in path.read_text().splitlines() if not l.startswith("#")]
    header = lines[0].split(",")
    return header, np.array([[float(x) for x in l.split(",")] for l in lines[1:]])


def test_graph_dot_cayley(tmp_path):
    out = tmp_path / "c33.dot"
    assert main(["graph", "--family", "cayley", "--levels", "3", "--central-hopping", "2",
                 "--out-dot", str(out)]) == 0
    text = out.read_text()
    assert text.count("role=") == 22
    assert text.count(" -- ") == 21
    assert text.startswith("// ")
    assert "family=cayley" in text


def test_graph_json(tmp_path):
    from treewalk.graphs import build_spider, from_json

    out = tmp_path / "g.json"
    assert main(["graph", "--branches", "4", "--length", "3", "--central-hopping", "5",
                 "--out-json", str(out)]) == 0
    assert from_json(out.read_text()) == build_spider(4, 3, 5.0)


def test_unitary_csv(tmp_path):
    out = tmp_path / "u.csv"
    assert main(["unitary", "--central-hopping", "10", "--cumulative", "--out-csv", str(out)]) == 0
    text = out.read_text()
    assert "# central_hopping=10.0" in text
    header, rows = data_rows(out)
    assert header == ["t", "P_v1", "P_v7", "cum_v1", "cum_v7"]
    assert rows.shape == (10001, 5)
    assert rows[:, 2].max() == pytest.approx(400 / 90601, rel=1e-6)


def test_unitary_svg(tmp_path):
    svg = tmp_path / "u.svg"
    assert main(["unitary", "--family", "star", "--tmax", "5", "--dt", "0.01",
                 "--out-csv", str(tmp_path / "u.csv"), "--out-svg", str(svg)]) == 0
    text = svg.read_text()
    assert text.startswith("<?xml") and "<polyline" in text and "<!-- family=star -->" in text


def test_deterministic_output(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["unitary", "--family", "cayley", "--state", "cayley-branch", "--tmax", "3"]
    assert main(args + ["--out-csv", str(a)]) == 0
    assert main(args + ["--out-csv", str(b)]) == 0
    assert a.read_bytes().replace(b"a.csv", b"") == b.read_bytes().replace(b"b.csv", b"")


def test_state_file(tmp_path):
    f = tmp_path / "psi.txt"
    f.write_text("0.7071067811865476\n-0.7071067811865476\n0\n0\n")
    out = tmp_path / "z.csv"
    assert main(["unitary", "--family", "star", "--state", f"file:{f}", "--vertices", "4",
                 "--out-csv", str(out)]) == 0
    _, rows = data_rows(out)
    assert rows[:, 1].max() < 1e-12


def test_sweep_J(tmp_path, capsys):
    out = tmp_path / "s.csv"
    traces = tmp_path / "traces"
    assert main(["sweep", "--param", "J", "--values", "5,10,20,40", "--workers", "2",
                 "--out-csv", str(out), "--trace-dir", str(traces), "--log-scale",
                 "--out-svg", str(tmp_path / "s.svg")]) == 0
    header, rows = data_rows(out)
    assert header == ["value", "max_P_center", "slope"]
    assert rows[:, 2][0] == pytest.approx(-2, abs=0.05)
    assert "log-log slope" in capsys.readouterr().out
    assert len(list(traces.glob("trace_J_*.csv"))) == 4


def test_sweep_branches(tmp_path):
    out = tmp_path / "b.csv"
    assert main(["sweep", "--family", "star", "--param", "branches", "--values", "2,3,4",
                 "--out-csv", str(out)]) == 0
    _, rows = data_rows(out)
    np.testing.assert_allclose(rows[:, 1], [1 / 2, 1 / 3, 1 / 4], atol=1e-10)


def test_sweep_omega(tmp_path):
    out = tmp_path / "w.csv"
    assert main(["sweep", "--param", "omega", "--values", "0,0.05", "--tmax", "3",
                 "--out-csv", str(out)]) == 0
    header, rows = data_rows(out)
    assert header == ["value", "max_P_center", "Omega"]
    assert rows[1, 2] > rows[0, 2]


def test_lindblad_multiple_omegas(tmp_path, capsys):
    out = tmp_path / "l.csv"
    assert main(["lindblad", "--omega", "0,0.05", "--tmax", "2", "--subsample", "10",
                 "--out-csv", str(out)]) == 0
    files = sorted(p.name for p in tmp_path.iterdir())
    assert files == ["l_omega0.csv", "l_omega0p05.csv"]
    text = (tmp_path / "l_omega0p05.csv").read_text()
    assert "# dissipator_form=paper" in text and "# J=10" in text
    header, rows = data_rows(tmp_path / "l_omega0p05.csv")
    assert header == ["t"] + [f"P_{v}" for v in range(1, 8)] + ["trace_err"]
    assert rows[-1, 0] == pytest.approx(2.0, abs=2e-3)
    assert rows[:, -1].max() <= 1e-8
    assert "dissipator form: paper" in capsys.readouterr().out


def test_verify_passes(capsys):
    assert main(["verify", "--length", "3", "--j-values", "1,10"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and out.count("PASS") == 6


def test_verify_csv(tmp_path):
    out = tmp_path / "v.csv"
    assert main(["verify", "--family", "star", "--j-values", "1,2", "--out-csv", str(out)]) == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["v_J1.csv", "v_J2.csv"]


def test_verify_failure_exit_code(monkeypatch):
    import treewalk.cli as cli

    monkeypatch.setattr(cli, "VERIFY_TOL", 0.0)
    assert main(["verify", "--family", "star", "--j-values", "1", "--tmax", "1"]) == 1


@pytest.mark.parametrize("argv", [
    ["unitary", "--tmax", "0"],
    ["lindblad", "--omega", "1.5", "--tmax", "1"],
    ["graph", "--family", "tree"],
    ["unitary", "--state", "basis:99"],
    ["unitary", "--state", "nonsense"],
    ["sweep", "--tmax", "1"],
    ["graph", "--family", "cayley", "--coord", "4"],
    ["unitary", "--state", "file:/nonexistent/psi.txt"],
    ["verify", "--family", "cayley"],
    ["nothing"],
])
def test_usage_errors(argv, capsys):
    assert main(argv) == 2


def test_invariant_violation_exit_code():
    assert main(["lindblad", "--omega", "0.5", "--dt", "0.5", "--tmax", "20"]) == 1


def test_config_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nfamily = star\nbranches = 5\ncentral-hopping = 2\ntmax = 1\n"
                   "values = 1,2\n")
    assert read_config(cfg)["central_hopping"] == "2"
    out = tmp_path / "a.csv"
    assert main(["unitary", "--config", str(cfg), "--branches", "4", "--out-csv", str(out)]) == 0
    text = out.read_text()
    assert "# family=star" in text and "# branches=4" in text and "# central_hopping=2.0" in text
    _, rows = data_rows(out)
    assert rows[-1, 0] == pytest.approx(1.0)
    assert rows[:, 2].max() <= 1 / 4 + 1e-12


def test_config_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = red\n")
    assert main(["graph", "--config", str(bad)]) == 2
    bad.write_text("family = bogus\n")
    assert main(["graph", "--config", str(bad)]) == 2
    bad.write_text("no equals sign\n")
    assert main(["graph", "--config", str(bad)]) == 2
    assert main(["graph", "--config", str(tmp_path / "missing.cfg")]) == 2


def test_config_boolean_flag(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("cumulative = true\ntmax = 1\n")
    out = tmp_path / "o.csv"
    assert main(["unitary", "--config", str(cfg), "--out-csv", str(out)]) == 0
    header, _ = data_rows(out)
    assert "cum_v7" in header


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "treewalk", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "verify" in r.stdout
