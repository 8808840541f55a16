import json

import numpy as np
import pytest

from qmeixner.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_measure_nu_semicircle_csv(capsys):
    code, out, _ = run(capsys, "measure", "--kind", "nu", "--q", "0", "--theta", "0", "--tau", "0",
                       "--x", "0", "--t", "1", "--n", "8", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "node,weight" and len(lines) == 9
    nodes = np.array([float(r.split(",")[0]) for r in lines[1:]])
    np.testing.assert_allclose(nodes, -nodes[::-1], atol=1e-14)


def test_measure_transition_json(capsys):
    code, out, _ = run(capsys, "measure", "--kind", "transition", "--q", "0.5", "--theta", "0.3", "--tau", "0.2",
                       "--x", "0.4", "--s", "0.2", "--t", "1", "--n", "16")
    assert code == 0
    obj = json.loads(out)
    w, y = np.array(obj["weights"]), np.array(obj["nodes"])
    assert w.sum() == pytest.approx(1.0, abs=1e-14)
    assert abs(w @ y - 0.4) < 1e-10


def test_moments_semicircle(capsys):
    code, out, _ = run(capsys, "moments", "--kind", "nu", "--q", "0", "--theta", "0.5", "--tau", "0.5",
                       "--t", "0.5", "--kmax", "4")
    assert code == 0
    obj = json.loads(out)
    assert obj["raw"][1] == pytest.approx(0.5, abs=1e-12)
    assert obj["central"][2] == pytest.approx(1.0, abs=1e-12)
    assert obj["central"][4] == pytest.approx(2.0, abs=1e-12)


@pytest.mark.parametrize("method", ["integral", "basis", "fd"])
def test_generator_y_squared(capsys, method):
    for q in ("-0.5", "0.7"):
        code, out, _ = run(capsys, "generator", "--poly", "0,0,1", "--q", q, "--method", method)
        assert code == 0
        assert json.loads(out)["value"] == pytest.approx(1.0, abs=1e-6 if method == "fd" else 1e-10)


def test_generator_builtin_csv(capsys):
    code, out, _ = run(capsys, "generator", "--builtin", "cauchy", "--format", "csv")
    assert code == 0
    header, row = out.splitlines()
    assert header == "function,method,x,t,value"
    assert abs(float(row.split(",")[-1])) <= 1.0


def test_simulate_deterministic(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("QMEIXNER_OUTPUT_DIR", str(tmp_path))
    args = ["simulate", "--seed", "42", "--paths", "50", "--times", "0,0.5,1", "--format", "csv"]
    assert run(capsys, *args, "-o", "a.csv")[0] == 0
    assert run(capsys, *args, "-o", "b.csv")[0] == 0
    a, b = (tmp_path / "a.csv").read_text(), (tmp_path / "b.csv").read_text()
    assert a == b and a.startswith("path_id,time,value\n")
    assert len(a.splitlines()) == 1 + 50 * 3


def test_converge_csv_and_json(capsys):
    code, out, err = run(capsys, "converge", "--format", "csv")
    assert code == 0
    rows = [r.split(",") for r in out.splitlines()[1:]]
    hs = sorted({float(r[1]) for r in rows}, reverse=True)
    assert hs == [1e-1, 1e-2, 1e-3]
    assert "slopes" in err
    code, out, _ = run(capsys, "converge", "--side", "right")
    obj = json.loads(out)
    assert obj["side"] == "right"
    for k, s in zip(obj["orders"], obj["slopes"]):
        if s is not None and k > 1:
            assert abs(s - 1.0) < 0.2


def test_verify_only_hm(capsys):
    code, out, _ = run(capsys, "verify", "--only", "hm")
    assert code == 0
    report = json.loads(out)
    assert [c["check"] for c in report["checks"]] == ["hm"]
    assert report["pass"] is True


def test_verify_near_boundary_report_well_formed(capsys):
    code, out, _ = run(capsys, "verify", "--q", "0.999999", "--x", "0.4", "--only", "martingale",
                       "--only", "qqq", "--only", "converge")
    assert code in (0, 1)
    report = json.loads(out)
    for c in report["checks"]:
        assert set(c) == {"check", "grid", "max_residual", "tolerance", "pass", "error"}
    assert report["pass"] is (code == 0)


def test_verify_failure_exit_code(capsys, monkeypatch):
    from qmeixner import verify

    monkeypatch.setitem(verify.SUITES, "martingale", (lambda *a: 1.0, 1e-10))
    code, out, _ = run(capsys, "verify", "--only", "martingale", "--q", "0.5", "--x", "0")
    assert code == 1
    assert json.loads(out)["pass"] is False


@pytest.mark.parametrize(
    "argv",
    [
        ["measure", "--q", "1.5"],
        ["measure", "--s", "1", "--t", "0.5"],
        ["measure", "--kind", "nu", "--t", "-1"],
        ["measure", "--n", "0"],
        ["moments", "--n", "2", "--kmax", "9"],
        ["generator", "--builtin", "cauchy", "--method", "basis"],
        ["generator"],
        ["converge", "--h-sweep", "0.1,0.2"],
        ["simulate", "--times", "0,1,0.5"],
        ["verify", "--q", "2"],
        ["bogus"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_numerical_failure_exit_3(capsys, monkeypatch):
    from qmeixner import cli
    from qmeixner.errors import NoConvergence

    def boom(*a, **k):
        raise NoConvergence("no convergence")

    monkeypatch.setattr(cli, "transition_measure", boom)
    code, _, err = run(capsys, "measure")
    assert code == 3 and "numerical failure" in err
