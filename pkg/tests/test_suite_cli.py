import json
import subprocess
import sys

import numpy as np
import pytest

from buzano_lab.cli import main
from buzano_lab.decompositions import Subspace, save_subspace
from buzano_lab.inequalities import evaluate, instance_from_fingerprint, sample_instance
from buzano_lab.linalg import save_matrix
from buzano_lab.suite import SuiteReport, load_report, suite_run, worker_count


def _strip_time(text):
    obj = json.loads(text)
    obj.pop("wall_time")
    return json.dumps(obj, sort_keys=True)


def test_report_round_trip(tmp_path):
    rep = suite_run(["buzano", "duncan_taylor", "omega_eq_norm"], [2, 3], 5, 9, workers=1)
    assert rep.passed and rep.violations == 0
    p = tmp_path / "r.json"
    rep.write(p)
    back = load_report(p)
    assert back == rep
    assert back.dumps() == rep.dumps()
    assert rep.rng_algorithm and rep.tolerances["check_tol"] == 1e-9


def test_worst_fingerprint_rederives_instance():
    rep = suite_run(["gen_buzano", "oblique_buzano"], [3], 10, 4, workers=1)
    for cell in rep.cells:
        fp = cell.worst_instance
        inst = instance_from_fingerprint(fp)
        ref = sample_instance(fp["id"], fp["dim"], fp["seed"], fp["index"], fp["attempt"])
        assert evaluate(cell.id, inst) == evaluate(cell.id, ref)


def test_parallel_matches_serial():
    ids = ["buzano", "omega_polar", "sum_proj"]
    a = suite_run(ids, [2, 4], 6, 11, workers=1)
    b = suite_run(ids, [2, 4], 6, 11, workers=2)
    assert _strip_time(a.dumps()) == _strip_time(b.dumps())


def test_suite_run_rejects_bad_args():
    with pytest.raises(ValueError):
        suite_run(["buzano"], [2], 0, 1)
    with pytest.raises(ValueError):
        suite_run(["nope"], [2], 1, 1)


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("BUZANO_LAB_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("BUZANO_LAB_THREADS", "0")
    assert worker_count() >= 1
    monkeypatch.setenv("BUZANO_LAB_THREADS", "x")
    with pytest.raises(ValueError):
        worker_count()


def test_cli_verify(tmp_path, capsys):
    rep, csv = tmp_path / "out.json", tmp_path / "out.csv"
    args = ["verify", "--suite", "duncan_taylor", "--dims", "2", "--trials", "10", "--seed", "1"]
    assert main(args + ["--report", str(rep), "--csv", str(csv)]) == 0
    obj = json.loads(rep.read_text())
    (cell,) = obj["cells"]
    assert cell["trials"] == 10 and cell["violations"] == 0
    assert abs(cell["min_slack"]) <= 1e-9
    assert csv.read_text().splitlines()[0].startswith("id,dim,trials")
    assert "0 violations" in capsys.readouterr().out


def test_cli_verify_is_byte_identical(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert main(["verify", "--suite", "buzano,omega_square", "--dims", "2,3", "--trials", "5", "--seed", "8", "--report", str(p)]) == 0
    a, b = (p.read_text() for p in paths)
    assert _strip_time(a) == _strip_time(b)
    assert a.replace(str(json.loads(a)["wall_time"]), "") == b.replace(str(json.loads(b)["wall_time"]), "")


def test_cli_verify_reports_violations(tmp_path, monkeypatch, capsys):
    # a failing cell still produces a full report and exit code 1
    import buzano_lab.cli as cli

    def fake(*args, **kw):
        rep = suite_run(["buzano", "cauchy_schwarz"], [2], 3, 1, workers=1)
        rep.cells[0].violations = 2
        return rep

    monkeypatch.setattr(cli, "suite_run", fake)
    rep = tmp_path / "v.json"
    assert main(["verify", "--suite", "buzano", "--dims", "2", "--trials", "3", "--report", str(rep)]) == 1
    obj = json.loads(rep.read_text())
    assert [c["violations"] for c in obj["cells"]] == [2, 0]
    assert "VIOLATION buzano" in capsys.readouterr().err


def test_cli_usage_errors(tmp_path):
    assert main(["verify", "--suite", "bogus_id", "--dims", "2", "--trials", "1"]) == 2
    assert main(["verify", "--suite", "buzano", "--dims", "2,x", "--trials", "1"]) == 2
    assert main(["verify", "--suite", "buzano", "--dims", "2", "--trials", "0"]) == 2
    assert main(["verify", "--suite", "buzano", "--dims", "2", "--trials", "1", "--report", str(tmp_path / "no" / "r.json")]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--seed", "-1"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def _write(tmp_path, name, T):
    p = tmp_path / name
    save_matrix(p, np.asarray(T, dtype=complex))
    return str(p)


def _run(capsys, args):
    code = main(args)
    return code, capsys.readouterr().out.strip()


def test_cli_compute(tmp_path, capsys):
    shift = _write(tmp_path, "shift3.json", np.eye(3, k=-1))
    diag = _write(tmp_path, "diag13.json", np.diag([1.0, 3.0]))
    ident = _write(tmp_path, "identity.json", np.eye(2))
    code, out = _run(capsys, ["compute", "--what", "omega", "--matrix", shift])
    assert code == 0 and json.loads(out) == pytest.approx(1 / np.sqrt(2), abs=1e-12)
    assert out.startswith("0.70710678118654")
    code, out = _run(capsys, ["compute", "--what", "center-of-mass", "--matrix", diag])
    obj = json.loads(out)
    assert obj["gamma"] == pytest.approx([0.5, 0.0], abs=1e-9) and obj["dist"] == pytest.approx(0.5, abs=1e-9)
    code, out = _run(capsys, ["compute", "--what", "omega", "--matrix", ident])
    assert json.loads(out) == 1.0
    for what, expect in (("norm", 3.0), ("min-modulus", 1.0)):
        assert json.loads(_run(capsys, ["compute", "--what", what, "--matrix", diag])[1]) == pytest.approx(expect)
    obj = json.loads(_run(capsys, ["compute", "--what", "dist-scalars", "--matrix", diag])[1])
    assert obj["beta"] == pytest.approx([2, 0], abs=1e-9) and obj["dist"] == pytest.approx(1, abs=1e-9)
    assert json.loads(_run(capsys, ["compute", "--what", "paul", "--matrix", diag, "--matrix2", ident])[1]) == pytest.approx(1, abs=1e-6)
    obj = json.loads(_run(capsys, ["compute", "--what", "polar", "--matrix", shift])[1])
    assert obj["absT"]["n"] == 3


def test_cli_compute_errors(tmp_path, capsys):
    diag = _write(tmp_path, "d.json", np.diag([1.0, 3.0]))
    sing = _write(tmp_path, "z.json", np.zeros((2, 2)))
    assert main(["compute", "--what", "paul", "--matrix", diag, "--matrix2", sing]) == 2
    assert main(["compute", "--what", "omega", "--matrix", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["compute", "--what", "omega", "--matrix", str(bad)]) == 2
    assert main(["compute", "--what", "dixmier", "--matrix", diag]) == 2


def test_cli_dixmier(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    save_subspace(a, Subspace(np.array([[1], [0]], dtype=complex)))
    save_subspace(b, Subspace(np.array([[0.5], [np.sqrt(3) / 2]], dtype=complex)))
    obj = json.loads(_run(capsys, ["compute", "--what", "dixmier", "--subspace", str(a), "--subspace2", str(b)])[1])
    assert obj["cos"] == pytest.approx(0.5) and obj["theta0"] == pytest.approx(np.pi / 3)


def test_cli_alpha(tmp_path, capsys):
    diag = _write(tmp_path, "d.json", np.diag([2.0, 1.0]))
    nil = _write(tmp_path, "n.json", [[0, 1], [0, 0]])
    obj = json.loads(_run(capsys, ["alpha", "member", "--matrix", diag, "--alpha", "0.5"])[1])
    assert obj["member"] and obj["defect"] == pytest.approx(0.5)
    obj = json.loads(_run(capsys, ["alpha", "member", "--matrix", nil, "--alpha", "1+0j"])[1])
    assert not obj["member"] and len(obj["witness"]) == 2
    obj = json.loads(_run(capsys, ["alpha", "region", "--matrix", diag])[1])
    assert obj == {"kind": "positive_interval", "parameters": [0.0, 1.0]}
    obj = json.loads(_run(capsys, ["alpha", "optimal", "--matrix", nil])[1])
    assert obj["member"] is None and obj["distance"] == pytest.approx(1, abs=1e-9)
    assert main(["alpha", "member", "--matrix", diag, "--alpha", "0"]) == 2
    assert main(["alpha", "member", "--matrix", diag]) == 2
    assert main(["alpha", "member", "--matrix", diag, "--alpha", "abc"]) == 2


def test_cli_tightness_and_replay(tmp_path, capsys):
    rep = tmp_path / "t.json"
    assert main(["tightness", "--ineq", "buzano", "--dim", "2", "--restarts", "64", "--seed", "3", "--report", str(rep)]) == 0
    obj = json.loads(rep.read_text())
    assert obj["best_ratio"] >= 0.999
    capsys.readouterr()
    code, out = _run(capsys, ["evaluate", "--ineq", "buzano", "--instance", str(rep)])
    assert code == 0 and abs(json.loads(out)["ratio"] - obj["best_ratio"]) <= 1e-9
    assert main(["tightness", "--ineq", "duncan_taylor", "--dim", "2"]) == 2
    assert main(["tightness", "--ineq", "bogus", "--dim", "2"]) == 2


def test_module_entry_point(tmp_path):
    diag = _write(tmp_path, "d.json", np.diag([1.0, 3.0]))
    out = subprocess.run(
        [sys.executable, "-m", "buzano_lab", "compute", "--what", "norm", "--matrix", diag],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(out.stdout) == 3.0
    bad = subprocess.run([sys.executable, "-m", "buzano_lab", "verify", "--suite", "nope"], capture_output=True, text=True)
    assert bad.returncode == 2 and "unknown" in bad.stderr
