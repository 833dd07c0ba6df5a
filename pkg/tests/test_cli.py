import json
import math
import subprocess
import sys

import pytest

from urequiv.cli import RunConfig, ConfigError, emit_report, format_number, main, run, to_json


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_all_exit_zero(capsys):
    code, out, err = _run(capsys, "check", "--relations", "all", "--n", "300", "--seed", "7")
    assert code == 0
    rep = json.loads(out)
    assert set(rep) >= {"tool_version", "seed", "command", "relations", "wall_ms"}
    assert rep["seed"] == 7 and rep["command"] == "check"
    assert [r["id"] for r in rep["relations"]][0] == "robertson"
    assert all(r["violations"] == 0 and r["n"] == 300 for r in rep["relations"])


def test_region_csv(tmp_path, capsys):
    out_path = tmp_path / "fig1a.csv"
    code, out, _ = _run(capsys, "region", "--theta", "90", "--n", "100000", "--alpha", "1", "--out", str(out_path))
    assert code == 0 and out == ""
    lines = out_path.read_text().splitlines()
    assert lines[0] == "h_a,h_b,purity"
    assert len(lines) == 100_001
    meta = json.loads((tmp_path / "fig1a.csv.meta.json").read_text())
    assert meta["seed"] == 0 and meta["config"]["theta_deg"] == 90


def test_region_csv_stdout(capsys):
    code, out, _ = _run(capsys, "region", "--n", "5", "--seed", "1")
    assert code == 0
    rows = out.splitlines()
    assert rows[0] == "h_a,h_b,purity" and len(rows) == 6


def test_convert_collision(capsys):
    code, out, _ = _run(capsys, "convert", "--direction", "v2h", "--alpha", "2", "--value", "0.75")
    assert code == 0
    assert float(out) == pytest.approx(math.log(8 / 5), abs=1e-15)
    code, out, _ = _run(capsys, "convert", "--direction", "h2v", "--alpha", "2", "--value", out.strip())
    assert float(out) == pytest.approx(0.75, abs=1e-12)


def test_convert_out_of_range(capsys):
    code, _, err = _run(capsys, "convert", "--direction", "h2v", "--value", "3")
    assert code == 2 and "EntropyOutOfRange" in err


def test_minimize(capsys):
    code, out, _ = _run(capsys, "minimize", "--dim", "3", "--restarts", "8", "--seed", "7")
    assert code == 0
    assert abs(json.loads(out)["minimum"] - 7 / 16) < 1e-3


def test_reconstruct(capsys):
    code, out, _ = _run(capsys, "reconstruct", "--dim", "4", "--n", "20", "--seed", "2")
    assert code == 0
    rep = json.loads(out)
    assert {r["id"] for r in rep["relations"]} == {"variance_path", "covariance_path"}


def test_usage_errors(capsys):
    assert _run(capsys, "check", "--relations", "bogus")[0] == 2
    assert _run(capsys, "check", "--n", "-1")[0] == 2
    assert _run(capsys, "region", "--theta", "200")[0] == 2
    assert _run(capsys, "check", "--seed", str(2**64))[0] == 2
    assert _run(capsys, "convert")[0] == 2
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2


def test_threads_env(monkeypatch, capsys):
    monkeypatch.setenv("UR_EQUIV_THREADS", "many")
    code, _, err = _run(capsys, "check", "--n", "1")
    assert code == 2 and "UR_EQUIV_THREADS" in err
    monkeypatch.setenv("UR_EQUIV_THREADS", "1")
    assert _run(capsys, "check", "--n", "20")[0] == 0


def test_violation_exit_code(monkeypatch, capsys):
    import urequiv.cli as cli
    from urequiv.explorer import ScanSummary

    monkeypatch.setattr(
        cli, "scan_violations",
        lambda ids, n, seed, alphas=None: ScanSummary(seed, n, [{"id": "robertson", "n": n, "worst_slack": -1.0, "violations": 3}]),
    )
    code, _, err = _run(capsys, "check", "--relations", "robertson", "--n", "5")
    assert code == 1 and "3 violation" in err


def test_byte_identical_reports(tmp_path, capsys):
    for name in ("a", "b"):
        assert main(["check", "--relations", "robertson,full_qubit", "--n", "100", "--seed", "5",
                     "--no-timing", "--out", str(tmp_path / "r.json")]) == 0
        (tmp_path / "r.json").rename(tmp_path / f"{name}.json")
        assert main(["region", "--n", "300", "--seed", "5", "--no-timing", "--out", str(tmp_path / "r.csv")]) == 0
        (tmp_path / "r.csv").rename(tmp_path / f"{name}.csv")
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_empty_results_json(tmp_path):
    emit_report({"relations": []}, "json", str(tmp_path / "e.json"))
    assert json.loads((tmp_path / "e.json").read_text()) == {"relations": []}


def test_seventeen_digits():
    x = 0.1 + 0.2
    assert format_number(x) == "0.30000000000000004"
    assert float(format_number(math.pi)) == math.pi
    assert format_number(float("nan")) == "null"
    assert json.loads(to_json({"v": [1.0 / 3, 2, None, True]})) == {"v": [1.0 / 3, 2, None, True]}


def test_run_config_rejects_unknown_keys():
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"command": "check", "colour": "blue"})
    cfg = RunConfig.from_dict({"command": "check", "n": 0})
    assert run(cfg) == 0


def test_console_entry_point():
    p = subprocess.run([sys.executable, "-m", "urequiv.cli", "convert", "--value", "1", "--alpha", "0.5"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and float(p.stdout) == pytest.approx(math.log(2))
    assert p.stderr == ""
