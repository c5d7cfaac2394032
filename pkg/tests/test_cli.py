import json
import subprocess
import sys

import numpy as np
import pytest

from lpball import ProblemParams, delta_window, linear_kernel, make_space
from lpball.cli import ConfigError, build_config, main, run_experiment

BASE = ["--mode", "ball_continuity", "--pstar", "2.0", "--r", "1.0", "--epsilon", "0.4",
        "--weights", "1,1", "--p-grid", "1.9,2.0,2.1", "--samples", "150", "--seed", "42"]


def run_args(tmp_path, name, extra=(), base=None):
    out = tmp_path / name
    argv = list(base if base is not None else BASE) + list(extra) + ["--out", str(out)]
    report = run_experiment(build_config(argv))
    return out, report


def test_three_rows_and_zero_row(tmp_path):
    out, report = run_args(tmp_path, "sweep.csv")
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "p,in_window,delta0,h1_lower,certified_upper,witness_max_l1,samples,seed"
    assert len(lines) == 4
    ps = [float(line.split(",")[0]) for line in lines[1:]]
    assert ps == sorted(ps) == [1.9, 2.0, 2.1]
    row_2 = lines[2].split(",")
    assert float(row_2[3]) == 0.0  # identical balls: h1_lower is exactly 0
    assert row_2[1] == "true"
    assert report.ok


def test_byte_identical_reruns(tmp_path):
    out1, _ = run_args(tmp_path, "a.csv")
    out2, _ = run_args(tmp_path, "b.csv")
    assert out1.read_bytes() == out2.read_bytes()


def test_json_format(tmp_path):
    out, _ = run_args(tmp_path, "sweep.json", extra=["--format", "json"])
    data = json.loads(out.read_text())
    rows = data["rows"]
    assert len(rows) == 3
    for row in rows:
        assert set(row) == {"p", "in_window", "delta0", "h1_lower", "certified_upper",
                            "witness_max_l1", "samples", "seed"}
    off_window = [r for r in rows if not r["in_window"]]
    assert all(r["certified_upper"] is None for r in off_window)


def test_window_rows_certified(tmp_path):
    led = delta_window(ProblemParams(2.0, 1.0, 2.0, 0.4))
    p_in = 2.0 + led.delta0 / 2
    base = list(BASE)
    base[base.index("--p-grid") + 1] = f"{p_in!r},2.5"
    out, report = run_args(tmp_path, "win.csv", base=base)
    rows = out.read_text().strip().split("\n")[1:]
    first = rows[0].split(",")
    assert first[1] == "true" and float(first[4]) == 0.4
    assert float(first[3]) <= 0.4
    second = rows[1].split(",")
    assert second[1] == "false" and second[4] == ""


def test_sandwich_holds_in_all_rows(tmp_path):
    out, report = run_args(tmp_path, "sweep.csv")
    for line in out.read_text().strip().split("\n")[1:]:
        cells = line.split(",")
        if cells[4] != "":
            assert float(cells[3]) <= float(cells[4]) + 1e-9
    assert report.ok


def test_urysohn_mode(tmp_path):
    sp2 = make_space([1.0, 1.0], 1)
    kpath = tmp_path / "kernel.json"
    kpath.write_text(json.dumps(linear_kernel(np.eye(2), sp2, sp2).to_config()))
    base = ["--mode", "urysohn", "--pstar", "2.0", "--r", "1.0", "--epsilon", "0.4",
            "--p-grid", "2.1", "--samples", "100", "--seed", "1", "--kernel", str(kpath)]
    out, report = run_args(tmp_path, "u.csv", base=base)
    assert report.ok
    rows = out.read_text().strip().split("\n")
    assert len(rows) == 2


def test_config_errors():
    with pytest.raises(ConfigError) as exc:
        build_config(["--mode", "urysohn", "--pstar", "2", "--r", "1", "--epsilon", "0.4",
                      "--weights", "1,1", "--p-grid", "2.1", "--out", "x.csv"])
    assert exc.value.code == "missing_kernel"
    payload = json.loads(exc.value.to_json())
    assert set(payload) == {"code", "message", "field"}

    with pytest.raises(ConfigError):
        build_config(["--mode", "ball_continuity", "--pstar", "2", "--r", "1",
                      "--epsilon", "0.4", "--weights", "1,1", "--p-grid", "0.9,2.1",
                      "--out", "x.csv"])

    with pytest.raises(ConfigError):
        build_config(["--mode", "nonsense", "--pstar", "2", "--r", "1", "--epsilon", "0.4",
                      "--weights", "1,1", "--p-grid", "2.1", "--out", "x.csv"])


def test_epsilon_out_of_range_is_config_error(tmp_path):
    base = list(BASE)
    base[base.index("--epsilon") + 1] = "0.6"  # sigma_star = 0.5
    with pytest.raises(ConfigError) as exc:
        run_args(tmp_path, "bad.csv", base=base)
    assert exc.value.code == "invalid_epsilon"
    assert "sigma_star" in str(exc.value)


def test_main_error_path_emits_json(tmp_path, capsys):
    code = main(["--mode", "urysohn", "--pstar", "2", "--r", "1", "--epsilon", "0.4",
                 "--weights", "1,1", "--p-grid", "2.1", "--out", str(tmp_path / "x.csv")])
    assert code == 2
    err = capsys.readouterr().err.strip()
    payload = json.loads(err)
    assert payload["code"] == "missing_kernel" and payload["field"] == "kernel"


def test_console_entrypoint_subprocess(tmp_path):
    out = tmp_path / "cli.csv"
    cmd = [sys.executable, "-m", "lpball", "--mode", "ball_continuity", "--pstar", "2.0",
           "--r", "1.0", "--epsilon", "0.4", "--weights", "1,1", "--p-grid", "1.95,2.05",
           "--samples", "50", "--seed", "7", "--out", str(out)]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert out.read_text().startswith("p,in_window,")

    bad = subprocess.run(cmd[:6], capture_output=True, text=True)
    assert bad.returncode == 2
    assert json.loads(bad.stderr.strip())["code"] == "invalid_args"
