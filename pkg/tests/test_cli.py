import json
import subprocess
import sys

import pytest

from toeprod.cli import EXIT_INVALID, EXIT_NUMERIC, EXIT_OK, main

EXAMPLE_F = {"type": "trigpoly", "coeffs": {"0": [-1, 0], "1": [0.5, 0], "-1": [0.5, 0]}}
EXAMPLE_G = {"type": "ar1", "theta": 0.5}


def run(tmp_path, command, cfg, *extra, raw=None):
    path = tmp_path / "cfg.json"
    path.write_text(raw if raw is not None else json.dumps(cfg))
    out = tmp_path / "out"
    code = main([command, "--config", str(path), "--out", str(out), "--quiet", *extra])
    return code, out


def test_example1(tmp_path):
    code, out = run(tmp_path, "example1", {"a": -1, "theta": 0.5})
    assert code == EXIT_OK
    data = json.loads((out / "example1.json").read_text())
    assert data["lambda_min_limit"] == pytest.approx(-1.0)
    assert data["lambda_max_limit"] == pytest.approx(0.0)
    assert data["a_theta"] == pytest.approx(-1.5)
    assert data["b_theta"] == pytest.approx(-0.5)
    assert (out / "example1.json.meta.json").exists()


def test_widom_check(tmp_path):
    code, out = run(tmp_path, "widom-check", {"f": "cos", "g": "cos", "n": 8})
    assert code == EXIT_OK
    header, row = (out / "widom.csv").read_text().splitlines()
    assert header == "n,band,residual"
    assert float(row.split(",")[2]) <= 1e-12


def test_malformed_json_writes_nothing(tmp_path):
    code, out = run(tmp_path, "converge", None, raw='{"f": "cos", "g":')
    assert code == EXIT_INVALID
    assert not out.exists()


@pytest.mark.parametrize(
    "command,cfg",
    [
        ("converge", {"f": "cos", "g": "one", "n_list": [4], "extra": 1}),
        ("spectrum", {"f": "cos", "g": "one"}),
        ("example1", {"a": 0, "theta": 1.5}),
        ("spectrum", {"f": {"type": "bogus"}, "g": "one", "n": 4}),
        ("converge", {"f": "cos", "g": "one", "n_list": [8, 4]}),
    ],
)
def test_invalid_configs(tmp_path, command, cfg, capsys):
    code, out = run(tmp_path, command, cfg)
    assert code == EXIT_INVALID
    assert not out.exists()
    assert "error" in capsys.readouterr().err


def test_numerical_failure_exit_code(tmp_path, capsys):
    code, out = run(tmp_path, "spectrum", {"f": "cos", "g": "cos", "n": 4})
    assert code == EXIT_NUMERIC
    assert "GNotNonnegative" in capsys.readouterr().err
    assert not out.exists()


def test_spectrum_and_essential(tmp_path):
    code, out = run(tmp_path, "spectrum", {"f": EXAMPLE_F, "g": EXAMPLE_G, "n": 16})
    assert code == EXIT_OK
    lines = (out / "spectrum.csv").read_text().splitlines()
    assert lines[0] == "k,eigenvalue" and len(lines) == 18
    code, out = run(tmp_path, "essential", {"f": EXAMPLE_F, "g": EXAMPLE_G})
    data = json.loads((out / "essential.json").read_text())
    assert data["inf_fg"] == pytest.approx(-8 / 9)


def test_converge_with_reference(tmp_path):
    cfg = {"f": EXAMPLE_F, "g": EXAMPLE_G, "n_list": [8, 16],
           "reference": {"example1": {"a": -1, "theta": 0.5}}}
    code, out = run(tmp_path, "converge", cfg)
    assert code == EXIT_OK
    lines = (out / "converge.csv").read_text().splitlines()
    assert lines[0] == "n,lambda_min_n,lambda_max_n,err_min,err_max"
    cfg["reference"] = {"measure_n": 32}
    assert run(tmp_path, "converge", cfg)[0] == EXIT_OK


def test_ldp(tmp_path):
    cfg = {"f": EXAMPLE_F, "g": EXAMPLE_G, "limits": {"lambda_min": -1, "lambda_max": 0},
           "x": {"start": -5, "stop": -0.1, "num": 5}}
    code, out = run(tmp_path, "ldp", cfg)
    assert code == EXIT_OK
    lines = (out / "ldp.csv").read_text().splitlines()
    assert lines[0] == "x,I,J,region"
    assert lines[1].endswith("left-linear")


def test_simulate_is_reproducible_and_seed_overrides(tmp_path):
    cfg = {"f": EXAMPLE_F, "theta": 0.5, "n": 40, "replicates": 3000, "seed": 1,
           "thresholds": [-0.9, -0.5], "limits": {"example1": {"a": -1, "theta": 0.5}}}
    code, out = run(tmp_path, "simulate", cfg)
    assert code == EXIT_OK
    first = (out / "simulate.csv").read_bytes()
    run(tmp_path, "simulate", cfg)
    assert (out / "simulate.csv").read_bytes() == first
    run(tmp_path, "simulate", cfg, "--seed", "2")
    second = (out / "simulate.csv").read_text()
    assert second != first.decode()
    assert second.splitlines()[1].endswith(",40,3000,2")


def test_seed_flag_rejected_for_seedless_command(tmp_path):
    code, _ = run(tmp_path, "example1", {"a": 0, "theta": 0.2}, "--seed", "3")
    assert code == EXIT_INVALID


def test_module_entry_point(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"a": 0.0, "theta": 0.0}))
    proc = subprocess.run(
        [sys.executable, "-m", "toeprod", "example1", "--config", str(cfg), "--out", str(tmp_path / "o")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "lambda_min_limit=-1" in proc.stdout
