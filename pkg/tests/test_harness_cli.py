"""Exponent fitting, config handling, output formats, and the CLI surface."""

import json
import math
import random

import pytest

from pgt.harness import (ExperimentConfig, FitResult, fit_exponent,
                         parse_config_file, write_csv, write_json)
from pgt.cli import main, parse_gaussian, parse_grid


def test_fit_exact_power_law():
    pts = [(x, x**0.5) for x in (1.0, 10.0, 100.0, 1000.0, 10000.0)]
    f = fit_exponent(pts)
    assert f.slope == pytest.approx(0.5, abs=1e-10)
    assert f.r_squared == pytest.approx(1.0, abs=1e-12)


def test_fit_constant_data():
    f = fit_exponent([(1.0, 3.0), (10.0, 3.0), (100.0, 3.0)])
    assert f.slope == pytest.approx(0.0, abs=1e-12)


def test_fit_noisy_power_law_within_band():
    rng = random.Random(123)
    pts = [(x, x**0.5 * math.exp(rng.gauss(0.0, 0.1)))
           for x in (10.0, 100.0, 1000.0, 10000.0, 100000.0)]
    f = fit_exponent(pts)
    assert abs(f.slope - 0.5) < 0.08
    assert f.r_squared > 0.99


def test_fit_degenerate_inputs():
    with pytest.raises(ValueError):
        fit_exponent([(1.0, 2.0)])
    with pytest.raises(ValueError):
        fit_exponent([(1.0, 2.0), (1.0, 3.0)])
    with pytest.raises(ValueError):
        fit_exponent([(1.0, 2.0), (2.0, -1.0)])
    with pytest.raises(ValueError):
        FitResult(slope=1.0, intercept=0.0, r_squared=2.0,
                  samples=[(1, 1), (2, 2)])


def test_experiment_config_validation():
    ExperimentConfig(seed=0, tolerance=1e-3, threads=4, output_format="csv")
    with pytest.raises(ValueError):
        ExperimentConfig(tolerance=0.0)
    with pytest.raises(ValueError):
        ExperimentConfig(threads=0)
    with pytest.raises(ValueError):
        ExperimentConfig(output_format="yaml")


def test_config_file_parsing(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("# comment\nseed=11\ntol = 0.5\n")
    assert parse_config_file(str(p)) == {"seed": "11", "tol": "0.5"}
    bad = tmp_path / "bad.cfg"
    bad.write_text("just-a-token\n")
    with pytest.raises(ValueError):
        parse_config_file(str(bad))


def test_json_schema_and_csv_header():
    text = write_json({"x": 1})
    obj = json.loads(text)
    assert obj["schema"] == 1 and obj["x"] == 1
    csv_text = write_csv([[1, 2.5]], ["beta_nu", "normalized_error"])
    assert csv_text.splitlines()[0] == "beta_nu,normalized_error"


def test_parse_gaussian():
    cases = {"3": (3, 0), "-5": (-5, 0), "4i": (0, 4), "-i": (0, -1),
             "i": (0, 1), "1-i": (1, -1), "3+2i": (3, 2), "-7+4i": (-7, 4)}
    for text, pair in cases.items():
        assert parse_gaussian(text).pair == pair


def test_parse_grid():
    assert parse_grid("1e2:1e4") == [100.0, 1000.0, 10000.0]
    assert parse_grid("5,50") == [5.0, 50.0]


def test_cli_exponents_contains_67_42(capsys):
    assert main(["exponents", "--theta", "1/6"]) == 0
    out = capsys.readouterr().out
    assert "67/42" in out


def test_cli_exponents_system(capsys):
    assert main(["exponents"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["system"]["pointwise_exponent"] == pytest.approx(1.60023, abs=1e-5)


def test_cli_circle_deterministic(tmp_path):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    args = ["circle", "--m-grid", "1e3:1e4", "--centers", "5", "--seed", "7",
            "--format", "csv"]
    assert main(args + ["--output", str(out1)]) == 0
    assert main(args + ["--output", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_cli_kloosterman(capsys):
    assert main(["kloosterman", "--m", "0", "--n", "0", "--c", "1+i"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["value_re"] == pytest.approx(1.0)


def test_cli_psi_and_interval(capsys, tmp_path):
    assert main(["psi", "--x", "100", "--v", "500", "--format", "csv"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0].startswith("x,psi,main,remainder,constant_used")
    assert main(["interval", "--x", "400", "--nu", "0.7", "--v", "800"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["main"] == pytest.approx(400.0 * 400.0**0.7 + 400.0**1.4 / 2.0)
    assert "normalized_error" in obj


def test_cli_lfun(capsys):
    assert main(["lfun", "--trace", "3", "--v", "800"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["delta"] == "5"
    assert obj["G_V"] == pytest.approx(obj["product"], abs=1e-4)


def test_cli_spectral(capsys, tmp_path):
    p = tmp_path / "eig.txt"
    p.write_text("# source: synthetic\n1.0\n2.0\n3.0\n")
    assert main(["spectral", "--file", str(p), "--t", "2.5", "--x", "1"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["count"] == 2
    assert obj["S_re"] == pytest.approx(2.0)


def test_cli_config_precedence(capsys, tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("x=100\nv=500\n")
    # config supplies x; the command line does not
    assert main(["psi", "--x", "200", "--v", "500", "--config", str(cfg)]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["x"] == 200.0  # explicit flag wins over config
