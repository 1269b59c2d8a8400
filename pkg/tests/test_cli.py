import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from qubit_metrology import allocator, bounds, cli, verification


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_bound_product_strong(capsys):
    rec = run_json(capsys, "bound", "--family", "product", "--form", "strong", "--n", "1", "--nu", "100",
                   "--T", "1", "--gamma2", "1")
    assert rec["delta_g"] == pytest.approx(0.27183, abs=1e-5)
    assert "dimensionless" not in rec


def test_bound_cat_nodec(capsys):
    rec = run_json(capsys, "bound", "--family", "cat", "--form", "nodec", "--n", "4", "--nu", "25", "--T", "1")
    assert rec["delta_g"] == pytest.approx(0.05, rel=1e-14)


def test_bound_dimensionless(capsys):
    rec = run_json(capsys, "bound", "--T", "1", "--nu", "100", "--gamma2", "1", "--R", "1e4")
    assert rec["dimensionless"] == pytest.approx(10 * math.e, rel=1e-14)


def test_bound_zero_time(capsys):
    code, out, err = run(capsys, "bound", "--family", "cat", "--form", "nodec", "--n", "4", "--nu", "25", "--T", "0")
    assert code == cli.EXIT_INVALID
    assert "diverges" in err
    assert out == ""


@pytest.mark.parametrize(
    "argv, fragment",
    [
        (["bound", "--T", "1", "--mu", "2"], "mu"),
        (["bound", "--T", "1", "--gamma1", "1", "--gamma2", "0.1"], "complete positivity"),
        (["bound", "--nu", "3"], "--T is required"),
        (["bound", "--T", "1", "--family", "squeezed"], "invalid choice"),
        (["optimize", "--tau", "1"], "--R is required"),
    ],
)
def test_validation_errors(capsys, argv, fragment):
    code, _, err = run(capsys, *argv)
    assert code == cli.EXIT_INVALID
    assert fragment in err


def test_optimize_transition(capsys):
    rec = run_json(capsys, "optimize", "--family", "cat", "--R", "1e4", "--tau", "0.5", "--gamma2", "1")
    assert rec["regime"] == "transition"
    assert rec["n_star"] == pytest.approx(2.0)
    assert (rec["n"], rec["nu"]) == (2, 1250)


def test_optimize_without_dephasing(capsys):
    rec = run_json(capsys, "optimize", "--family", "cat", "--R", "1e4", "--tau", "0.5")
    assert rec["regime"] == "low-dec"
    assert rec["T"] == 0.25
    assert rec["dimensionless"] is None


def test_optimize_high_decoherence(capsys):
    rec = run_json(capsys, "optimize", "--family", "cat", "--R", "1e4", "--tau", "5", "--gamma2", "1")
    assert rec["regime"] == "high-dec"
    assert rec["n"] == 1


def test_optimize_infeasible(capsys):
    code, _, err = run(capsys, "optimize", "--R", "10", "--tau", "1")
    assert code == cli.EXIT_INFEASIBLE
    assert "nu_min" in err


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_figure3_defaults(capsys):
    code, out, _ = run(capsys, "figure", "--which", "3", "--grid-num", "20")
    assert code == 0
    header = out.splitlines()[0]
    assert header == "gamma2_tau,sqrt_R_over_gamma2,dimensionless_bound_cat,dimensionless_bound_product,regime"
    rows = read_csv(out)
    assert len(rows) == 20 * 4
    assert sorted({float(r["sqrt_R_over_gamma2"]) for r in rows}) == [10.0, 100.0, 1000.0, 10000.0]


def test_figure2_monotone(capsys):
    code, out, _ = run(capsys, "figure", "--which", "2", "--grid-min", "0.01", "--grid-max", "100", "--grid-num", "40")
    rows = read_csv(out)
    assert out.splitlines()[0] == "gamma2_tau,gamma2_Tp,dimensionless_bound"
    assert len(rows) == 40
    assert np.all(np.diff([float(r["gamma2_Tp"]) for r in rows]) > 0)


def test_figure_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main(["figure", "--which", "3", "--output", str(a)]) == 0
    assert cli.main(["figure", "--which", "3", "--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert b"\r" not in a.read_bytes()


def test_figure_locale_independent(tmp_path):
    out = tmp_path / "de.csv"
    env = {"LC_ALL": "de_DE.UTF-8", "LANG": "de_DE.UTF-8", "PATH": "/usr/bin:/bin"}
    subprocess.run(
        [sys.executable, "-m", "qubit_metrology", "figure", "--which", "2", "--grid-num", "5", "--output", str(out)],
        check=True, env=env,
    )
    assert out.read_text().splitlines()[3].startswith("0.1,")


def test_simulate_sweet_spot(capsys):
    rec = run_json(capsys, "simulate", "--family", "product", "--gamma2", "0", "--gT-sweet", "--nu", "10000",
                   "--seed", "7")
    assert rec["empirical_delta_g"] == pytest.approx(0.01, rel=0.05)
    assert rec["g_true"] == pytest.approx(math.pi / 2)


def test_simulate_default_seed_warns(capsys, caplog):
    code, out, err = run(capsys, "simulate", "--nu", "1000", "--repetitions", "2", "--batch", "5", "--gT-sweet")
    assert code == 0
    assert any("seed" in r.getMessage() and r.levelname == "WARNING" for r in caplog.records)
    assert json.loads(out)["inputs"]["seed"] == 0


def test_simulate_reproducible(capsys):
    argv = ["simulate", "--family", "cat", "--n", "3", "--g", "0.4", "--gamma2", "0.1", "--nu", "2000",
            "--seed", "5", "--repetitions", "3", "--batch", "20"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--n-max", "4")
    assert code == 0
    assert "FAIL" not in out
    assert out.splitlines()[-1].startswith("12/12")


def test_verify_cap(capsys):
    code, _, err = run(capsys, "verify", "--n-max", "7")
    assert code == cli.EXIT_INVALID
    assert "cap" in err


def test_verify_failure_exit_code(capsys, monkeypatch):
    fake = [verification.Check("x", "y", False, "forced")]
    monkeypatch.setattr(verification, "run_all", lambda n_max, tol: fake)
    code, out, _ = run(capsys, "verify")
    assert code == cli.EXIT_VERIFY
    assert "FAIL  x/y" in out


def test_config_precedence(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"family": "cat", "form": "nodec", "n": 4, "nu": 25, "T": 2.0}))
    rec = run_json(capsys, "bound", "--config", str(cfg))
    assert rec["delta_g"] == pytest.approx(0.025)
    rec = run_json(capsys, "bound", "--config", str(cfg), "--T", "1")
    assert rec["delta_g"] == pytest.approx(0.05)


def test_config_dashed_keys(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"R": 1e4, "tau": 0.5, "gamma2": 1.0, "nu-min": 25}))
    rec = run_json(capsys, "optimize", "--config", str(cfg))
    assert rec["inputs"]["nu_min"] == 25


@pytest.mark.parametrize("content", ['{"R": 1, "oops": 2}', "[1, 2]", "{not json"])
def test_config_rejected(tmp_path, capsys, content):
    cfg = tmp_path / "c.json"
    cfg.write_text(content)
    code, _, err = run(capsys, "optimize", "--config", str(cfg))
    assert code == cli.EXIT_INVALID
    assert "config" in err


def test_unknown_flag(capsys):
    code, _, err = run(capsys, "bound", "--T", "1", "--bogus", "2")
    assert code == cli.EXIT_INVALID


def test_bound_roundtrip(capsys):
    rec = run_json(capsys, "bound", "--family", "cat", "--n", "3", "--nu", "7", "--T", "0.4",
                   "--gamma1", "0.2", "--gamma2", "0.5", "--mu", "-0.3", "--R", "100")
    q = cli.bound_query_from_dict(rec["inputs"])
    assert bounds.bound(q, rec["inputs"]["R"]).delta_g == rec["delta_g"]
    assert cli.bound_query_to_dict(q, 100.0) == rec["inputs"]


def test_optimize_roundtrip(capsys):
    rec = run_json(capsys, "optimize", "--R", "5e3", "--tau", "0.3", "--gamma2", "2")
    res = cli.resources_from_dict(rec["inputs"])
    assert allocator.optimize("cat", res).to_dict() == {k: v for k, v in rec.items() if k != "inputs"}


def test_simulate_roundtrip(capsys):
    rec = run_json(capsys, "simulate", "--family", "cat", "--n", "2", "--T", "0.5", "--g", "1.2", "--gT-sweet",
                   "--nu", "500", "--seed", "3", "--repetitions", "2", "--batch", "10")
    cfg = cli.trial_config_from_dict(rec["inputs"])
    assert cfg.g_true == rec["g_true"]
    assert cli.trial_config_to_dict(cfg) == rec["inputs"]


def test_output_file_and_csv(tmp_path, capsys):
    out = tmp_path / "b.csv"
    code, stdout, _ = run(capsys, "bound", "--T", "1", "--nu", "100", "--format", "csv", "--output", str(out))
    assert code == 0 and stdout == ""
    (row,) = read_csv(out.read_text())
    assert float(row["delta_g"]) == pytest.approx(0.1)
    assert row["inputs.family"] == "product"


def test_help_mentions_units(capsys):
    with pytest.raises(SystemExit):
        cli.main(["bound", "--help"])
    out = capsys.readouterr().out
    assert "[1/s]" in out and "[s]" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qubit_metrology", "bound", "--T", "0"], capture_output=True, text=True)
    assert proc.returncode == 2
