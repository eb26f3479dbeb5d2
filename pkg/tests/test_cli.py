import json

import pytest

from saflow.cli import main


def run_cli(args):
    try:
        return main(args)
    except SystemExit as exc:  # argparse/config errors surface as SystemExit
        return exc.code


def test_solve_writes_trace_and_summary(tmp_path):
    out = tmp_path / "run"
    code = run_cli(["solve", "--n", "32", "--m", "192", "--field", "real",
                    "--beta", "0.5", "--mu", "0.6", "--max-iter", "2000",
                    "--init", "random", "--seed", "7", "--out", str(out)])
    assert code == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["success"] is True
    assert summary["final_rel_err"] <= 1e-5
    lines = (out / "trace.csv").read_text().splitlines()
    assert lines[0] == "iter,grad_norm,rel_err"
    assert summary["iters"] == int(lines[-1].split(",")[0])


def test_solve_deterministic_outputs(tmp_path):
    args = ["solve", "--n", "24", "--m", "144", "--seed", "3"]
    a, b = tmp_path / "a", tmp_path / "b"
    assert run_cli(args + ["--out", str(a)]) == 0
    assert run_cli(args + ["--out", str(b)]) == 0
    assert (a / "trace.csv").read_bytes() == (b / "trace.csv").read_bytes()
    assert (a / "summary.json").read_bytes() == (b / "summary.json").read_bytes()


def test_solve_rejects_zero_m(tmp_path):
    code = run_cli(["solve", "--n", "16", "--m", "0", "--out", str(tmp_path)])
    assert code == 2


def test_solve_unknown_algorithm(tmp_path):
    code = run_cli(["solve", "--n", "16", "--m", "64", "--algorithm", "lift",
                    "--out", str(tmp_path)])
    assert code == 2


@pytest.mark.filterwarnings("ignore:overflow:RuntimeWarning")
@pytest.mark.filterwarnings("ignore:invalid value:RuntimeWarning")
def test_solve_divergence_exits_1_with_trace(tmp_path):
    code = run_cli(["solve", "--n", "16", "--m", "80", "--mu", "50", "--seed", "1",
                    "--out", str(tmp_path)])
    assert code == 1
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["reason"] == "diverged"
    assert summary["success"] is False
    assert (tmp_path / "trace.csv").exists()


def test_sweep_success_mode(tmp_path):
    cfg = {
        "mode": "success", "n": 16, "m_over_n": [2, 6], "trials": 4,
        "mu": 0.6, "beta": 0.5, "max_iter": 800, "base_seed": 0,
        "algorithms": ["saf-random"],
    }
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    assert run_cli(["sweep", str(path), "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "success.csv").read_text().splitlines()
    assert lines[0] == "m_over_n,algorithm,success_rate,trials"
    assert len(lines) == 3


def test_sweep_beta_mode(tmp_path):
    cfg = {
        "mode": "beta", "n": 12, "trials": 2, "mu": 0.6, "max_iter": 500,
        "beta_grid": [0.5], "m_over_n_random": 6, "m_over_n_spectral": 4,
    }
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    assert run_cli(["sweep", str(path), "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "beta.csv").read_text().splitlines()
    assert lines[0] == "beta,init,success_rate"
    assert len(lines) == 3


def test_sweep_schema_violation_reports_path(tmp_path, capsys):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"mode": "success", "n": 16, "m_over_n": []}))
    assert run_cli(["sweep", str(path), "--out", str(tmp_path)]) == 2
    err = capsys.readouterr().err
    assert "m_over_n" in err


def test_sweep_missing_required_key(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"mode": "success"}))
    assert run_cli(["sweep", str(path), "--out", str(tmp_path)]) == 2


def test_sweep_unknown_key_rejected(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"mode": "success", "n": 16, "stepsize": 0.6}))
    assert run_cli(["sweep", str(path), "--out", str(tmp_path)]) == 2


def test_bench_deterministic_without_timing(tmp_path):
    cfg = {"n": 16, "m_over_n": 8, "trials": 3, "mu": 0.8, "max_iter": 1000,
           "algorithms": ["saf-random", "taf"]}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    a, b = tmp_path / "a", tmp_path / "b"
    assert run_cli(["bench", str(path), "--out", str(a), "--no-timing"]) == 0
    assert run_cli(["bench", str(path), "--out", str(b), "--no-timing"]) == 0
    assert (a / "iterations.csv").read_bytes() == (b / "iterations.csv").read_bytes()
    header = (a / "iterations.csv").read_text().splitlines()[0]
    assert header == "algorithm,init,threshold,median_iters,mean_seconds"


def test_bench_unknown_algorithm(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"n": 16, "m_over_n": 8, "algorithms": ["newton"]}))
    assert run_cli(["bench", str(path), "--out", str(tmp_path)]) == 2


def test_verify_appendix(tmp_path):
    assert run_cli(["verify", "appendix", "--quick", "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "verify_appendix.csv").read_text().splitlines()
    assert lines[0] == "check_id,input,expected,actual,tolerance,pass"
    assert any("sqrt_gap_poly_at_two_thirds" in line for line in lines)


def test_verify_unknown_suite(tmp_path):
    assert run_cli(["verify", "poset", "--out", str(tmp_path)]) == 2


def test_verify_calculus_quick(tmp_path):
    assert run_cli(["verify", "calculus", "--quick", "--out", str(tmp_path)]) == 0
