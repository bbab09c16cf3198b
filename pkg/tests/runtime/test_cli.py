import csv

import pytest

import main as cli
import runtime.commands as commands
from mdp.solver import ConvergenceError
from runtime.commands import EXIT_CONFIG_ERROR, EXIT_OK, EXIT_VALIDATION_FAILED


def _main(*argv: str) -> int:
    return cli.main(["--log-file", "none", *argv])


def _read_csv(path):
    with path.open(newline="", encoding="utf-8") as handle:
        return list(csv.reader(handle))


def test_simulate_writes_one_row_per_strategy(tmp_path):
    code = _main("simulate", "--horizon", "1", "--seeds", "0", "--output-dir", str(tmp_path))
    assert code == EXIT_OK
    rows = _read_csv(tmp_path / "metrics.csv")
    assert rows[0] == ["time", "goodput_mbps", "scr", "power", "links", "alg_conn", "strategy", "seed"]
    assert [(r[0], r[6], r[7]) for r in rows[1:]] == [
        ("0", "proposed", "0"),
        ("0", "myopic", "0"),
        ("0", "fixed", "0"),
    ]
    summary = _read_csv(tmp_path / "summary.csv")
    assert [r[0] for r in summary[1:]] == ["proposed", "myopic", "fixed"]


def test_simulate_is_byte_identical_across_runs(tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    for out in (first, second):
        assert _main("simulate", "--horizon", "5", "--seeds", "0", "1", "--output-dir", str(out)) == EXIT_OK
    assert (first / "metrics.csv").read_bytes() == (second / "metrics.csv").read_bytes()
    assert (first / "summary.csv").read_bytes() == (second / "summary.csv").read_bytes()


def test_parallel_workers_match_serial_output(tmp_path):
    serial, parallel = tmp_path / "serial", tmp_path / "parallel"
    args = ("simulate", "--horizon", "3", "--seeds", "0", "1", "--strategies", "proposed", "fixed")
    assert _main(*args, "--output-dir", str(serial)) == EXIT_OK
    assert _main(*args, "--workers", "2", "--output-dir", str(parallel)) == EXIT_OK
    assert (serial / "metrics.csv").read_bytes() == (parallel / "metrics.csv").read_bytes()


def test_solve_then_stationary_uses_the_exported_policy(tmp_path, capsys):
    assert _main("solve", "--output-dir", str(tmp_path)) == EXIT_OK
    assert (tmp_path / "policy.json").exists()
    assert _main("stationary", "--output-dir", str(tmp_path)) == EXIT_OK
    assert (tmp_path / "stationary.json").exists()
    out = capsys.readouterr().out
    assert "class=" in out and "s_dagger=" in out


def test_validate_field_axioms_passes(capsys):
    assert _main("validate", "--suites", "field-axioms") == EXIT_OK
    assert "[FAIL]" not in capsys.readouterr().out


def test_injected_field_fault_fails_validation(capsys):
    assert _main("validate", "--suites", "field-axioms", "--inject-gf-fault") == EXIT_VALIDATION_FAILED
    assert "[FAIL] field-axioms/mul-matches-clmul" in capsys.readouterr().out


def test_missing_policy_file_is_a_config_error(tmp_path):
    code = _main("stationary", "--policy", str(tmp_path / "missing.json"), "--output-dir", str(tmp_path))
    assert code == EXIT_CONFIG_ERROR


def test_corrupt_policy_file_is_a_config_error(tmp_path):
    bad = tmp_path / "policy.json"
    bad.write_text("{not json")
    assert _main("stationary", "--policy", str(bad), "--output-dir", str(tmp_path)) == EXIT_CONFIG_ERROR


def test_invalid_override_is_a_config_error(tmp_path):
    assert _main("solve", "--rho", "1", "--output-dir", str(tmp_path)) == EXIT_CONFIG_ERROR
    assert _main("simulate", "--horizon", "0", "--output-dir", str(tmp_path)) == EXIT_CONFIG_ERROR


def test_missing_config_file_is_a_config_error(tmp_path):
    assert _main("simulate", "--config", str(tmp_path / "absent.json")) == EXIT_CONFIG_ERROR


def test_rho_sweep_iterations_grow(tmp_path):
    assert _main("sweep", "rho", "--output-dir", str(tmp_path)) == EXIT_OK
    rows = _read_csv(tmp_path / "sweep_rho.csv")
    assert rows[0] == ["value", "iterations", "final_residual"]
    iterations = [int(r[1]) for r in rows[1:]]
    assert len(iterations) == 4
    assert iterations == sorted(iterations) and len(set(iterations)) == 4


def test_unknown_subcommand_exits_through_argparse():
    with pytest.raises(SystemExit):
        _main("transmogrify")


def test_solver_divergence_maps_to_config_error(tmp_path, monkeypatch):
    def _fail(*_args, **_kwargs):
        raise ConvergenceError("Value iteration did not reach residual 1e-09 in 1 iterations")

    monkeypatch.setattr(commands, "solve_policy", _fail)
    assert _main("solve", "--output-dir", str(tmp_path)) == EXIT_CONFIG_ERROR
    assert not (tmp_path / "policy.json").exists()
