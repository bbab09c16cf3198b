"""
Subcommand bodies for main.py.

Each command takes a validated config (where it needs one), writes its
artifacts under the output directory and returns a process exit code.
Configuration problems are raised, not returned; main.py maps them to
EXIT_CONFIG_ERROR.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional, Sequence

from coding.galois import GaloisField
from env.scenario import ConfigError, ExperimentConfig, SweepParameter
from infra.logger import get_logger, timed
from mdp.solver import Policy, solve_policy
from mdp.stationary import analyze

from .experiments import (
    paired_win_rate,
    run_replications,
    summarize,
    sweep,
    write_event_logs,
    write_metrics_csv,
    write_summary_csv,
    write_sweep_csv,
)
from .observability import logfire, trace_solve
from .validation import SUITE_NAMES, run_suites

log = get_logger(__name__)

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_CONFIG_ERROR = 2

POLICY_FILE = "policy.json"
STATIONARY_FILE = "stationary.json"
METRICS_FILE = "metrics.csv"
SUMMARY_FILE = "summary.csv"


def _output_dir(config: ExperimentConfig, output_dir: str | Path | None) -> Path:
    path = Path(output_dir or config.output_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def cmd_solve(
    config: ExperimentConfig,
    output_dir: str | Path | None = None,
    *,
    rho: Optional[float] = None,
    epsilon: Optional[float] = None,
) -> int:
    """Solve the relay MDP at the config's β and export the policy."""
    overrides = {}
    if rho is not None:
        overrides["rho"] = rho
    if epsilon is not None:
        overrides["epsilon"] = epsilon
    if overrides:
        config = config.clone(**overrides)

    with trace_solve("value-iteration", config.beta), timed(log, "Value iteration"):
        policy = solve_policy(config.mdp_model(), config.epsilon)

    path = policy.save_json(_output_dir(config, output_dir) / POLICY_FILE)
    logfire.info("policy_solved", rho=config.rho, epsilon=config.epsilon, iterations=policy.iterations)
    print(f"iterations={policy.iterations} epsilon={config.epsilon:g} rho={config.rho:g}")
    for s, a, v in policy.triples():
        print(f"  state={s:>3} action={a:+.3g} value={v:.6g}")
    print(f"policy written to {path}")
    return EXIT_OK


def load_policy(path: str | Path) -> Policy:
    """
    Raises:
        ConfigError: the file is missing or does not hold a policy export
    """
    path = Path(path)
    try:
        return Policy.load_json(path)
    except FileNotFoundError as exc:
        raise ConfigError(f"Policy file not found: {path}") from exc
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"Policy file {path} is unreadable: {exc}") from exc


def cmd_stationary(
    config: ExperimentConfig,
    output_dir: str | Path | None = None,
    *,
    policy_path: str | Path | None = None,
) -> int:
    """
    Classify the chain of a policy, report its limiting distribution and s†.

    Uses `policy_path`, else policy.json in the output directory, else a
    freshly solved policy.
    """
    out = _output_dir(config, output_dir)
    if policy_path is None and (out / POLICY_FILE).exists():
        policy_path = out / POLICY_FILE
    if policy_path is not None:
        policy = load_policy(policy_path)
    else:
        policy = solve_policy(config.mdp_model(), config.epsilon)

    report = analyze(policy)
    chain = report.chain
    path = report.save_json(out / STATIONARY_FILE)

    print(f"class={chain.chain_class.value}")
    print(f"residual={chain.stationarity_residual():.3e}")
    print("sigma=" + " ".join(f"{p:.6g}" for p in chain.sigma))
    if chain.analysis is not None:
        print(f"absorbing_states={(chain.analysis.absorbing + 1).tolist()} zeta={chain.analysis.zeta:.6g}")
    print(f"s_dagger={report.initial_state} coverage={report.initial_coverage:.6g}")
    print(f"report written to {path}")
    return EXIT_OK


def cmd_simulate(
    config: ExperimentConfig,
    output_dir: str | Path | None = None,
    *,
    workers: int = 1,
) -> int:
    """Run every (strategy, seed) replication; write metrics, summary and event logs."""
    out = _output_dir(config, output_dir)
    with timed(log, f"Simulation of {len(config.strategies)}×{len(config.seeds)} runs"):
        results = run_replications(config, workers=workers)

    write_metrics_csv(results, out / METRICS_FILE)
    summaries = summarize(results)
    write_summary_csv(summaries, out / SUMMARY_FILE)
    if config.event_log:
        write_event_logs(results, out)

    mismatches = sum(r.mismatches for r in results)
    if mismatches:
        log.error("%d decodes differed from the source data", mismatches)

    print(f"{'strategy':<10} {'goodput':>12} {'scr':>8} {'power':>8} {'links':>9} {'alg_conn':>9} {'radius_m':>9}")
    for s in summaries:
        print(
            f"{s.strategy:<10} {s.goodput_mbps:>12.3f} {s.scr:>8.3f} {s.power:>8.2f} "
            f"{s.links:>9.1f} {s.alg_conn:>9.4f} {s.mean_radius_m:>9.2f}"
        )
    rate = paired_win_rate(results, "proposed", "myopic")
    if rate is not None:
        print(f"proposed beats myopic on goodput in {rate:.0%} of seeds")
    print(f"metrics written to {out / METRICS_FILE}")
    return EXIT_OK


def cmd_sweep(
    config: ExperimentConfig,
    parameter: SweepParameter,
    output_dir: str | Path | None = None,
    *,
    workers: int = 1,
) -> int:
    """Evaluate one parameter grid and write sweep_<parameter>.csv."""
    out = _output_dir(config, output_dir)
    points = sweep(config, parameter, workers=workers)
    path = write_sweep_csv(points, out / f"sweep_{parameter}.csv")
    for point in points:
        print(",".join(point.csv_fields()))
    print(f"sweep written to {path}")
    return EXIT_OK


def cmd_validate(
    suites: Sequence[str] = SUITE_NAMES,
    *,
    inject_gf_fault: bool = False,
    workers: int = 1,
) -> int:
    """Run the self-check suites; nonzero exit when any check fails."""
    field = GaloisField.get(8).corrupted() if inject_gf_fault else None
    if inject_gf_fault:
        log.warning("Validating against a deliberately corrupted GF(2^8) table")
    results = run_suites(suites, field=field, workers=workers)
    failed = [r for r in results if not r.passed]
    for result in results:
        print(result)
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_VALIDATION_FAILED if failed else EXIT_OK
