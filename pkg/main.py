"""Command-line entry point: solve, stationary, simulate, sweep and validate."""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from dotenv import load_dotenv
from pydantic import ValidationError

from env.scenario import STRATEGY_ORDER, ConfigError, ExperimentConfig, describe_validation_error
from infra.logger import DEFAULT_LOGFILE, configure_logging, get_logger
from mdp.solver import ConvergenceError
from runtime.commands import (
    EXIT_CONFIG_ERROR,
    cmd_simulate,
    cmd_solve,
    cmd_stationary,
    cmd_sweep,
    cmd_validate,
)
from runtime.logfire_config import configure_logfire
from runtime.validation import ALL_SUITES, SUITE_NAMES
from scenarios import PRESETS, get_preset

log = get_logger(__name__)


def _add_config_options(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--config", help="Path to an experiment config JSON file")
    source.add_argument(
        "--preset",
        choices=sorted(PRESETS),
        default=None,
        help="Built-in experiment preset (default: numeric-study)",
    )
    parser.add_argument("--output-dir", help="Directory for result files (default: the config's output_dir)")
    parser.add_argument("--seeds", type=int, nargs="+", help="Replication seeds")
    parser.add_argument("--strategies", nargs="+", choices=STRATEGY_ORDER, help="Strategies to simulate")
    parser.add_argument("--horizon", type=int, help="Time steps per replication")
    parser.add_argument("--workers", type=int, default=1, help="Parallel replications (default: 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncformation",
        description="MDP-driven network formation for RLNC ad hoc networks.",
    )
    parser.add_argument("--log-level", default=None, help="Logging level (default: NCF_LOG_LEVEL or INFO)")
    parser.add_argument("--log-json", action="store_true", help="Emit JSON log lines")
    parser.add_argument("--log-file", default=str(DEFAULT_LOGFILE), help="Log file; 'none' disables file output")

    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="Solve the relay MDP and export the policy")
    _add_config_options(solve)
    solve.add_argument("--rho", type=float, help="Discount factor override")
    solve.add_argument("--epsilon", type=float, help="Optimality level override")

    stationary = sub.add_parser("stationary", help="Chain class, limiting distribution and initial state")
    _add_config_options(stationary)
    stationary.add_argument("--policy", help="Policy JSON written by 'solve'")

    simulate = sub.add_parser("simulate", help="Run the network simulation for every strategy and seed")
    _add_config_options(simulate)

    sweep = sub.add_parser("sweep", help="Evaluate a parameter grid")
    _add_config_options(sweep)
    sweep.add_argument("parameter", choices=("omega", "beta", "rho", "area"))

    validate = sub.add_parser("validate", help="Run the self-check suites")
    validate.add_argument(
        "--suites",
        nargs="+",
        choices=ALL_SUITES,
        default=list(SUITE_NAMES),
        help="Suites to run (default: all but the slow trends suite)",
    )
    validate.add_argument("--workers", type=int, default=1, help="Parallel replications for the trends suite")
    validate.add_argument("--inject-gf-fault", action="store_true", help=argparse.SUPPRESS)

    return parser


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    """
    Config from --config or --preset, with command-line overrides applied.

    Raises:
        ConfigError: missing or malformed config file, unknown preset
        pydantic.ValidationError: overrides or file keys fail validation
    """
    if args.config:
        config = ExperimentConfig.load_json(args.config)
    else:
        config = get_preset(args.preset or "numeric-study")

    overrides = {}
    if args.seeds:
        overrides["seeds"] = args.seeds
    if args.strategies:
        overrides["strategies"] = args.strategies
    if args.horizon is not None:
        overrides["horizon"] = args.horizon
    if args.output_dir:
        overrides["output_dir"] = args.output_dir
    return config.clone(**overrides) if overrides else config


def run(args: argparse.Namespace) -> int:
    if args.command == "validate":
        if args.workers < 1:
            raise ConfigError(f"--workers must be at least 1, got {args.workers}")
        return cmd_validate(args.suites, inject_gf_fault=args.inject_gf_fault, workers=args.workers)

    config = resolve_config(args)
    if args.workers < 1:
        raise ConfigError(f"--workers must be at least 1, got {args.workers}")
    log.info("Running '%s' with %s", args.command, config)

    if args.command == "solve":
        return cmd_solve(config, rho=args.rho, epsilon=args.epsilon)
    if args.command == "stationary":
        return cmd_stationary(config, policy_path=args.policy)
    if args.command == "simulate":
        return cmd_simulate(config, workers=args.workers)
    if args.command == "sweep":
        return cmd_sweep(config, args.parameter, workers=args.workers)
    raise ConfigError(f"Unknown command '{args.command}'")


def main(argv: Sequence[str] | None = None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)

    logfile = None if str(args.log_file).lower() == "none" else args.log_file
    configure_logging(args.log_level, json=args.log_json, logfile=logfile)
    configure_logfire()

    try:
        return run(args)
    except ValidationError as exc:
        log.error("Invalid configuration: %s", describe_validation_error(exc))
    except ConfigError as exc:
        log.error("%s", exc)
    except ConvergenceError as exc:
        log.error("Solver failed: %s", exc)
    except OSError as exc:
        log.error("I/O failure: %s", exc)
    return EXIT_CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())
