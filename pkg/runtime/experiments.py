"""
Experiment orchestration: replications, summaries and parameter sweeps.

Replications are independent (strategy, seed) runs; with workers > 1 they
fan out over a process pool. Results carry their keys and are sorted by
strategy order, seed and time before anything is written, so output files
do not depend on scheduling.
"""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from env import NetworkEnv, generate_network, start_from
from env.mechanics import CSV_COLUMNS, MetricsRow, graph_diameter, links_of, topology_graph
from env.scenario import STRATEGY_ORDER, ExperimentConfig, SweepParameter
from env.world import NetworkState
from infra.logger import get_logger
from mdp.solver import solve_policy

from .observability import logfire, trace_replication, trace_solve, trace_sweep
from .runner import SimulationRunner

log = get_logger(__name__)

SUMMARY_COLUMNS = (
    "strategy",
    "runs",
    "goodput_mbps",
    "scr",
    "power",
    "links",
    "alg_conn",
    "mean_radius_m",
    "efficiency_mbps_per_dbm",
)
NETWORK_SWEEP_COLUMNS = ("value", "links", "alg_conn", "goodput_mbps", "scr")
RHO_SWEEP_COLUMNS = ("value", "iterations", "final_residual")


def _fmt(value: float) -> str:
    return f"{value:.10g}"


# ============================================================================
# REPLICATIONS
# ============================================================================

@dataclass
class ReplicationResult:
    """Rows and event lines of one (strategy, seed) run."""

    strategy: str
    seed: int
    rows: List[MetricsRow]
    events: List[str] = field(default_factory=list)
    mismatches: int = 0

    @property
    def sort_key(self) -> tuple[int, int]:
        return (_strategy_rank(self.strategy), self.seed)

    def mean(self, metric: str) -> float:
        if not self.rows:
            return 0.0
        return float(np.mean([getattr(r, metric) for r in self.rows]))


def _strategy_rank(strategy: str) -> int:
    return STRATEGY_ORDER.index(strategy) if strategy in STRATEGY_ORDER else len(STRATEGY_ORDER)


def run_replication(config: ExperimentConfig, strategy: str, seed: int) -> ReplicationResult:
    """Simulate one strategy on one seed for the config's horizon."""
    with trace_replication(strategy, seed):
        runner = SimulationRunner(config, strategy, seed)
        runner.run()
    result = ReplicationResult(
        strategy, seed, runner.rows, runner.events, runner.network.ledger.mismatches
    )
    logfire.info(
        "replication_done",
        strategy=strategy,
        seed=seed,
        goodput_mbps=result.mean("goodput_mbps"),
        scr=result.mean("scr"),
    )
    log.debug(
        "%s seed=%d: goodput=%.3f Mbps scr=%.3f links=%.1f",
        strategy, seed, result.mean("goodput_mbps"), result.mean("scr"), result.mean("links"),
    )
    return result


def _run_from_json(payload: Dict[str, Any], strategy: str, seed: int) -> ReplicationResult:
    # process-pool entry point; configs cross the boundary as plain dicts
    return run_replication(ExperimentConfig.from_json_dict(payload), strategy, seed)


def run_replications(
    config: ExperimentConfig,
    *,
    strategies: Sequence[str] | None = None,
    seeds: Sequence[int] | None = None,
    workers: int = 1,
) -> List[ReplicationResult]:
    """
    Every (strategy, seed) run of a config, sorted by strategy order then seed.

    Raises:
        ValueError: workers < 1
    """
    if workers < 1:
        raise ValueError(f"workers must be at least 1, got {workers}")
    strategies = list(strategies or config.strategies)
    seeds = list(config.seeds if seeds is None else seeds)
    jobs = [(s, seed) for s in strategies for seed in seeds]

    if workers == 1 or len(jobs) == 1:
        results = [run_replication(config, s, seed) for s, seed in jobs]
    else:
        payload = config.to_json_dict()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_from_json, payload, s, seed) for s, seed in jobs]
            results = [f.result() for f in futures]

    return sorted(results, key=lambda r: r.sort_key)


# ============================================================================
# SUMMARIES
# ============================================================================

@dataclass(frozen=True)
class StrategySummary:
    """Run means of one strategy, averaged over its seeds."""

    strategy: str
    runs: int
    goodput_mbps: float
    scr: float
    power: float
    links: float
    alg_conn: float
    mean_radius_m: float

    @property
    def efficiency(self) -> float:
        """Goodput per dBm of transmit power."""
        return self.goodput_mbps / self.power if self.power > 0 else 0.0

    def csv_fields(self) -> tuple[str, ...]:
        return (
            self.strategy,
            str(self.runs),
            _fmt(self.goodput_mbps),
            _fmt(self.scr),
            _fmt(self.power),
            _fmt(self.links),
            _fmt(self.alg_conn),
            _fmt(self.mean_radius_m),
            _fmt(self.efficiency),
        )


def summarize(results: Iterable[ReplicationResult]) -> List[StrategySummary]:
    by_strategy: Dict[str, List[ReplicationResult]] = {}
    for result in results:
        by_strategy.setdefault(result.strategy, []).append(result)

    summaries = []
    for strategy in sorted(by_strategy, key=_strategy_rank):
        runs = by_strategy[strategy]

        def _avg(metric: str) -> float:
            return float(np.mean([r.mean(metric) for r in runs]))

        summaries.append(
            StrategySummary(
                strategy=strategy,
                runs=len(runs),
                goodput_mbps=_avg("goodput_mbps"),
                scr=_avg("scr"),
                power=_avg("power"),
                links=_avg("links"),
                alg_conn=_avg("alg_conn"),
                mean_radius_m=_avg("mean_radius_m"),
            )
        )
    return summaries


def paired_win_rate(
    results: Iterable[ReplicationResult],
    challenger: str,
    baseline: str,
    metric: str = "goodput_mbps",
) -> Optional[float]:
    """
    Share of common seeds where the challenger's run mean beats the baseline's.

    None when the two strategies share no seed.
    """
    means: Dict[str, Dict[int, float]] = {challenger: {}, baseline: {}}
    for r in results:
        if r.strategy in means:
            means[r.strategy][r.seed] = r.mean(metric)
    common = sorted(set(means[challenger]) & set(means[baseline]))
    if not common:
        return None
    wins = sum(means[challenger][s] > means[baseline][s] for s in common)
    return wins / len(common)


# ============================================================================
# OUTPUT FILES
# ============================================================================

def _writer(handle) -> Any:
    return csv.writer(handle, lineterminator="\n")


def write_metrics_csv(results: Iterable[ReplicationResult], path: str | Path) -> Path:
    """One row per step per run, sorted by strategy order, seed and time."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    ordered = sorted(results, key=lambda r: r.sort_key)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = _writer(handle)
        writer.writerow(CSV_COLUMNS)
        for result in ordered:
            for row in sorted(result.rows, key=lambda r: r.time):
                writer.writerow(row.csv_fields(result.strategy, result.seed))
    return path


def write_summary_csv(summaries: Iterable[StrategySummary], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = _writer(handle)
        writer.writerow(SUMMARY_COLUMNS)
        for summary in summaries:
            writer.writerow(summary.csv_fields())
    return path


def write_event_logs(results: Iterable[ReplicationResult], directory: str | Path) -> List[Path]:
    """events_<strategy>_<seed>.log for every run that recorded events."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for result in results:
        if not result.events:
            continue
        path = directory / f"events_{result.strategy}_{result.seed}.log"
        path.write_text("\n".join(result.events) + "\n", encoding="utf-8")
        written.append(path)
    return written


# ============================================================================
# SWEEPS
# ============================================================================

@dataclass(frozen=True)
class SweepPoint:
    """
    One grid point of a sweep.

    Network sweeps (omega, beta, area) fill the run means; the rho sweep
    fills the iteration count and final residual of value iteration.
    """

    parameter: str
    value: float
    links: float = 0.0
    alg_conn: float = 0.0
    goodput_mbps: float = 0.0
    scr: float = 0.0
    iterations: int = 0
    final_residual: float = 0.0

    def csv_fields(self) -> tuple[str, ...]:
        if self.parameter == "rho":
            return (_fmt(self.value), str(self.iterations), _fmt(self.final_residual))
        return (
            _fmt(self.value),
            _fmt(self.links),
            _fmt(self.alg_conn),
            _fmt(self.goodput_mbps),
            _fmt(self.scr),
        )


def config_at(config: ExperimentConfig, parameter: SweepParameter, value: float) -> ExperimentConfig:
    """The config of one sweep point; β sweeps hold β fixed for the whole run."""
    if parameter == "omega":
        return config.clone(omega=value)
    if parameter == "beta":
        return config.clone(beta=value, dynamic=False)
    if parameter == "area":
        return config.with_area(value)
    if parameter == "rho":
        return config.clone(rho=value)
    raise ValueError(f"Unknown sweep parameter '{parameter}'")


def sweep(
    config: ExperimentConfig,
    parameter: SweepParameter,
    *,
    strategy: str = "proposed",
    workers: int = 1,
) -> List[SweepPoint]:
    """
    Evaluate the config over its sweep grid for `parameter`.

    Raises:
        ConfigError: the grid is empty
    """
    grid = config.sweep_grid(parameter)
    points = []
    for value in grid:
        with trace_sweep(parameter, value):
            point_config = config_at(config, parameter, value)
            if parameter == "rho":
                with trace_solve("value-iteration", point_config.beta):
                    policy = solve_policy(point_config.mdp_model(), point_config.epsilon)
                point = SweepPoint(
                    parameter,
                    value,
                    iterations=policy.iterations,
                    final_residual=policy.residuals[-1],
                )
            else:
                results = run_replications(point_config, strategies=[strategy], workers=workers)
                point = SweepPoint(
                    parameter,
                    value,
                    links=float(np.mean([r.mean("links") for r in results])),
                    alg_conn=float(np.mean([r.mean("alg_conn") for r in results])),
                    goodput_mbps=float(np.mean([r.mean("goodput_mbps") for r in results])),
                    scr=float(np.mean([r.mean("scr") for r in results])),
                )
        log.info("Sweep %s=%g: %s", parameter, value, point)
        points.append(point)
    return points


def write_sweep_csv(points: Sequence[SweepPoint], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rho = bool(points) and points[0].parameter == "rho"
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = _writer(handle)
        writer.writerow(RHO_SWEEP_COLUMNS if rho else NETWORK_SWEEP_COLUMNS)
        for point in points:
            writer.writerow(point.csv_fields())
    return path


# ============================================================================
# ANONYMITY
# ============================================================================

ANONYMITY_COVERAGE = 9.0


def anonymity_config(config: ExperimentConfig, coverage: float = ANONYMITY_COVERAGE) -> ExperimentConfig:
    """One generation, no failures, nonzero local mixing; the field stays as configured."""
    return config.clone(
        beta=0.0,
        dynamic=False,
        single_generation=True,
        nonzero_coefficients=True,
        source_coverage=coverage,
    )


def sources_reach_all(network: NetworkState, links: Iterable[Tuple[int, int]]) -> bool:
    """Whether every non-source node has a directed path from every source."""
    graph = nx.DiGraph()
    graph.add_nodes_from(network.node_ids())
    graph.add_edges_from(links)
    others = {n.id for n in network.nodes()} - {s.id for s in network.sources}
    return all(others <= nx.descendants(graph, s.id) for s in network.sources)


def connected_network(
    config: ExperimentConfig,
    seed: int,
    *,
    coverage: float = ANONYMITY_COVERAGE,
    max_nodes: int = 50,
    attempts: int = 200,
) -> Tuple[NetworkState, int]:
    """
    First PPP draw for `seed` that is connected and has at most `max_nodes` nodes.

    Draw `i` uses the seed sequence (seed, i), so the result depends only on
    `seed`. Returns the network and its hop diameter.

    Raises:
        RuntimeError: no draw qualified within `attempts`
    """
    start = start_from(config, 1, coverage)
    for attempt in range(attempts):
        draw = int(np.random.SeedSequence([seed, attempt]).generate_state(1)[0])
        network = generate_network(config, seed=draw, start=start)
        if len(network) > max_nodes:
            continue
        links = links_of(network).links()
        diameter = graph_diameter(topology_graph(network.node_ids(), links))
        if diameter is not None and sources_reach_all(network, links):
            return network, diameter
    raise RuntimeError(f"No connected network with at most {max_nodes} nodes in {attempts} draws (seed {seed})")


def measure_anonymity(
    config: ExperimentConfig,
    seed: int,
    *,
    coverage: float = ANONYMITY_COVERAGE,
    max_nodes: int = 50,
) -> float:
    """
    Highest anonymity index of relay broadcasts reached within twice the
    hop diameter of a random connected network.

    Runs one generation with relay coverage held fixed.
    """
    config = anonymity_config(config, coverage)
    network, diameter = connected_network(config, seed, coverage=coverage, max_nodes=max_nodes)
    env = NetworkEnv(config)
    env.reset(seed=seed, start=start_from(config, 1, coverage), network=network)
    best = 0.0
    for _ in range(2 * diameter + 1):
        _state, row, _done, _info = env.step({})
        best = max(best, row.anonymity)
    return best
