"""
NetworkEnv - Main simulator interface.

A gym-like interface over one replication of a dynamic ad hoc network:

    env = NetworkEnv(config)
    state = env.reset(seed=0, start=agent.start_for)

    while not done:
        actions, _metadata = agent.get_actions(state)
        state, row, done, info = env.step(actions)

State Structure:
    {
        "network": NetworkState,           # raw network (positions, buffers, ledger)
        "observations": {relay_id: state}, # what each relay saw at its last broadcast
    }

Step order at time τ:
    1. prune buffers and expire stale triples
    2. sources generate stamp τ
    3. relays holding packets apply their coverage actions
    4. every transmitter builds its packet from its start-of-step buffer
    5. link realization with failures
    6. receptions
    7. terminal decoding (deliveries complete at τ + 1)
    8. metrics
    9. dynamics (mobility, churn, β drift)
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple, Union

from coding.galois import GaloisField
from coding.rlnc import anonymity_index
from infra.logger import get_logger
from mdp.solver import solve_policy
from mdp.stationary import analyze

from .core.types import NodeKind
from .mechanics import (
    Broadcast,
    CoverageChange,
    DynamicsResolver,
    DynamicsResult,
    LinkRealization,
    MetricsRow,
    MobilityModel,
    RelayResolver,
    RelayStart,
    algebraic_connectivity,
    delivery_log_line,
    goodput,
    lattice_endpoint_rows,
    lattice_positions,
    links_of,
    place_endpoints,
    place_relays,
    power_dbm,
    spawn_relays,
    topology_graph,
    total_power,
)
from .scenario import ExperimentConfig
from .world import DeliveryRecord, NetworkState, Region

log = get_logger(__name__)

StartRule = Union[RelayStart, Callable[[float], RelayStart]]


def relay_start(config: ExperimentConfig, beta: float | None = None) -> RelayStart:
    """
    Initial relay state and coverage from the stationary analysis of the
    value-iteration policy at link failure rate `beta`.
    """
    model = config.mdp_model(beta)
    report = analyze(solve_policy(model, config.epsilon))
    return start_from(config, report.initial_state, report.initial_coverage)


def start_from(config: ExperimentConfig, state: int, coverage: float) -> RelayStart:
    """RelayStart carrying the config's coding settings."""
    return RelayStart(
        state=state,
        coverage=coverage,
        ttl=config.ttl,
        service_order=config.service_order,
        nonzero_coefficients=config.nonzero_coefficients,
    )


def generate_network(config: ExperimentConfig, *, seed: int = 0, start: StartRule | None = None) -> NetworkState:
    """
    Build a fresh network for one replication.

    Relays form a Poisson(λ·area) point process over the region, each set to
    the start coverage; sources and terminals sit at their configured or
    edge positions.

    Raises:
        ValueError: the region has zero measure or λ·area is not positive
    """
    region = Region(config.width, config.height)
    network = NetworkState(
        region,
        config.flow_spec(),
        beta=config.beta,
        field=GaloisField.get(config.field_degree),
        seed=seed,
    )
    place_endpoints(
        network,
        source_coverage=config.source_coverage,
        ttl=config.ttl,
        source_positions=config.source_positions,
        terminal_positions=config.terminal_positions,
    )
    if start is None:
        start = relay_start(config, config.beta)
    resolved = start(network.beta) if callable(start) else start
    place_relays(network, config.lam, resolved, network.rng.placement)
    log.debug("Generated %s", network)
    return network


def lattice_network(
    config: ExperimentConfig,
    *,
    rows: int = 3,
    cols: int = 3,
    spacing: float = 1.0,
    seed: int = 0,
) -> NetworkState:
    """
    Deterministic grid topology: relays on a rows×cols lattice, sources one
    column to the left and terminals one column to the right.

    Every node gets radius 1.05·spacing, so it reaches exactly its lattice
    neighbours. Used where a connected network of known diameter is needed.
    """
    region = Region((cols + 1) * spacing, (rows + 1) * spacing)
    radius = 1.05 * spacing
    coverage = math.pi * radius**2
    flows = config.flow_spec()
    network = NetworkState(
        region,
        flows,
        beta=config.beta,
        field=GaloisField.get(config.field_degree),
        seed=seed,
    )
    right = (cols + 1) * spacing
    place_endpoints(
        network,
        source_coverage=coverage,
        ttl=config.ttl,
        source_positions=[(0.0, y) for y in lattice_endpoint_rows(flows.num_sources, rows, spacing)],
        terminal_positions=[(right, y) for y in lattice_endpoint_rows(len(flows.terminals), rows, spacing)],
    )
    spawn_relays(network, lattice_positions(rows, cols, spacing), start_from(config, 1, coverage))
    return network


@dataclass
class StepInfo:
    """
    Per-step metadata returned at the end of each step.

    Contains the link realization, coverage changes, broadcasts, completed
    deliveries and dynamics of the step, plus optional event-log lines.
    """

    time: int
    links: LinkRealization
    changes: List[CoverageChange] = field(default_factory=list)
    broadcasts: List[Broadcast] = field(default_factory=list)
    deliveries: List[DeliveryRecord] = field(default_factory=list)
    dynamics: Optional[DynamicsResult] = None
    events: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "time": self.time,
            "links": self.links.to_dict(),
            "changes": [asdict(c) for c in self.changes],
            "broadcasts": [b.to_dict() for b in self.broadcasts],
            "deliveries": [
                {"source": d.source, "terminal": d.terminal, "stamp": d.stamp, "travel": d.travel}
                for d in self.deliveries
            ],
            "dynamics": self.dynamics.to_dict() if self.dynamics else None,
        }


class NetworkEnv:
    """
    Network simulator - one replication at a time.

    The environment manages:
    - The network state (nodes, buffers, ledger, random streams)
    - Packet relaying and decoding (RelayResolver)
    - Dynamics (DynamicsResolver, when the config enables them)
    - Metrics per step

    Attributes:
        config: experiment configuration
        network: current network state
    """

    def __init__(self, config: ExperimentConfig, verbose: bool = False):
        self.config = config
        self.verbose = verbose
        self.network: Optional[NetworkState] = None
        self._start: Optional[StartRule] = None

        # Mechanics modules (stateless, can be reused)
        self._relay = RelayResolver()
        self._dynamics = DynamicsResolver(
            MobilityModel(config.mobility_sigma),
            lam=config.lam,
            membership_interval=config.membership_interval,
            beta_interval=config.beta_interval,
            beta_range=tuple(config.beta_range),
        )

    def reset(
        self,
        seed: int = 0,
        start: StartRule | None = None,
        network: NetworkState | None = None,
    ) -> Dict[str, Any]:
        """
        Start a replication.

        Args:
            seed: replication seed; all randomness derives from it
            start: initial relay state and coverage, or a function of β
                returning one; None runs the stationary analysis
            network: prebuilt network to run instead of a generated one

        Returns:
            Initial state (same structure as step())
        """
        if start is None:
            start = relay_start(self.config, self.config.beta)
        self._start = start
        self.network = network if network is not None else generate_network(self.config, seed=seed, start=start)
        return self._build_state()

    def observe(self) -> Dict[int, int]:
        """Relay id → state observed at its last broadcast (s† before the first)."""
        if self.network is None:
            raise RuntimeError("Must call reset() before observe()")
        return {r.id: r.state for r in self.network.relays}

    def step(self, actions: Mapping[int, float]) -> Tuple[Dict[str, Any], MetricsRow, bool, StepInfo]:
        """
        Execute one time step.

        Args:
            actions: relay id → coverage change

        Returns:
            Tuple of (state, metrics, done, info)

        Raises:
            RuntimeError: If reset() hasn't been called
        """
        if self.network is None:
            raise RuntimeError("Must call reset() before calling step()")
        config = self.config
        net = self.network
        now = net.time

        # 1. expiry
        for node in net.nodes():
            node.prune(now)
        net.ledger.expire(now, config.ttl)

        # 2. generation
        if not config.single_generation or now == 0:
            for source in net.sources:
                payload = net.field.random(net.rng.coding, config.payload_symbols)
                source.generate(now, payload, net.flows)
                net.ledger.register(source.index, net.flows.terminals_of[source.index], now, payload)

        # 3-7. adaptation, relaying, decoding
        changes = self._relay.apply_actions(net, actions, floor=config.coverage_floor, ceiling=net.region.area)
        packets = self._relay.build_packets(net)
        realization = links_of(net, net.rng.links)
        broadcasts = self._relay.deliver(net, packets, realization, num_states=config.num_states)
        deliveries = self._relay.decode(net, now)

        # 8. metrics
        row = self._measure(now, realization, broadcasts)

        info = StepInfo(now, realization, changes, broadcasts, deliveries)
        if config.event_log:
            info.events = self._event_lines(now, changes, broadcasts, deliveries)

        # 9. dynamics
        if config.dynamic:
            info.dynamics = self._dynamics.apply(net, self._resolve_start(net.beta))

        net.time += 1
        done = net.time >= config.horizon
        if self.verbose:
            log.info("t=%d goodput=%.3f scr=%.3f links=%d", now, row.goodput_mbps, row.scr, row.links)
        return self._build_state(), row, done, info

    def _measure(self, now: int, realization: LinkRealization, broadcasts: List[Broadcast]) -> MetricsRow:
        config = self.config
        net = self.network
        meters = config.unit_length_m
        power_mw = total_power([b.radius * meters for b in broadcasts], config.eta, config.alpha)
        relay_packets = [b.packet for b in broadcasts if b.kind is NodeKind.RELAY]
        relays = net.relays
        mean_radius = sum(r.radius for r in relays) / len(relays) * meters if relays else 0.0
        graph = topology_graph(net.node_ids(), realization.links())
        return MetricsRow(
            time=now,
            goodput_mbps=goodput(net.ledger, config.data_bits, config.unit_time_ms, now=now + 1),
            scr=net.ledger.connectivity_ratio(),
            power=power_dbm(power_mw),
            links=realization.count,
            alg_conn=algebraic_connectivity(graph),
            anonymity=anonymity_index(relay_packets, net.flows),
            mean_radius_m=mean_radius,
            power_mw=power_mw,
            deliveries=len(net.ledger.deliveries_at(now + 1)),
            active_relays=len(relay_packets),
        )

    def _event_lines(
        self,
        now: int,
        changes: List[CoverageChange],
        broadcasts: List[Broadcast],
        deliveries: List[DeliveryRecord],
    ) -> List[str]:
        lines = [c.to_log_line(now) for c in changes]
        lines += [b.to_log_line(now, self.config.unit_length_m) for b in broadcasts]
        lines += [delivery_log_line(d) for d in deliveries]
        return lines

    def _resolve_start(self, beta: float) -> RelayStart:
        start = self._start
        if start is None:
            raise RuntimeError("Must call reset() before stepping")
        return start(beta) if callable(start) else start

    def _build_state(self) -> Dict[str, Any]:
        return {"network": self.network, "observations": self.observe()}

    def close(self) -> None:
        """No-op, provided for gym compatibility."""

    @property
    def time(self) -> int:
        return self.network.time if self.network else 0
