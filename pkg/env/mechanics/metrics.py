"""
Per-step network metrics.

goodput: data rate of this step's deliveries, Σ L / τ̄ in Mbps
scr: successful connectivity ratio, delivered over generated triples
power: path-loss transmit power η·r^α summed over transmitters, in dBm
links: directed in-range links before failures
alg_conn: second-smallest Laplacian eigenvalue of the undirected topology
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Iterable, Sequence, Tuple

import networkx as nx
import numpy as np

from ..world.ledger import DeliveryLedger, DeliveryRecord

CSV_COLUMNS = ("time", "goodput_mbps", "scr", "power", "links", "alg_conn", "strategy", "seed")
EXTRA_COLUMNS = ("anonymity", "mean_radius_m", "power_mw", "deliveries", "active_relays")


@dataclass(frozen=True)
class MetricsRow:
    """One step of measurements; every field is nonnegative and scr lies in [0, 1]."""

    time: int
    goodput_mbps: float
    scr: float
    power: float
    links: int
    alg_conn: float
    anonymity: float = 0.0
    mean_radius_m: float = 0.0
    power_mw: float = 0.0
    deliveries: int = 0
    active_relays: int = 0

    def __post_init__(self):
        numbers = asdict(self)
        negative = {k: v for k, v in numbers.items() if v < 0}
        if negative:
            raise ValueError(f"Metrics must be nonnegative: {negative}")
        if self.scr > 1.0:
            raise ValueError(f"Connectivity ratio above 1: {self.scr}")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def csv_fields(self, strategy: str, seed: int) -> Tuple[str, ...]:
        """Values for CSV_COLUMNS, formatted identically on every run."""
        return (
            str(self.time),
            _fmt(self.goodput_mbps),
            _fmt(self.scr),
            _fmt(self.power),
            str(self.links),
            _fmt(self.alg_conn),
            strategy,
            str(seed),
        )


def _fmt(value: float) -> str:
    return f"{value:.10g}"


# ============================================================================
# RATES
# ============================================================================

def goodput(deliveries: Iterable[DeliveryRecord] | DeliveryLedger, data_bits: float, unit_time_ms: float, now: int | None = None) -> float:
    """
    Σ over deliveries of data_bits / τ̄ in Mbps, with τ̄ = travel steps × unit time.

    A ledger argument needs `now` and counts the deliveries completed then.

    Examples:
        one delivery of 1000 bits after 2 ms → 0.5 Mbps
    """
    if isinstance(deliveries, DeliveryLedger):
        if now is None:
            raise ValueError("goodput over a ledger needs the delivery time `now`")
        deliveries = deliveries.deliveries_at(now)
    total = 0.0
    for record in deliveries:
        travel = record.travel
        if travel is None or travel <= 0:
            raise ValueError(f"Delivery {record} has no positive travel time")
        total += data_bits / (travel * unit_time_ms * 1000.0)
    return total


def connectivity_ratio(ledger: DeliveryLedger) -> float:
    return ledger.connectivity_ratio()


# ============================================================================
# POWER
# ============================================================================

def node_power(radius: float, eta: float = 1.0, alpha: float = 2.0) -> float:
    """Linear transmit power η·r^α needed to reach distance r."""
    if radius <= 0:
        return 0.0
    return eta * radius**alpha


def total_power(radii: Sequence[float], eta: float = 1.0, alpha: float = 2.0) -> float:
    return float(sum(node_power(r, eta, alpha) for r in radii))


def power_dbm(power_mw: float) -> float:
    """10·log10 of a linear power in mW, floored at 0 dBm."""
    if power_mw <= 0:
        return 0.0
    return max(0.0, 10.0 * math.log10(power_mw))


# ============================================================================
# TOPOLOGY
# ============================================================================

def topology_graph(node_ids: Iterable[int], links: Iterable[Tuple[int, int]]) -> nx.Graph:
    """Undirected support graph of directed links over all nodes."""
    graph = nx.Graph()
    graph.add_nodes_from(node_ids)
    graph.add_edges_from((a, b) for a, b in links if a != b)
    return graph


def algebraic_connectivity(graph: nx.Graph) -> float:
    """
    Second-smallest eigenvalue of the graph Laplacian.

    Zero for graphs with fewer than two nodes or more than one component.
    """
    if graph.number_of_nodes() < 2 or not nx.is_connected(graph):
        return 0.0
    laplacian = nx.laplacian_matrix(graph, nodelist=sorted(graph.nodes())).toarray().astype(float)
    eigenvalues = np.linalg.eigvalsh(laplacian)
    return float(max(eigenvalues[1], 0.0))


def graph_diameter(graph: nx.Graph) -> int | None:
    """Hop diameter, or None when the graph is disconnected or empty."""
    if graph.number_of_nodes() == 0 or not nx.is_connected(graph):
        return None
    return int(nx.diameter(graph))
