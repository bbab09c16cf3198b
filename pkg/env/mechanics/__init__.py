"""
Mechanics module - stateless pieces of a simulation step.

- placement: PPP relay placement and endpoint layout
- links: in-range links and per-step failures
- relay: coverage actions, packet relaying and decoding
- mobility: relay motion, churn and β drift
- metrics: goodput, connectivity ratio, power and algebraic connectivity
"""

from .links import LinkRealization, in_range_pairs, links_of
from .metrics import (
    CSV_COLUMNS,
    EXTRA_COLUMNS,
    MetricsRow,
    algebraic_connectivity,
    connectivity_ratio,
    goodput,
    graph_diameter,
    node_power,
    power_dbm,
    topology_graph,
    total_power,
)
from .mobility import DynamicsResolver, DynamicsResult, MobilityModel, draw_beta, redraw_membership
from .placement import (
    RelayStart,
    lattice_endpoint_rows,
    lattice_positions,
    place_endpoints,
    place_relays,
    poisson_count,
    spawn_relays,
)
from .relay import Broadcast, CoverageChange, RelayResolver, delivery_log_line

__all__ = [
    "LinkRealization",
    "in_range_pairs",
    "links_of",
    "CSV_COLUMNS",
    "EXTRA_COLUMNS",
    "MetricsRow",
    "algebraic_connectivity",
    "connectivity_ratio",
    "goodput",
    "graph_diameter",
    "node_power",
    "power_dbm",
    "topology_graph",
    "total_power",
    "DynamicsResolver",
    "DynamicsResult",
    "MobilityModel",
    "draw_beta",
    "redraw_membership",
    "RelayStart",
    "lattice_endpoint_rows",
    "lattice_positions",
    "place_endpoints",
    "place_relays",
    "poisson_count",
    "spawn_relays",
    "Broadcast",
    "CoverageChange",
    "RelayResolver",
    "delivery_log_line",
]
