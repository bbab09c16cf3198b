"""
Node placement.

Relays form a homogeneous Poisson point process over the region: a
Poisson(λ·area) count of points dropped uniformly. Sources and terminals
sit at configured positions, or evenly spaced along the left and right
edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, List

import numpy as np

from coding.packet import Buffer, ServiceOrder

from ..core.types import Position
from ..entities import Relay, Source, Terminal

if TYPE_CHECKING:
    from ..world.network import NetworkState


@dataclass(frozen=True)
class RelayStart:
    """
    How a newly placed relay begins.

    Attributes:
        state: state reported before the first broadcast (s†)
        coverage: initial coverage measure
    """

    state: int
    coverage: float
    ttl: int = 16
    service_order: ServiceOrder = "newest"
    nonzero_coefficients: bool = False

    def __post_init__(self):
        if self.state < 1:
            raise ValueError(f"Initial state must be at least 1, got {self.state}")
        if self.coverage <= 0:
            raise ValueError(f"Initial coverage must be positive, got {self.coverage}")


def poisson_count(lam: float, area: float, rng: np.random.Generator) -> int:
    """Number of PPP points of density `lam` in a region of measure `area`."""
    mean = lam * area
    if mean <= 0:
        raise ValueError(f"λ·area must be positive, got {mean}")
    return int(rng.poisson(mean))


def spawn_relays(state: "NetworkState", positions: Iterable[Position], start: RelayStart) -> List[Relay]:
    """Add one relay per position, configured from `start`."""
    relays = []
    for pos in positions:
        relay = Relay(
            id=state.ids.next_id(),
            pos=(float(pos[0]), float(pos[1])),
            coverage=start.coverage,
            buffer=Buffer(start.ttl, state.field),
            state=start.state,
            service_order=start.service_order,
            nonzero_coefficients=start.nonzero_coefficients,
        )
        state.add_node(relay)
        relays.append(relay)
    return relays


def place_relays(state: "NetworkState", lam: float, start: RelayStart, rng: np.random.Generator) -> List[Relay]:
    """Drop a fresh PPP of relays into the region."""
    n = poisson_count(lam, state.region.area, rng)
    return spawn_relays(state, state.region.uniform(rng, n), start)


def place_endpoints(
    state: "NetworkState",
    *,
    source_coverage: float,
    ttl: int,
    source_positions: List[Position] | None = None,
    terminal_positions: List[Position] | None = None,
) -> tuple[List[Source], List[Terminal]]:
    """
    Add one source per flow source and one terminal per flow terminal.

    Sources default to the left edge and terminals to the right edge.
    """
    num_sources = state.flows.num_sources
    num_terminals = len(state.flows.terminals)
    source_positions = source_positions or state.region.edge_positions(num_sources, "left")
    terminal_positions = terminal_positions or state.region.edge_positions(num_terminals, "right")

    sources = []
    for h, pos in zip(state.flows.sources, source_positions):
        source = Source(
            id=state.ids.next_id(), pos=pos, coverage=source_coverage, buffer=Buffer(ttl, state.field), index=h
        )
        state.add_node(source)
        sources.append(source)

    terminals = []
    for t, pos in zip(sorted(state.flows.terminals), terminal_positions):
        terminal = Terminal(id=state.ids.next_id(), pos=pos, buffer=Buffer(ttl, state.field), index=t)
        state.add_node(terminal)
        terminals.append(terminal)
    return sources, terminals


def lattice_positions(rows: int, cols: int, spacing: float = 1.0) -> List[Position]:
    """Relay grid with columns at x = spacing..cols·spacing and rows at y = spacing..rows·spacing."""
    if rows < 1 or cols < 1:
        raise ValueError(f"Lattice needs at least one row and column, got {rows}×{cols}")
    return [((c + 1) * spacing, (r + 1) * spacing) for r in range(rows) for c in range(cols)]


def lattice_endpoint_rows(n: int, rows: int, spacing: float = 1.0) -> List[float]:
    """y coordinates of `n` endpoints spread over the lattice rows, outermost first."""
    if n > rows:
        raise ValueError(f"{n} endpoints do not fit on {rows} lattice rows")
    if n == 1:
        return [((rows - 1) // 2 + 1) * spacing]
    picks = np.rint(np.linspace(0, rows - 1, n)).astype(int)
    return [(int(r) + 1) * spacing for r in picks]
