"""
NetworkState - Central simulation state.

The NetworkState holds:
- The region and every node (sources, relays, terminals)
- The flow structure and the coding field
- The current link failure rate and time step
- The delivery ledger and the random streams

It does NOT handle:
- Placement (delegated to the placement mechanics)
- Link realization (delegated to the link mechanics)
- Packet relaying and decoding (delegated to RelayResolver)
- Mobility and churn (delegated to the mobility mechanics)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np

from coding.galois import GaloisField
from coding.packet import FlowSpec

from ..core.types import NodeId, NodeKind
from ..entities import Node, Relay, Source, Terminal
from ..utils.id_generator import IDGenerator
from .ledger import DeliveryLedger
from .region import Region

STREAM_NAMES = ("placement", "mobility", "links", "coding", "dynamics")


@dataclass
class RandomStreams:
    """Independent generators spawned from one seed, one per concern."""

    placement: np.random.Generator
    mobility: np.random.Generator
    links: np.random.Generator
    coding: np.random.Generator
    dynamics: np.random.Generator

    @classmethod
    def from_seed(cls, seed: int) -> "RandomStreams":
        children = np.random.SeedSequence(seed).spawn(len(STREAM_NAMES))
        return cls(*(np.random.default_rng(child) for child in children))


class NetworkState:
    """
    The whole network at one time step.

    Attributes:
        region: deployment area
        flows: source → terminal demands
        field: Galois field used by every buffer
        beta: current link failure rate
        time: current step τ
        ledger: delivery bookkeeping
        rng: random streams of this replication
    """

    def __init__(
        self,
        region: Region,
        flows: FlowSpec,
        *,
        beta: float = 0.0,
        field: GaloisField | None = None,
        seed: int = 0,
    ):
        if not 0.0 <= beta < 1.0:
            raise ValueError(f"Link failure rate must be in [0, 1), got {beta}")
        self.region = region
        self.flows = flows
        self.field = field or GaloisField.get()
        self.beta = beta
        self.time = 0
        self.seed = seed
        self.ledger = DeliveryLedger()
        self.rng = RandomStreams.from_seed(seed)
        self.ids = IDGenerator()

        self._nodes: Dict[NodeId, Node] = {}

    # ========================================================================
    # NODE MANAGEMENT
    # ========================================================================

    def add_node(self, node: Node) -> NodeId:
        """
        Raises:
            ValueError: the position is outside the region or the id is taken
        """
        if not self.region.in_bounds(node.pos):
            raise ValueError(f"{node.label()} placed outside {self.region}: {node.pos}")
        if node.id in self._nodes:
            raise ValueError(f"Duplicate node id {node.id}")
        if node.buffer.field is not self.field:
            node.buffer.field = self.field
        self._nodes[node.id] = node
        return node.id

    def remove_node(self, node_id: NodeId) -> Node:
        return self._nodes.pop(node_id)

    def get_node(self, node_id: NodeId) -> Optional[Node]:
        return self._nodes.get(node_id)

    def nodes(self) -> List[Node]:
        return list(self._nodes.values())

    def node_ids(self) -> List[NodeId]:
        return list(self._nodes)

    def of_kind(self, kind: NodeKind) -> List[Node]:
        return [n for n in self._nodes.values() if n.kind is kind]

    @property
    def sources(self) -> List[Source]:
        return [n for n in self._nodes.values() if isinstance(n, Source)]

    @property
    def relays(self) -> List[Relay]:
        return [n for n in self._nodes.values() if isinstance(n, Relay)]

    @property
    def terminals(self) -> List[Terminal]:
        return [n for n in self._nodes.values() if isinstance(n, Terminal)]

    def source(self, index: int) -> Source:
        for node in self.sources:
            if node.index == index:
                return node
        raise KeyError(f"No source {index}")

    def terminal(self, index: int) -> Terminal:
        for node in self.terminals:
            if node.index == index:
                return node
        raise KeyError(f"No terminal {index}")

    # ========================================================================
    # ARRAY VIEWS
    # ========================================================================

    def positions(self) -> np.ndarray:
        """(n, 2) positions in node order."""
        if not self._nodes:
            return np.zeros((0, 2))
        return np.array([n.pos for n in self._nodes.values()], dtype=float)

    def radii(self) -> np.ndarray:
        return np.array([n.radius for n in self._nodes.values()], dtype=float)

    # ========================================================================
    # UTILITY
    # ========================================================================

    def to_dict(self) -> Dict[str, Any]:
        """JSON-friendly snapshot (buffers summarized, not serialized)."""
        return {
            "region": {"width": self.region.width, "height": self.region.height},
            "time": self.time,
            "beta": self.beta,
            "seed": self.seed,
            "nodes": [n.to_dict() for n in self._nodes.values()],
            "ledger": self.ledger.to_dict(),
        }

    def __len__(self) -> int:
        return len(self._nodes)

    def __str__(self) -> str:
        return (
            f"NetworkState(t={self.time}, sources={len(self.sources)}, relays={len(self.relays)}, "
            f"terminals={len(self.terminals)}, beta={self.beta:.2f})"
        )
