from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from coding.packet import Buffer, Packet

from ..core.types import NodeId, NodeKind, Position


@dataclass
class Node(ABC):
    """
    Abstract base class for all network nodes.

    A node sits at a continuous position, reaches every node within the disk
    of area `coverage` around it, and keeps received packets in its buffer.
    Subclasses decide what (if anything) they broadcast each step.
    """

    # Required attributes (NO defaults)
    id: NodeId
    pos: Position

    coverage: float = 0.0
    buffer: Buffer = field(default_factory=Buffer)
    name: Optional[str] = None

    kind: NodeKind = field(init=False, default=NodeKind.RELAY)

    def __post_init__(self):
        if self.coverage < 0:
            raise ValueError(f"Coverage cannot be negative: {self.coverage}")
        self.pos = (float(self.pos[0]), float(self.pos[1]))

    @property
    def radius(self) -> float:
        """Geometric radius √(ā/π) of the coverage disk."""
        return math.sqrt(self.coverage / math.pi)

    @abstractmethod
    def next_packet(self, rng: np.random.Generator) -> Packet | None:
        """
        Packet to broadcast this step, built from the current buffer.

        Returns None when the node has nothing to send.
        """

    def receive(self, packet: Packet) -> bool:
        """Store an incoming packet; returns whether it was innovative."""
        if not self.kind.receives:
            return False
        return self.buffer.add(packet)

    def prune(self, now: int) -> list[int]:
        return self.buffer.prune(now)

    def label(self) -> str:
        """Human-readable label such as "relay#12"."""
        return f"{self.name or self.kind.value}#{self.id}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "kind": self.kind.value,
            "position": list(self.pos),
            "coverage": self.coverage,
            "radius": self.radius,
            "stamps": self.buffer.stamps(),
            "packets": len(self.buffer),
        }

    def __str__(self) -> str:
        return self.label()
