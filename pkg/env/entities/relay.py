from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from coding.packet import Packet, ServiceOrder
from coding.rlnc import recombine

from ..core.types import NodeKind
from .base import Node


@dataclass
class Relay(Node):
    """
    An intermediate node that re-mixes what it holds and adapts its coverage.

    Attributes:
        state: effective-node count seen at the last broadcast; relays are
            spawned with the start state s† before their first one
        service_order: which pending stamp group to serve first
        nonzero_coefficients: draw local coefficients from nonzero elements
    """

    state: int = 1
    service_order: ServiceOrder = "newest"
    nonzero_coefficients: bool = False
    broadcasts: int = 0

    def __post_init__(self):
        super().__post_init__()
        self.kind = NodeKind.RELAY
        if self.coverage <= 0:
            raise ValueError(f"Relay coverage must be positive: {self.coverage}")

    def next_packet(self, rng: np.random.Generator) -> Packet | None:
        stamp = self.buffer.next_stamp(self.service_order)
        if stamp is None:
            return None
        packet = recombine(self.buffer, stamp, rng, nonzero=self.nonzero_coefficients)
        self.buffer.mark_sent(stamp)
        self.broadcasts += 1
        return packet

    def adjust_coverage(self, delta: float, floor: float, ceiling: float) -> float:
        """Apply a coverage change, clamped to [floor, ceiling]; returns the new coverage."""
        if delta == 0:
            return self.coverage
        self.coverage = float(min(max(self.coverage + delta, floor), ceiling))
        return self.coverage

    def observe(self, receivers: int, num_states: int) -> int:
        """Record the receiver count of this step's broadcast as the next state."""
        self.state = int(min(max(receivers, 1), num_states))
        return self.state

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        data["state"] = self.state
        data["broadcasts"] = self.broadcasts
        return data
