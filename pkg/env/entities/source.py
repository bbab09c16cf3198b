from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from coding.packet import FlowSpec, Packet
from coding.rlnc import encode_source

from ..core.types import NodeKind
from .base import Node


@dataclass
class Source(Node):
    """
    A fixed data source with a fixed coverage.

    Each generation is stored as a pure packet (coefficients e_h) and sent
    uncoded; a source never receives.
    """

    index: int = 1

    def __post_init__(self):
        super().__post_init__()
        self.kind = NodeKind.SOURCE
        if self.index < 1:
            raise ValueError(f"Source index must be 1-based, got {self.index}")

    def generate(self, stamp: int, payload: np.ndarray, flows: FlowSpec) -> Packet:
        packet = encode_source(self.index, payload, stamp, flows, self.buffer.field)
        self.buffer.add(packet)
        return packet

    def next_packet(self, rng: np.random.Generator) -> Packet | None:
        stamp = self.buffer.next_stamp("newest")
        if stamp is None:
            return None
        self.buffer.mark_sent(stamp)
        return self.buffer.packets(stamp)[0]

    def label(self) -> str:
        return f"source{self.index}#{self.id}"
