from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from coding.packet import Packet

from ..core.types import NodeKind
from .base import Node


@dataclass
class Terminal(Node):
    """A sink that collects packets and decodes them per stamp group."""

    index: int = 1
    decoded: set[int] = field(default_factory=set)

    def __post_init__(self):
        super().__post_init__()
        self.kind = NodeKind.TERMINAL
        if self.index < 1:
            raise ValueError(f"Terminal index must be 1-based, got {self.index}")

    def next_packet(self, rng: np.random.Generator) -> Packet | None:
        return None

    def undecoded_stamps(self) -> list[int]:
        return [s for s in self.buffer.stamps() if s not in self.decoded]

    def prune(self, now: int) -> list[int]:
        dropped = super().prune(now)
        self.decoded.difference_update(dropped)
        return dropped

    def label(self) -> str:
        return f"terminal{self.index}#{self.id}"
