"""
Core type definitions for the network simulator.

No logic, just the small shared types.
"""

from __future__ import annotations

from enum import Enum
from typing import Tuple

# ============================================================================
# SPATIAL TYPES
# ============================================================================

# Continuous (x, y) position inside the region; origin at the bottom-left.
Position = Tuple[float, float]

NodeId = int


# ============================================================================
# NODES
# ============================================================================

class NodeKind(Enum):
    """Role of a node in the flow structure."""
    SOURCE = "source"
    RELAY = "relay"
    TERMINAL = "terminal"

    def __str__(self) -> str:
        return self.value

    @property
    def transmits(self) -> bool:
        return self is not NodeKind.TERMINAL

    @property
    def receives(self) -> bool:
        return self is not NodeKind.SOURCE
