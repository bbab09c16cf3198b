"""
Core types for the network simulator.
"""

from .types import NodeId, NodeKind, Position

__all__ = [
    "NodeId",
    "NodeKind",
    "Position",
]
