"""
Network nodes:
- Node (abstract base)
- Source (fixed data origin)
- Relay (intermediate node with adaptive coverage)
- Terminal (decoding sink)
"""

from .base import Node
from .relay import Relay
from .source import Source
from .terminal import Terminal

__all__ = [
    "Node",
    "Relay",
    "Source",
    "Terminal",
]
