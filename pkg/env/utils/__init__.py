"""
Helpers for the network simulator.
"""

from .id_generator import IDGenerator

__all__ = [
    "IDGenerator",
]
