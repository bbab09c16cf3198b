"""
Node id allocation.

Every network owns its own generator so two replications with the same seed
number their nodes identically, including relays that join mid-run.
"""

import itertools
from typing import Iterator


class IDGenerator:
    """Sequential ids starting at `start`, never reused within one network."""

    def __init__(self, start: int = 1):
        self._counter: Iterator[int] = itertools.count(start)

    def next_id(self) -> int:
        return next(self._counter)
