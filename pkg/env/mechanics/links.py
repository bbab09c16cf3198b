"""
Link realization.

Node j lies in the transmission range of node i when their distance is at
most i's radius √(ā_i/π). Sources never receive and terminals never
transmit. Each in-range link independently fails for the current step with
the network's link failure rate β.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Dict, List, Tuple

import numpy as np

from ..world.region import Region

if TYPE_CHECKING:
    from ..world.network import NetworkState


@dataclass(frozen=True)
class LinkRealization:
    """
    In-range directed links of one step and which of them failed.

    Attributes:
        node_ids: node ids, indexing the rows of `pairs`
        pairs: (k, 2) transmitter/receiver positions into `node_ids`
        failed: length-k failure marks
    """

    node_ids: Tuple[int, ...]
    pairs: np.ndarray
    failed: np.ndarray

    @property
    def count(self) -> int:
        return int(self.pairs.shape[0])

    @property
    def failed_count(self) -> int:
        return int(self.failed.sum())

    def links(self) -> List[Tuple[int, int]]:
        """All in-range links as (transmitter id, receiver id)."""
        ids = self.node_ids
        return [(ids[i], ids[j]) for i, j in self.pairs.tolist()]

    def working(self) -> List[Tuple[int, int]]:
        ids = self.node_ids
        return [(ids[i], ids[j]) for (i, j), bad in zip(self.pairs.tolist(), self.failed.tolist()) if not bad]

    def receivers(self) -> Dict[int, List[int]]:
        """Transmitter id → ids reached over working links."""
        reached: Dict[int, List[int]] = {}
        for tx, rx in self.working():
            reached.setdefault(tx, []).append(rx)
        return reached

    def in_range(self) -> Dict[int, List[int]]:
        """Transmitter id → ids within range, failed or not."""
        covered: Dict[int, List[int]] = {}
        for tx, rx in self.links():
            covered.setdefault(tx, []).append(rx)
        return covered

    def to_dict(self) -> Dict[str, Any]:
        return {"links": self.count, "failed": self.failed_count}


def in_range_pairs(state: "NetworkState") -> Tuple[Tuple[int, ...], np.ndarray]:
    """Node ids and the (k, 2) index pairs of every directed in-range link."""
    nodes = state.nodes()
    ids = tuple(n.id for n in nodes)
    if len(nodes) < 2:
        return ids, np.zeros((0, 2), dtype=np.int64)
    dist = Region.distance_matrix(state.positions())
    radii = np.array([n.radius for n in nodes])
    can_tx = np.array([n.kind.transmits for n in nodes])
    can_rx = np.array([n.kind.receives for n in nodes])
    mask = (dist <= radii[:, None]) & can_tx[:, None] & can_rx[None, :]
    np.fill_diagonal(mask, False)
    return ids, np.argwhere(mask)


def links_of(state: "NetworkState", rng: np.random.Generator | None = None) -> LinkRealization:
    """
    Realize this step's links.

    One uniform draw per in-range link is consumed from `rng` even when
    β = 0, so the stream advances the same way for every β. Without `rng`
    nothing fails.
    """
    ids, pairs = in_range_pairs(state)
    if rng is None:
        failed = np.zeros(len(pairs), dtype=bool)
    else:
        failed = rng.random(len(pairs)) < state.beta
    return LinkRealization(ids, pairs, failed)
