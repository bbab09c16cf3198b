"""
Network dynamics: relay mobility, membership churn and link-failure drift.

Positions of relays are perturbed every step by independent Gaussian
displacements, reflected at the region border. Every few steps the relay
population is re-drawn to a fresh Poisson(λ·area) count, keeping a random
subset of the current relays or adding new ones, and β is re-drawn
uniformly from its range. Sources and terminals never move.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Dict, List, Tuple

import numpy as np

from infra.logger import get_logger

from .placement import RelayStart, poisson_count, spawn_relays

if TYPE_CHECKING:
    from ..world.network import NetworkState

log = get_logger(__name__)


@dataclass
class DynamicsResult:
    """What changed during one dynamics phase."""

    moved: int = 0
    joined: List[int] = field(default_factory=list)
    left: List[int] = field(default_factory=list)
    beta_before: float | None = None
    beta_after: float | None = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "moved": self.moved,
            "joined": list(self.joined),
            "left": list(self.left),
            "beta_before": self.beta_before,
            "beta_after": self.beta_after,
        }


class MobilityModel:
    """Gaussian random walk of relays with reflecting borders."""

    def __init__(self, sigma: float):
        if sigma < 0:
            raise ValueError(f"Mobility step must be nonnegative, got {sigma}")
        self.sigma = sigma

    def move(self, state: "NetworkState", rng: np.random.Generator) -> int:
        relays = state.relays
        if not relays or self.sigma == 0:
            return 0
        current = np.array([r.pos for r in relays], dtype=float)
        moved = state.region.reflect(current + rng.normal(0.0, self.sigma, size=current.shape))
        for relay, (x, y) in zip(relays, moved.tolist()):
            relay.pos = (x, y)
        return len(relays)


def redraw_membership(
    state: "NetworkState",
    lam: float,
    start: RelayStart,
    rng: np.random.Generator,
) -> Tuple[List[int], List[int]]:
    """
    Re-draw the relay population to a Poisson(λ·area) count.

    Returns:
        (ids that joined, ids that left)
    """
    target = poisson_count(lam, state.region.area, rng)
    current = [r.id for r in state.relays]
    if target < len(current):
        leaving = sorted(int(i) for i in rng.choice(current, size=len(current) - target, replace=False))
        for node_id in leaving:
            state.remove_node(node_id)
        return [], leaving
    added = spawn_relays(state, state.region.uniform(rng, target - len(current)), start)
    return [r.id for r in added], []


def draw_beta(beta_range: Tuple[float, float], rng: np.random.Generator) -> float:
    low, high = beta_range
    return float(rng.uniform(low, high)) if high > low else float(low)


class DynamicsResolver:
    """
    Applies the dynamics schedule at the end of a step.

    Attributes:
        mobility: per-step relay motion
        lam: relay density for churn
        membership_interval: steps between population re-draws
        beta_interval: steps between β re-draws
        beta_range: (low, high) of the uniform β draw
    """

    def __init__(
        self,
        mobility: MobilityModel,
        *,
        lam: float,
        membership_interval: int,
        beta_interval: int,
        beta_range: Tuple[float, float],
    ):
        self.mobility = mobility
        self.lam = lam
        self.membership_interval = membership_interval
        self.beta_interval = beta_interval
        self.beta_range = beta_range

    def apply(self, state: "NetworkState", start: RelayStart) -> DynamicsResult:
        """Run the phase that closes step `state.time`."""
        result = DynamicsResult()
        result.moved = self.mobility.move(state, state.rng.mobility)
        elapsed = state.time + 1
        if elapsed % self.membership_interval == 0:
            result.joined, result.left = redraw_membership(state, self.lam, start, state.rng.dynamics)
            log.debug("t=%d churn: +%d -%d relays", state.time, len(result.joined), len(result.left))
        if elapsed % self.beta_interval == 0:
            result.beta_before = state.beta
            state.beta = draw_beta(self.beta_range, state.rng.dynamics)
            result.beta_after = state.beta
        return result
