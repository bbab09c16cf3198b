from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Tuple

from env.environment import StepInfo
from env.mechanics import MetricsRow
from env.world import NetworkState


@dataclass
class Frame:
    """
    Snapshot of one simulated step for one (strategy, seed) run.

    `row` holds the step's metrics; `network` is the live network after the
    step and is only serialized on request since it carries whole buffers.
    """

    strategy: str
    seed: int
    row: MetricsRow
    network: NetworkState | None = None
    actions: Optional[Mapping[int, float]] = None
    action_metadata: Optional[Mapping[str, Any]] = None
    step_info: Optional[StepInfo] = None
    done: bool = False

    @property
    def time(self) -> int:
        return self.row.time

    def csv_fields(self) -> Tuple[str, ...]:
        return self.row.csv_fields(self.strategy, self.seed)

    @property
    def events(self) -> List[str]:
        return list(self.step_info.events) if self.step_info is not None else []

    def to_dict(self, *, include_network: bool = False) -> Dict[str, Any]:
        """JSON-friendly view of the frame."""
        frame: Dict[str, Any] = {
            "strategy": self.strategy,
            "seed": self.seed,
            "metrics": self.row.to_dict(),
            "done": self.done,
        }
        if self.actions:
            frame["actions"] = [
                {"node_id": node_id, "action": action} for node_id, action in sorted(self.actions.items())
            ]
        if self.action_metadata is not None:
            frame["action_metadata"] = dict(self.action_metadata)
        if self.step_info is not None:
            frame["step_info"] = self.step_info.to_dict()
        if include_network and self.network is not None:
            frame["network"] = self.network.to_dict()
        return frame
