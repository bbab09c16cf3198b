from __future__ import annotations

from typing import Any, Dict, List, Optional

from agents import BaseAgent, create_agent
from env import NetworkEnv
from env.environment import StepInfo
from env.mechanics import MetricsRow
from env.scenario import ExperimentConfig
from env.world import NetworkState
from infra.logger import get_logger

from .frame import Frame

log = get_logger(__name__)


class SimulationRunner:
    """
    Step-by-step runner for one (strategy, seed) replication.

    Call step() until done, or run() for the whole horizon. Metrics rows and
    event-log lines accumulate on the runner as the run progresses.
    """

    def __init__(
        self,
        config: ExperimentConfig,
        strategy: str,
        seed: int,
        *,
        agent: BaseAgent | None = None,
        network: NetworkState | None = None,
        verbose: bool = False,
    ):
        self.config = config
        self.strategy = strategy
        self.seed = seed
        self.agent = agent or create_agent(strategy, config)

        self.env = NetworkEnv(config, verbose=verbose)
        self._state = self.env.reset(seed=seed, start=self.agent.start_for, network=network)

        self._done = False
        self._last_info: StepInfo | None = None
        self.rows: List[MetricsRow] = []
        self.events: List[str] = []

        log.debug(
            "SimulationRunner ready: strategy=%s seed=%d relays=%d",
            strategy, seed, len(self.network.relays),
        )

    @property
    def network(self) -> NetworkState:
        return self._state["network"]

    @property
    def done(self) -> bool:
        return self._done

    @property
    def time(self) -> int:
        return self.env.time

    def step(self, **agent_kwargs: Any) -> Frame:
        """
        Run one step and return its frame.

        Raises:
            RuntimeError: the horizon has been reached
        """
        if self._done:
            raise RuntimeError(f"Run {self.strategy}/{self.seed} already reached its horizon")

        actions, metadata = self.agent.get_actions(self._state, step_info=self._last_info, **agent_kwargs)
        self._state, row, self._done, self._last_info = self.env.step(actions)
        self.rows.append(row)
        self.events.extend(self._last_info.events)

        return Frame(
            strategy=self.strategy,
            seed=self.seed,
            row=row,
            network=self.network,
            actions=actions,
            action_metadata=metadata,
            step_info=self._last_info,
            done=self._done,
        )

    def run(self, *, include_history: bool = False) -> Frame | List[Frame]:
        """Run to the horizon; the final frame, or every frame with include_history."""
        frames: List[Frame] = []
        while True:
            frame = self.step()
            if include_history:
                frames.append(frame)
            if frame.done:
                break
        if include_history:
            return frames
        return frame

    def summary(self) -> Dict[str, Any]:
        """Run means of the per-step metrics plus ledger totals."""
        ledger = self.network.ledger
        n = len(self.rows) or 1
        return {
            "strategy": self.strategy,
            "seed": self.seed,
            "steps": len(self.rows),
            "goodput_mbps": sum(r.goodput_mbps for r in self.rows) / n,
            "scr": sum(r.scr for r in self.rows) / n,
            "power": sum(r.power for r in self.rows) / n,
            "links": sum(r.links for r in self.rows) / n,
            "alg_conn": sum(r.alg_conn for r in self.rows) / n,
            "mean_radius_m": sum(r.mean_radius_m for r in self.rows) / n,
            "mismatches": ledger.mismatches,
        }
