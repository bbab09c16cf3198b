"""
Fixed-range baseline: relays keep their initial coverage for the whole run.
"""

from typing import TYPE_CHECKING, Any, Dict, Optional

from env.environment import start_from
from env.mechanics.placement import RelayStart
from env.scenario import ExperimentConfig

from .base_agent import BaseAgent
from .policy_book import PolicyBook
from .registry import register_agent

if TYPE_CHECKING:
    from env.environment import StepInfo


@register_agent("fixed")
class FixedRangeAgent(BaseAgent):
    """
    Never changes coverage.

    The coverage is `fixed_coverage` when configured, otherwise the
    stationary coverage of the value-iteration policy at the initial β.
    """

    def __init__(
        self,
        config: ExperimentConfig,
        name: Optional[str] = None,
        coverage: Optional[float] = None,
        **_: Any,
    ):
        super().__init__(config, name)
        reference = PolicyBook.cached(config).start_for(config.beta)
        coverage = coverage or config.fixed_coverage or reference.coverage
        self._start = start_from(config, reference.state, coverage)

    @property
    def coverage(self) -> float:
        return self._start.coverage

    def get_actions(
        self,
        state: Dict[str, Any],
        step_info: Optional["StepInfo"] = None,
        **kwargs: Any,
    ) -> tuple[Dict[int, float], Dict[str, Any]]:
        actions = {relay_id: 0.0 for relay_id in state["observations"]}
        return actions, {"policy": "fixed", "coverage": self.coverage}

    def start_for(self, beta: float) -> RelayStart:
        return self._start
