"""
Policy-lookup strategies.

Every relay looks up a* = π(s) for its observed state s in the policy of
the current β band and changes its coverage by a*. `proposed` uses the
value-iteration policy; `myopic` maximizes expected immediate utility only.
"""

from typing import TYPE_CHECKING, Any, Dict, Optional

from env.mechanics.placement import RelayStart
from env.scenario import ExperimentConfig
from env.world import NetworkState

from .base_agent import BaseAgent
from .policy_book import PolicyBook, SolverName
from .registry import register_agent

if TYPE_CHECKING:
    from env.environment import StepInfo


@register_agent("proposed")
class PolicyAgent(BaseAgent):
    """
    Relays follow an ε-optimal value-iteration policy.

    Attributes:
        book: solved policies per β band
    """

    solver: SolverName = "value-iteration"

    def __init__(
        self,
        config: ExperimentConfig,
        name: Optional[str] = None,
        book: Optional[PolicyBook] = None,
        **_: Any,
    ):
        super().__init__(config, name)
        self.book = book or PolicyBook.cached(config, self.solver)

    def get_actions(
        self,
        state: Dict[str, Any],
        step_info: Optional["StepInfo"] = None,
        **kwargs: Any,
    ) -> tuple[Dict[int, float], Dict[str, Any]]:
        network: NetworkState = state["network"]
        observations: Dict[int, int] = state["observations"]
        policy = self.book.policy_for(network.beta)
        actions = {relay_id: policy(s) for relay_id, s in observations.items()}
        metadata = {
            "policy": self.solver,
            "band_beta": self.book.entry(network.beta).beta,
            "actions_count": len(actions),
        }
        return actions, metadata

    def start_for(self, beta: float) -> RelayStart:
        return self.book.start_for(beta)


@register_agent("myopic")
class MyopicAgent(PolicyAgent):
    """Relays maximize expected immediate utility, ignoring the future."""

    solver: SolverName = "myopic"
