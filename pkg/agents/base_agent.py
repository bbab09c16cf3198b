"""
Base agent interface for the network simulator.

An agent is a relay-control strategy: every step it maps each relay's
observed state to a coverage change, and it decides how new relays start.
"""

from abc import ABC, abstractmethod
from typing import TYPE_CHECKING, Any, Dict, Optional

from env.mechanics.placement import RelayStart
from env.scenario import ExperimentConfig

if TYPE_CHECKING:
    from env.environment import StepInfo


class BaseAgent(ABC):
    """
    Abstract base class for all strategies.

    Subclasses must implement:
    - get_actions(): coverage changes for the relays of the network
    - start_for(): initial state and coverage of new relays

    Attributes:
        config: experiment configuration the agent was built for
        name: agent name for logging/identification
    """

    def __init__(self, config: ExperimentConfig, name: Optional[str] = None):
        self.config = config
        self.name = name or self.__class__.__name__

    @abstractmethod
    def get_actions(
        self,
        state: Dict[str, Any],
        step_info: Optional["StepInfo"] = None,
        **kwargs: Any,
    ) -> tuple[Dict[int, float], Dict[str, Any]]:
        """
        Coverage changes for this step.

        State structure:
            {
                "network": NetworkState,
                "observations": {relay_id: observed state},
            }

        Each relay decides from its own observation and the current link
        failure rate only; no relay sees another relay's state.

        Returns:
            Tuple of:
                - Dict mapping relay id to a coverage change
                - Metadata dict
        """

    @abstractmethod
    def start_for(self, beta: float) -> RelayStart:
        """Initial state and coverage for relays placed while β = `beta`."""

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(name='{self.name}')"
