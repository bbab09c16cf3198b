from __future__ import annotations

from typing import Any, Mapping

from env.scenario import ExperimentConfig

from .base_agent import BaseAgent
from .registry import resolve_agent_class
from .spec import AgentSpec


def create_agent_from_spec(spec: "AgentSpec | str | Mapping[str, Any]", config: ExperimentConfig) -> BaseAgent:
    """
    Instantiate a strategy for `config`.

    Raises:
        ValueError: unknown strategy key
        TypeError: the resolved class is not a BaseAgent
    """
    spec = AgentSpec.parse(spec)
    cls = resolve_agent_class(spec.type)
    agent = cls(**{**spec.init_params, "config": config, "name": spec.label})
    if not isinstance(agent, BaseAgent):
        raise TypeError(f"Agent {cls} is not a BaseAgent")
    return agent


def create_agent(strategy: str, config: ExperimentConfig) -> BaseAgent:
    return create_agent_from_spec(strategy, config)
