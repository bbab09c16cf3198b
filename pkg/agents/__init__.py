"""
Relay-control strategies for the network simulator.

This module provides:
- BaseAgent: abstract strategy interface
- PolicyAgent ("proposed"): value-iteration policy lookup
- MyopicAgent ("myopic"): immediate-utility policy lookup
- FixedRangeAgent ("fixed"): constant coverage baseline
- PolicyBook: policies solved once per link-failure band
"""

from .base_agent import BaseAgent
from .factory import create_agent, create_agent_from_spec
from .fixed_agent import FixedRangeAgent
from .policy_agent import MyopicAgent, PolicyAgent
from .policy_book import PolicyBook, PolicyEntry
from .registry import register_agent, registered_strategies, resolve_agent_class
from .spec import AgentSpec

__all__ = [
    "BaseAgent",
    "AgentSpec",
    "create_agent",
    "create_agent_from_spec",
    "register_agent",
    "registered_strategies",
    "resolve_agent_class",
    "FixedRangeAgent",
    "MyopicAgent",
    "PolicyAgent",
    "PolicyBook",
    "PolicyEntry",
]
