from __future__ import annotations

import importlib
import pkgutil
from typing import Callable, Dict, List, Type, TypeVar

import agents

from .base_agent import BaseAgent

STRATEGY_REGISTRY: Dict[str, Type[BaseAgent]] = {}
AgentType = TypeVar("AgentType", bound=Type[BaseAgent])
_discovered = False
# plumbing modules that never register strategies
_SKIP_MODULES = {
    "agents.base_agent",
    "agents.factory",
    "agents.policy_book",
    "agents.registry",
    "agents.spec",
}


def register_agent(key: str, cls: AgentType | None = None) -> AgentType | Callable[[AgentType], AgentType]:
    """
    Register a strategy class under a key for config-based lookup.

    Works as a decorator, `@register_agent("fixed")`, or as a direct call,
    `register_agent("fixed", FixedRangeAgent)`.

    Raises:
        ValueError: the key already belongs to another class
    """
    def decorator(target_cls: AgentType) -> AgentType:
        existing = STRATEGY_REGISTRY.get(key)
        if existing is not None and existing is not target_cls:
            raise ValueError(f"Strategy key '{key}' already registered to {existing.__name__}")
        STRATEGY_REGISTRY[key] = target_cls
        return target_cls

    if cls is None:
        return decorator

    return decorator(cls)


def registered_strategies() -> List[str]:
    _autodiscover_agents()
    return sorted(STRATEGY_REGISTRY)


def resolve_agent_class(type_ref: str) -> Type[BaseAgent]:
    """
    Resolve a strategy class from a registry key or an import path.

    Raises:
        ValueError: unknown key without a module path
        TypeError: the import path names something that is not a BaseAgent
    """
    _autodiscover_agents()

    if type_ref in STRATEGY_REGISTRY:
        return STRATEGY_REGISTRY[type_ref]

    if "." not in type_ref:
        raise ValueError(
            f"Unknown strategy '{type_ref}'. Known strategies: {sorted(STRATEGY_REGISTRY)}; "
            "or give an import path like 'pkg.module.Class'."
        )

    module_name, class_name = type_ref.rsplit(".", 1)
    module = importlib.import_module(module_name)
    cls = getattr(module, class_name)

    if not (isinstance(cls, type) and issubclass(cls, BaseAgent)):
        raise TypeError(f"{type_ref} is not a BaseAgent subclass")

    return cls


def _autodiscover_agents() -> None:
    """Import every strategy module once so @register_agent decorators run."""
    global _discovered
    if _discovered:
        return

    for module_info in pkgutil.iter_modules(agents.__path__, agents.__name__ + "."):
        if module_info.name in _SKIP_MODULES:
            continue
        importlib.import_module(module_info.name)

    _discovered = True
