from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Mapping, Optional


@dataclass(frozen=True)
class AgentSpec:
    """
    How to build one strategy: a registry key ("proposed", "myopic",
    "fixed") or an import path like "pkg.module.Class", plus constructor
    keyword arguments.
    """

    type: str
    name: Optional[str] = None
    init_params: Mapping[str, Any] = field(default_factory=dict)

    @property
    def label(self) -> str:
        """Name used in result files."""
        return self.name or self.type

    @classmethod
    def parse(cls, value: "str | Mapping[str, Any] | AgentSpec") -> "AgentSpec":
        """Accept a bare strategy key, a mapping, or an existing spec."""
        if isinstance(value, AgentSpec):
            return value
        if isinstance(value, str):
            return cls(type=value)
        return cls.from_dict(value)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "AgentSpec":
        strategy = data.get("type")
        if not strategy:
            raise ValueError(f"Strategy spec needs a 'type', got keys {sorted(data)}")
        return cls(type=strategy, name=data.get("name"), init_params=dict(data.get("init_params") or {}))

    def to_dict(self) -> Dict[str, Any]:
        return {"type": self.type, "name": self.name, "init_params": dict(self.init_params)}
