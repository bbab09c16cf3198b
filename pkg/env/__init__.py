"""
Network simulator - a discrete-time dynamic ad hoc network with RLNC relaying.

Quick Start:
    from env import NetworkEnv, ExperimentConfig

    config = ExperimentConfig(horizon=50)
    env = NetworkEnv(config)
    state = env.reset(seed=0)

    actions = {}  # relay_id -> coverage change
    state, row, done, info = env.step(actions)
"""

__version__ = "0.1.0"

# Main environment interface
from .environment import NetworkEnv, StepInfo, generate_network, lattice_network, relay_start, start_from

# Configuration
from .scenario import ConfigError, ExperimentConfig

# Core types available at package level
from .core import NodeId, NodeKind, Position

__all__ = [
    "NetworkEnv",
    "StepInfo",
    "generate_network",
    "lattice_network",
    "relay_start",
    "start_from",
    "ConfigError",
    "ExperimentConfig",
    "NodeId",
    "NodeKind",
    "Position",
]
