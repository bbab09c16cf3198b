"""
Per-relay coverage MDP: model, value-iteration solver and stationary analysis.
"""

from .model import MdpModel, effective_to_raw, make_gamma, raw_to_effective, state_space_bound, symmetric_actions, transition, utility
from .solver import (
    ConvergenceError,
    Policy,
    bellman_backup,
    evaluate_policy,
    greedy_actions,
    myopic_policy,
    optimal_values,
    q_values,
    solve_policy,
)
from .stationary import (
    ChainClass,
    ChainFallbackWarning,
    MisclassificationError,
    PolicyChain,
    StationaryReport,
    StructuralError,
    analyze,
    canonical_form,
    induce_chain,
    initial_state,
    limiting_absorbing,
    limiting_ergodic,
    limiting_matrix_power,
    simulate_chain,
)

__all__ = [
    "MdpModel",
    "effective_to_raw",
    "make_gamma",
    "raw_to_effective",
    "state_space_bound",
    "symmetric_actions",
    "transition",
    "utility",
    "ConvergenceError",
    "Policy",
    "bellman_backup",
    "evaluate_policy",
    "greedy_actions",
    "myopic_policy",
    "optimal_values",
    "q_values",
    "solve_policy",
    "ChainClass",
    "ChainFallbackWarning",
    "MisclassificationError",
    "PolicyChain",
    "StationaryReport",
    "StructuralError",
    "analyze",
    "canonical_form",
    "induce_chain",
    "initial_state",
    "limiting_absorbing",
    "limiting_ergodic",
    "limiting_matrix_power",
    "simulate_chain",
]
