"""
Value iteration with the ε-optimal stopping rule, plus policy evaluation.

Iteration starts from V = 0 and stops once ‖V_{k+1} - V_k‖∞ ≤ (1 - ρ)ε / (2ρ);
the greedy policy of the last iterate is then within ε of optimal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from infra.logger import get_logger

from .model import MdpModel

log = get_logger(__name__)

TIE_TOLERANCE = 1e-12
DEFAULT_MAX_ITERATIONS = 100_000


class ConvergenceError(RuntimeError):
    """Value iteration hit its iteration cap."""


# ============================================================================
# POLICY
# ============================================================================

@dataclass(frozen=True, eq=False)
class Policy:
    """
    A state → action map with the value vector it was derived from.

    Attributes:
        model: the MDP it solves
        action_indices: index into `model.actions`, one per state 1..S_max
        value: final value iterate V(s)
        epsilon: certified optimality level (inf when uncertified)
        iterations: Bellman backups performed
        residuals: ‖V_k - V_{k-1}‖∞ per iteration
    """

    model: MdpModel
    action_indices: tuple[int, ...]
    value: np.ndarray
    epsilon: float = float("inf")
    iterations: int = 0
    residuals: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if len(self.action_indices) != self.model.num_states:
            raise ValueError(
                f"Policy covers {len(self.action_indices)} states, model has {self.model.num_states}"
            )
        if any(not 0 <= i < self.model.num_actions for i in self.action_indices):
            raise ValueError("Policy refers to actions outside the model's action set")
        value = np.array(self.value, dtype=float, copy=True)
        value.flags.writeable = False
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "action_indices", tuple(int(i) for i in self.action_indices))

    @property
    def actions(self) -> np.ndarray:
        """π(s) for s = 1..S_max."""
        return self.model.action_array[list(self.action_indices)]

    def action(self, s: int) -> float:
        return float(self.model.actions[self.action_indices[self.model.state_index(s)]])

    def __call__(self, s: int) -> float:
        return self.action(s)

    def triples(self) -> list[tuple[int, float, float]]:
        return [(int(s), self.action(int(s)), float(v)) for s, v in zip(self.model.states, self.value)]

    # ------------------------------------------------------------------#
    # Structured-text export
    # ------------------------------------------------------------------#
    def to_dict(self) -> dict[str, Any]:
        return {
            "rho": self.model.rho,
            "epsilon": self.epsilon if np.isfinite(self.epsilon) else None,
            "iterations": self.iterations,
            "model": self.model.to_dict(),
            "policy": [{"state": s, "action": a, "value": v} for s, a, v in self.triples()],
            "residuals": list(self.residuals),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Policy":
        model = MdpModel.from_dict(data["model"])
        rows = sorted(data["policy"], key=lambda row: row["state"])
        if [row["state"] for row in rows] != list(range(1, model.num_states + 1)):
            raise ValueError("Policy file must list every state exactly once")
        epsilon = data.get("epsilon")
        return cls(
            model=model,
            action_indices=tuple(model.action_index(row["action"]) for row in rows),
            value=np.array([row["value"] for row in rows], dtype=float),
            epsilon=float("inf") if epsilon is None else float(epsilon),
            iterations=int(data.get("iterations", 0)),
            residuals=tuple(data.get("residuals", ())),
        )

    def save_json(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_dict(), indent=2), encoding="utf-8")
        return path

    @classmethod
    def load_json(cls, path: str | Path) -> "Policy":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


# ============================================================================
# BELLMAN OPERATOR
# ============================================================================

def q_values(v: np.ndarray, model: MdpModel) -> np.ndarray:
    """Q[a, s] = r[a, s] + ρ Σ_s' P(s'|s,a) v(s')."""
    v = np.asarray(v, dtype=float)
    if v.shape != (model.num_states,):
        raise ValueError(f"Value vector needs {model.num_states} entries, got shape {v.shape}")
    return model.expected_utility + model.rho * (model.kernel @ v)


def bellman_backup(v: np.ndarray, model: MdpModel) -> np.ndarray:
    """(T*v)(s) = max_a Q[a, s]."""
    return q_values(v, model).max(axis=0)


def _preference_order(model: MdpModel) -> list[int]:
    # smallest |a| first, negative before positive
    return sorted(range(model.num_actions), key=lambda i: (abs(model.actions[i]), model.actions[i] > 0))


def greedy_actions(q: np.ndarray, model: MdpModel) -> tuple[int, ...]:
    """Argmax per state with deterministic tie-breaking toward cheaper actions."""
    order = _preference_order(model)
    best = q.max(axis=0)
    chosen = []
    for s in range(model.num_states):
        chosen.append(next(i for i in order if q[i, s] >= best[s] - TIE_TOLERANCE))
    return tuple(chosen)


def stopping_threshold(epsilon: float, rho: float) -> float:
    if rho == 0.0:
        return float("inf")
    return (1.0 - rho) * epsilon / (2.0 * rho)


# ============================================================================
# SOLVERS
# ============================================================================

def solve_policy(
    model: MdpModel,
    epsilon: float = 0.01,
    *,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> Policy:
    """
    ε-optimal policy by value iteration.

    With ρ = 0 a single sweep is made and the result is the myopic policy.

    Raises:
        ValueError: ε <= 0
        ConvergenceError: the stopping rule was not met within `max_iterations`
    """
    if epsilon <= 0:
        raise ValueError(f"Epsilon must be positive, got {epsilon}")
    threshold = stopping_threshold(epsilon, model.rho)

    v = np.zeros(model.num_states)
    residuals: list[float] = []
    for _ in range(max_iterations):
        v_next = bellman_backup(v, model)
        residual = float(np.max(np.abs(v_next - v)))
        residuals.append(residual)
        v = v_next
        if residual <= threshold:
            break
    else:
        raise ConvergenceError(
            f"Value iteration did not reach residual {threshold:.3g} in {max_iterations} iterations "
            f"(last {residuals[-1]:.3g})"
        )

    policy = Policy(
        model=model,
        action_indices=greedy_actions(q_values(v, model), model),
        value=v,
        epsilon=epsilon,
        iterations=len(residuals),
        residuals=tuple(residuals),
    )
    log.debug("Solved MDP: rho=%.3f beta=%.3f iterations=%d", model.rho, model.beta, policy.iterations)
    return policy


def myopic_policy(model: MdpModel) -> Policy:
    """Best expected immediate utility in every state, ignoring the future."""
    r = model.expected_utility
    return Policy(
        model=model,
        action_indices=greedy_actions(np.asarray(r), model),
        value=r.max(axis=0),
        iterations=1,
    )


def policy_matrices(action_indices: Sequence[int], model: MdpModel) -> tuple[np.ndarray, np.ndarray]:
    """(P_π, r_π) for a deterministic stationary policy."""
    rows = np.arange(model.num_states)
    idx = np.asarray(action_indices)
    return model.kernel[idx, rows], model.expected_utility[idx, rows]


def evaluate_policy(policy: Policy | Sequence[int], model: MdpModel | None = None) -> np.ndarray:
    """Exact V^π from the linear system (I - ρP_π)V = r_π."""
    if isinstance(policy, Policy):
        model = model or policy.model
        indices: Sequence[int] = policy.action_indices
    else:
        if model is None:
            raise ValueError("A model is needed to evaluate raw action indices")
        indices = policy
    P_pi, r_pi = policy_matrices(indices, model)
    return np.linalg.solve(np.eye(model.num_states) - model.rho * P_pi, r_pi)


def optimal_values(
    model: MdpModel,
    tol: float = 1e-13,
    *,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> np.ndarray:
    """V* by iterating the Bellman operator until successive iterates differ by at most `tol`."""
    v = np.zeros(model.num_states)
    for _ in range(max_iterations):
        v_next = bellman_backup(v, model)
        if np.max(np.abs(v_next - v)) <= tol:
            return v_next
        v = v_next
    raise ConvergenceError(f"Optimal values did not settle to {tol:g} in {max_iterations} iterations")
