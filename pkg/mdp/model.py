"""
The per-relay MDP over transmission coverage.

State s is the expected number of effective nodes (1..S_max) inside the
relay's coverage; an action is a signed change of coverage measure. With node
density λ, growing coverage by a > 0 adds Poisson(λa) raw nodes, shrinking by
|a| keeps each raw node with probability 1 - |a|/ā. Raw counts ξ map to states
through the link failure rate β: s = floor((1 - β) ξ), clipped to the grid.
Mass beyond either end of the grid is lumped onto the boundary state.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import cached_property
from typing import Any, Callable, Literal

import numpy as np
from scipy import stats

GammaName = Literal["log", "sqrt", "capped-linear", "saturating"]

ROW_TOLERANCE = 1e-12
DEFAULT_U_MARGIN = 1e-3
# ceil/floor of values that are integral up to float noise
_ROUNDING_SLACK = 1e-9


# ============================================================================
# STATE / RAW-COUNT CONVERSIONS
# ============================================================================

def _check_beta(beta: float) -> None:
    if not 0.0 <= beta < 1.0:
        raise ValueError(f"Link failure rate must be in [0, 1), got {beta}")


def effective_to_raw(s, beta: float):
    """
    Raw node count ξ = ceil(s / (1 - β)) behind an effective count s.

    Examples:
        >>> effective_to_raw(4, 0.2)
        5
        >>> effective_to_raw(3, 0.3)
        5
    """
    _check_beta(beta)
    raw = np.ceil(np.asarray(s, dtype=float) / (1.0 - beta) - _ROUNDING_SLACK).astype(np.int64)
    return int(raw) if raw.ndim == 0 else raw


def raw_to_effective(xi, beta: float, num_states: int):
    """Left inverse of `effective_to_raw`, clipped to the state grid 1..num_states."""
    _check_beta(beta)
    s = np.floor((1.0 - beta) * np.asarray(xi, dtype=float) + _ROUNDING_SLACK).astype(np.int64)
    s = np.clip(s, 1, num_states)
    return int(s) if s.ndim == 0 else s


def state_space_bound(n_nodes: int, beta: float) -> int:
    """Largest meaningful state when the node count is known: ceil(n / (1 - β))."""
    return effective_to_raw(n_nodes, beta)


# ============================================================================
# THROUGHPUT FUNCTIONS
# ============================================================================

def make_gamma(name: GammaName, scale: float = 1.0, cap: float = 4.0) -> Callable[[np.ndarray], np.ndarray]:
    """
    Concave increasing throughput γ(s). `log` is the config default; the
    bundled scenarios use `saturating`.

    - log: κ·log2(1 + s)
    - sqrt: κ·√s
    - capped-linear: κ·(min(s, c) + 0.1·max(s - c, 0))
    - saturating: κ·c·(1 - exp(-s / c))
    """
    if scale <= 0 or cap <= 0:
        raise ValueError(f"Throughput scale and cap must be positive, got {scale}, {cap}")
    if name == "log":
        return lambda s: scale * np.log2(1.0 + np.asarray(s, dtype=float))
    if name == "sqrt":
        return lambda s: scale * np.sqrt(np.asarray(s, dtype=float))
    if name == "capped-linear":
        def capped(s):
            s = np.asarray(s, dtype=float)
            return scale * (np.minimum(s, cap) + 0.1 * np.maximum(s - cap, 0.0))
        return capped
    if name == "saturating":
        return lambda s: scale * cap * (1.0 - np.exp(-np.asarray(s, dtype=float) / cap))
    raise ValueError(f"Unknown throughput preset: {name!r}")


def symmetric_actions(num_actions: int, step: float) -> tuple[float, ...]:
    """Odd-length grid (-k·step, ..., 0, ..., k·step)."""
    if num_actions < 1 or num_actions % 2 == 0:
        raise ValueError(f"Action count must be odd and positive, got {num_actions}")
    if step <= 0:
        raise ValueError(f"Action step must be positive, got {step}")
    half = num_actions // 2
    return tuple(round(k * step, 12) for k in range(-half, half + 1))


# ============================================================================
# MODEL
# ============================================================================

@dataclass(frozen=True)
class MdpModel:
    """
    The tuple ⟨S, A, P, U, ρ⟩ of a relay's coverage-control problem.

    Attributes:
        num_states: S_max; states are 1..S_max
        actions: sorted signed coverage deltas, containing 0, symmetric
        lam: node density λ (expected nodes per unit coverage)
        beta: link failure rate
        omega: weight between throughput reward and coverage cost
        u: utility offset; None picks the smallest value keeping U >= 0
            over every (s, a, s′) triple
        rho: discount factor
        range_ref: coverage ā used by the shrink kernel; None uses ξ(s)/λ
        gamma: throughput preset
        gamma_scale: κ of the preset
        gamma_cap: c of the preset
    """

    num_states: int
    actions: tuple[float, ...]
    lam: float
    beta: float = 0.0
    omega: float = 0.5
    u: float | None = None
    rho: float = 0.5
    range_ref: float | None = None
    gamma: GammaName = "log"
    gamma_scale: float = 1.0
    gamma_cap: float = 4.0

    def __post_init__(self):
        object.__setattr__(self, "actions", tuple(float(a) for a in self.actions))
        if self.num_states < 1:
            raise ValueError(f"Need at least one state, got {self.num_states}")
        if self.lam <= 0:
            raise ValueError(f"Node density must be positive, got {self.lam}")
        _check_beta(self.beta)
        if not 0.0 <= self.omega <= 1.0:
            raise ValueError(f"Weight omega must be in [0, 1], got {self.omega}")
        if not 0.0 <= self.rho < 1.0:
            raise ValueError(f"Discount factor must be in [0, 1), got {self.rho}")
        acts = np.array(self.actions)
        if acts.size == 0 or 0.0 not in self.actions:
            raise ValueError("Action set must contain 0")
        if np.any(np.diff(acts) <= 0):
            raise ValueError(f"Actions must be strictly increasing: {self.actions}")
        if not np.allclose(acts, -acts[::-1]):
            raise ValueError(f"Actions must be symmetric about 0: {self.actions}")
        if self.range_ref is not None and self.range_ref <= 0:
            raise ValueError(f"Reference coverage must be positive, got {self.range_ref}")
        shrink_limit = self.shrink_reference(1)
        if acts.max() >= shrink_limit:
            raise ValueError(
                f"Largest action {acts.max()} must stay below the smallest shrink reference {shrink_limit:.4g}"
            )
        gamma = make_gamma(self.gamma, self.gamma_scale, self.gamma_cap)
        if np.any(np.diff(gamma(self.states)) <= 0):
            raise ValueError("Throughput function must be strictly increasing on the state grid")

    @classmethod
    def build(
        cls,
        *,
        num_states: int,
        num_actions: int,
        action_step: float,
        lam: float,
        **kwargs: Any,
    ) -> "MdpModel":
        return cls(num_states=num_states, actions=symmetric_actions(num_actions, action_step), lam=lam, **kwargs)

    def replace(self, **changes: Any) -> "MdpModel":
        data = asdict(self)
        data.update(changes)
        return MdpModel(**data)

    # ------------------------------------------------------------------#
    # Grids
    # ------------------------------------------------------------------#
    @property
    def states(self) -> np.ndarray:
        return np.arange(1, self.num_states + 1)

    @property
    def action_array(self) -> np.ndarray:
        return np.array(self.actions)

    @property
    def num_actions(self) -> int:
        return len(self.actions)

    def state_index(self, s: int) -> int:
        if not 1 <= s <= self.num_states:
            raise ValueError(f"State {s} outside 1..{self.num_states}")
        return s - 1

    def action_index(self, a: float) -> int:
        matches = np.flatnonzero(np.isclose(self.action_array, a, atol=1e-9))
        if matches.size == 0:
            raise ValueError(f"Action {a} not in {self.actions}")
        return int(matches[0])

    def raw(self, s) -> int | np.ndarray:
        return effective_to_raw(s, self.beta)

    def shrink_reference(self, s: int) -> float:
        """ā used when shrinking from state s."""
        if self.range_ref is not None:
            return self.range_ref
        return effective_to_raw(s, self.beta) / self.lam

    def coverage_for_state(self, s: int) -> float:
        """Coverage whose expected raw count is ξ(s)."""
        return effective_to_raw(s, self.beta) / self.lam

    @cached_property
    def gamma_fn(self) -> Callable[[np.ndarray], np.ndarray]:
        return make_gamma(self.gamma, self.gamma_scale, self.gamma_cap)

    # ------------------------------------------------------------------#
    # Kernel and utility
    # ------------------------------------------------------------------#
    def transition(self, s: int, a: float) -> np.ndarray:
        """
        Distribution over next states 1..S_max after action `a` in state `s`.

        Any real `a` is accepted so kernels of summed actions can be compared.

        Raises:
            ValueError: s outside the grid, or a shrink with |a| >= ā
        """
        self.state_index(s)
        out = np.zeros(self.num_states)
        if a == 0:
            out[s - 1] = 1.0
            return out

        xi = self.raw(s)
        if a > 0:
            # raw counts from xi up to the first one that maps to S_max
            top = self.raw(self.num_states)
            k = np.arange(0, max(top - xi, 0))
            mean = self.lam * a
            pmf = stats.poisson.pmf(k, mean)
            np.add.at(out, raw_to_effective(xi + k, self.beta, self.num_states) - 1, pmf)
            out[-1] += stats.poisson.sf(k.size - 1, mean) if k.size else 1.0
            return out

        ref = self.shrink_reference(s)
        ratio = abs(a) / ref
        if ratio >= 1.0:
            raise ValueError(f"Shrink |a|={abs(a)} must be below the reference coverage {ref:.4g}")
        kept = np.arange(0, xi + 1)
        pmf = stats.binom.pmf(kept, xi, 1.0 - ratio)
        np.add.at(out, raw_to_effective(kept, self.beta, self.num_states) - 1, pmf)
        return out

    @cached_property
    def kernel(self) -> np.ndarray:
        """P[a, s, s'] over action and state indices."""
        P = np.empty((self.num_actions, self.num_states, self.num_states))
        for i, a in enumerate(self.actions):
            for s in self.states:
                P[i, s - 1] = self.transition(int(s), a)
        P.flags.writeable = False
        return P

    @cached_property
    def _raw_utility(self) -> np.ndarray:
        """ω(γ(s') - γ(s)) - (1 - ω)a, indexed [a, s, s']."""
        g = self.gamma_fn(self.states)
        reward = g[None, :] - g[:, None]
        cost = self.action_array[:, None, None]
        return self.omega * reward[None, :, :] - (1.0 - self.omega) * cost

    @cached_property
    def offset(self) -> float:
        """The utility offset u in force."""
        if self.u is not None:
            return float(self.u)
        worst = float(self._raw_utility.min())
        return max(0.0, -worst) + DEFAULT_U_MARGIN

    @cached_property
    def utilities(self) -> np.ndarray:
        """U[a, s, s']."""
        U = self.offset + self._raw_utility
        U.flags.writeable = False
        return U

    @cached_property
    def expected_utility(self) -> np.ndarray:
        """r[a, s] = Σ_s' P(s'|s,a) U(s,a,s')."""
        r = np.einsum("ijk,ijk->ij", self.kernel, self.utilities)
        r.flags.writeable = False
        return r

    def utility(self, s: int, a: float, s_next: int) -> float:
        g = self.gamma_fn(np.array([s, s_next]))
        return self.offset + self.omega * float(g[1] - g[0]) - (1.0 - self.omega) * a

    # ------------------------------------------------------------------#
    # Serialization
    # ------------------------------------------------------------------#
    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["actions"] = list(self.actions)
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "MdpModel":
        data = dict(data)
        data["actions"] = tuple(data["actions"])
        return cls(**data)


def transition(s: int, a: float, model: MdpModel) -> np.ndarray:
    return model.transition(s, a)


def utility(s: int, a: float, s_next: int, model: MdpModel) -> float:
    return model.utility(s, a, s_next)
