"""
The Markov chain a fixed policy induces on the state grid, and its limit.

Rows with π(s) = 0 are unit rows, so the chain is absorbing whenever some
relay state stops adapting and every other state drifts into one of them.
Otherwise a policy mixing grow and shrink actions yields a chain whose square
is strictly positive, and the limit is the unique left eigenvector for 1.
"""

from __future__ import annotations

import bisect
import json
import warnings
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np

from infra.logger import get_logger

from .model import MdpModel
from .solver import ConvergenceError, Policy, policy_matrices

log = get_logger(__name__)

ROW_TOLERANCE = 1e-12
POWER_TOLERANCE = 1e-12
POWER_MAX_ITERATIONS = 1_000_000


class ChainClass(str, Enum):
    ABSORBING = "absorbing"
    ERGODIC = "ergodic"
    MIXED = "mixed"


class StructuralError(RuntimeError):
    """I - Q is singular: some transient state never leaves the transient block."""


class MisclassificationError(RuntimeError):
    """A limit routine was called on a chain of the wrong class."""


class ChainFallbackWarning(RuntimeWarning):
    """The chain is neither cleanly absorbing nor ergodic; matrix powers are used."""


# ============================================================================
# STRUCTURE
# ============================================================================

def _check_stochastic(matrix: np.ndarray) -> np.ndarray:
    P = np.array(matrix, dtype=float, copy=True)
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise ValueError(f"Transition matrix must be square, got shape {P.shape}")
    if np.any(P < 0) or not np.allclose(P.sum(axis=1), 1.0, atol=ROW_TOLERANCE, rtol=0):
        raise ValueError("Transition matrix rows must be nonnegative and sum to 1")
    return P


def absorbing_states(P: np.ndarray) -> np.ndarray:
    """0-based indices of unit-diagonal rows."""
    return np.flatnonzero(np.abs(np.diag(P) - 1.0) <= ROW_TOLERANCE)


def reachability(P: np.ndarray) -> np.ndarray:
    """R[i, j] is True when j can be reached from i in zero or more steps."""
    n = P.shape[0]
    R = (P > 0) | np.eye(n, dtype=bool)
    while True:
        nxt = R | ((R.astype(np.int64) @ R.astype(np.int64)) > 0)
        if np.array_equal(nxt, R):
            return R
        R = nxt


def primitive_power(P: np.ndarray) -> int | None:
    """Smallest n <= |S| with P^n entrywise positive, or None."""
    M = (P > 0).astype(np.int64)
    B = M.copy()
    for n in range(1, P.shape[0] + 1):
        if np.all(B > 0):
            return n
        B = ((B @ M) > 0).astype(np.int64)
    return None


def classify(P: np.ndarray) -> ChainClass:
    absorbing = absorbing_states(P)
    if absorbing.size:
        if reachability(P)[:, absorbing].any(axis=1).all():
            return ChainClass.ABSORBING
    elif primitive_power(P) is not None:
        return ChainClass.ERGODIC
    return ChainClass.MIXED


# ============================================================================
# LIMITS
# ============================================================================

@dataclass(frozen=True, eq=False)
class AbsorbingAnalysis:
    """
    Fundamental-matrix quantities of an absorbing chain.

    Attributes:
        transient: 0-based transient states
        absorbing: 0-based absorbing states
        F: (I - Q)^-1, expected visits between transient states
        FR: absorption probabilities, transient x absorbing
        column_sums: Σ_i FR_ij per absorbing state
        zeta: Σ_j (Σ_i FR_ij + 1)
        sigma: limit over all states, absorbing mass ∝ column_sums
        uniform_start: limit from a uniform start, (column_sums + 1) / zeta
    """

    transient: np.ndarray
    absorbing: np.ndarray
    F: np.ndarray
    FR: np.ndarray
    column_sums: np.ndarray
    zeta: float
    sigma: np.ndarray
    uniform_start: np.ndarray


def absorbing_analysis(P: np.ndarray) -> AbsorbingAnalysis:
    """
    Raises:
        MisclassificationError: no unit row
        StructuralError: I - Q singular
    """
    P = np.asarray(P, dtype=float)
    n = P.shape[0]
    absorbing = absorbing_states(P)
    if absorbing.size == 0:
        raise MisclassificationError("Chain has no absorbing state")
    transient = np.setdiff1d(np.arange(n), absorbing)

    Q = P[np.ix_(transient, transient)]
    R = P[np.ix_(transient, absorbing)]
    try:
        F = np.linalg.inv(np.eye(transient.size) - Q) if transient.size else np.zeros((0, 0))
    except np.linalg.LinAlgError as exc:
        raise StructuralError("I - Q is singular; the chain is not absorbing") from exc
    FR = F @ R
    column_sums = FR.sum(axis=0)
    zeta = float(np.sum(column_sums + 1.0))

    sigma = np.zeros(n)
    if transient.size == 0 or column_sums.sum() == 0:
        sigma[absorbing] = 1.0 / absorbing.size
    else:
        sigma[absorbing] = column_sums / column_sums.sum()
    uniform_start = np.zeros(n)
    uniform_start[absorbing] = (column_sums + 1.0) / zeta
    return AbsorbingAnalysis(transient, absorbing, F, FR, column_sums, zeta, sigma, uniform_start)


def limiting_absorbing(chain: "PolicyChain | np.ndarray") -> np.ndarray:
    P = chain.matrix if isinstance(chain, PolicyChain) else np.asarray(chain, dtype=float)
    return absorbing_analysis(P).sigma


def limiting_ergodic(chain: "PolicyChain | np.ndarray") -> np.ndarray:
    """
    σ with σP = σ, Σσ = 1, by power iteration from the uniform vector.

    Raises:
        MisclassificationError: no power P^n (n <= |S|) is strictly positive
        ConvergenceError: the L1 change did not drop to 1e-12
    """
    P = chain.matrix if isinstance(chain, PolicyChain) else np.asarray(chain, dtype=float)
    if primitive_power(P) is None:
        raise MisclassificationError("No power of the chain up to |S| is strictly positive")
    sigma = np.full(P.shape[0], 1.0 / P.shape[0])
    for _ in range(POWER_MAX_ITERATIONS):
        nxt = sigma @ P
        nxt /= nxt.sum()
        if np.abs(nxt - sigma).sum() <= POWER_TOLERANCE:
            return nxt
        sigma = nxt
    raise ConvergenceError("Power iteration did not converge")


def limiting_matrix_power(P: np.ndarray, max_squarings: int = 40) -> np.ndarray:
    """P^(2^k), squaring until the matrix stops changing or k = max_squarings."""
    L = np.asarray(P, dtype=float)
    for _ in range(max_squarings):
        nxt = L @ L
        if np.allclose(nxt, L, atol=1e-15, rtol=0):
            return nxt
        L = nxt
    return L


def initial_state(chain: "PolicyChain | np.ndarray") -> int:
    """argmax_s σ_s (1-based), ties toward the smaller state."""
    sigma = np.asarray(chain.sigma if isinstance(chain, PolicyChain) else chain, dtype=float)
    best = sigma.max()
    return int(np.flatnonzero(sigma >= best - abs(best) * 1e-12)[0]) + 1


# ============================================================================
# POLICY CHAIN
# ============================================================================

@dataclass(frozen=True, eq=False)
class CanonicalForm:
    """A state ordering and the named blocks of P under it."""

    order: tuple[int, ...]
    blocks: dict[str, np.ndarray]


@dataclass(frozen=True, eq=False)
class PolicyChain:
    """
    Row-stochastic matrix of a policy with its class and limiting distribution.

    Attributes:
        matrix: P(s, s') = P(s' | s, π(s))
        chain_class: absorbing, ergodic or mixed
        sigma: limiting distribution
        actions: π(s) per state, when built from a policy
        analysis: fundamental-matrix details for absorbing chains
    """

    matrix: np.ndarray
    chain_class: ChainClass
    sigma: np.ndarray
    actions: tuple[float, ...] | None = None
    analysis: AbsorbingAnalysis | None = None

    @classmethod
    def from_matrix(cls, matrix: np.ndarray, actions: tuple[float, ...] | None = None) -> "PolicyChain":
        P = _check_stochastic(matrix)
        P.flags.writeable = False
        chain_class = classify(P)
        analysis = None
        if chain_class is ChainClass.ABSORBING:
            analysis = absorbing_analysis(P)
            sigma = analysis.sigma
        elif chain_class is ChainClass.ERGODIC:
            sigma = limiting_ergodic(P)
        else:
            warnings.warn(
                "Chain is neither absorbing nor primitive; using matrix-power limit",
                ChainFallbackWarning,
                stacklevel=2,
            )
            sigma = limiting_matrix_power(P).mean(axis=0)
            sigma = sigma / sigma.sum()
        return cls(P, chain_class, sigma, actions, analysis)

    @property
    def num_states(self) -> int:
        return self.matrix.shape[0]

    def stationarity_residual(self) -> float:
        return float(np.max(np.abs(self.sigma @ self.matrix - self.sigma)))

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "class": self.chain_class.value,
            "matrix": self.matrix.tolist(),
            "sigma": self.sigma.tolist(),
            "initial_state": initial_state(self),
            "residual": self.stationarity_residual(),
        }
        if self.actions is not None:
            data["actions"] = list(self.actions)
        if self.analysis is not None:
            data["absorbing_states"] = (self.analysis.absorbing + 1).tolist()
            data["fr_column_sums"] = self.analysis.column_sums.tolist()
            data["zeta"] = self.analysis.zeta
        return data


def induce_chain(policy: Policy, model: MdpModel | None = None) -> PolicyChain:
    """Chain with row s equal to the kernel row of (s, π(s))."""
    model = model or policy.model
    P_pi, _ = policy_matrices(policy.action_indices, model)
    actions = tuple(float(model.actions[i]) for i in policy.action_indices)
    return PolicyChain.from_matrix(P_pi, actions)


def canonical_form(chain: PolicyChain) -> CanonicalForm:
    """
    Absorbing chains: transient states then absorbing ones, blocks Q, R, 0, I.
    Otherwise: grow states then shrink then stay, blocks U, Q1, Q2, L.
    """
    P = chain.matrix
    if chain.chain_class is ChainClass.ABSORBING and chain.analysis is not None:
        t, a = chain.analysis.transient, chain.analysis.absorbing
        order = np.concatenate([t, a])
        blocks = {
            "Q": P[np.ix_(t, t)],
            "R": P[np.ix_(t, a)],
            "0": P[np.ix_(a, t)],
            "I": P[np.ix_(a, a)],
        }
        return CanonicalForm(tuple(int(i) + 1 for i in order), blocks)

    actions = np.array(chain.actions if chain.actions is not None else np.zeros(P.shape[0]))
    grow = np.flatnonzero(actions > 0)
    shrink = np.flatnonzero(actions < 0)
    stay = np.flatnonzero(actions == 0)
    order = np.concatenate([grow, shrink, stay])
    blocks = {
        "U": P[np.ix_(grow, grow)],
        "Q1": P[np.ix_(grow, shrink)],
        "Q2": P[np.ix_(shrink, grow)],
        "L": P[np.ix_(shrink, shrink)],
    }
    return CanonicalForm(tuple(int(i) + 1 for i in order), blocks)


def simulate_chain(P: np.ndarray, steps: int, rng: np.random.Generator, start: int = 0) -> np.ndarray:
    """Empirical occupancy of a sample path of `steps` transitions."""
    P = np.asarray(P, dtype=float)
    cumulative = np.cumsum(P, axis=1)
    cumulative[:, -1] = 1.0
    rows = cumulative.tolist()
    counts = [0] * P.shape[0]
    state = start
    for u in rng.random(steps).tolist():
        state = bisect.bisect_right(rows[state], u)
        counts[state] += 1
    return np.array(counts, dtype=float) / steps


# ============================================================================
# REPORT
# ============================================================================

@dataclass(frozen=True, eq=False)
class StationaryReport:
    chain: PolicyChain
    initial_state: int
    initial_coverage: float

    def to_dict(self) -> dict[str, Any]:
        return {
            **self.chain.to_dict(),
            "initial_state": self.initial_state,
            "initial_coverage": self.initial_coverage,
        }

    def save_json(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_dict(), indent=2), encoding="utf-8")
        return path


def analyze(policy: Policy, model: MdpModel | None = None) -> StationaryReport:
    """Induce the chain, take its limit, pick s† and the coverage behind it."""
    model = model or policy.model
    chain = induce_chain(policy, model)
    s_dagger = initial_state(chain)
    log.debug("Stationary analysis: class=%s s_dagger=%d", chain.chain_class.value, s_dagger)
    return StationaryReport(chain, s_dagger, model.coverage_for_state(s_dagger))
