"""
Policies solved once per link-failure band and looked up during simulation.

Relays never re-solve while a run is in progress: a book holds one policy
and its stationary report per β band and answers lookups by the current β.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Dict, List, Literal

from env.environment import start_from
from env.mechanics.placement import RelayStart
from env.scenario import ExperimentConfig
from infra.logger import get_logger
from mdp.model import MdpModel
from mdp.solver import Policy, myopic_policy, solve_policy
from mdp.stationary import StationaryReport, analyze

log = get_logger(__name__)

SolverName = Literal["value-iteration", "myopic"]

_CACHE: Dict[tuple[str, str], "PolicyBook"] = {}


@dataclass(frozen=True, eq=False)
class PolicyEntry:
    beta: float
    policy: Policy
    report: StationaryReport


class PolicyBook:
    """
    One solved policy per β band of a config.

    Attributes:
        config: the config whose bands were solved
        solver: "value-iteration" or "myopic"
        entries: one PolicyEntry per band, in band order
    """

    def __init__(self, config: ExperimentConfig, solver: SolverName, entries: List[PolicyEntry]):
        if not entries:
            raise ValueError("A policy book needs at least one band")
        self.config = config
        self.solver = solver
        self.entries = entries

    @classmethod
    def build(cls, config: ExperimentConfig, solver: SolverName = "value-iteration") -> "PolicyBook":
        solve: Callable[[MdpModel], Policy]
        if solver == "value-iteration":
            def solve(model: MdpModel) -> Policy:
                return solve_policy(model, config.epsilon)
        elif solver == "myopic":
            solve = myopic_policy
        else:
            raise ValueError(f"Unknown solver '{solver}'")

        entries = []
        for beta in config.policy_betas():
            policy = solve(config.mdp_model(beta))
            entries.append(PolicyEntry(beta, policy, analyze(policy)))
            log.debug(
                "Band beta=%.3f: %s policy, %d iterations, s_dagger=%d",
                beta, solver, policy.iterations, entries[-1].report.initial_state,
            )
        return cls(config, solver, entries)

    @classmethod
    def cached(cls, config: ExperimentConfig, solver: SolverName = "value-iteration") -> "PolicyBook":
        """Build once per (config, solver) within a process."""
        key = (json.dumps(config.to_json_dict(), sort_keys=True), solver)
        book = _CACHE.get(key)
        if book is None:
            book = _CACHE[key] = cls.build(config, solver)
        return book

    def entry(self, beta: float) -> PolicyEntry:
        return self.entries[self.config.band_index(beta)]

    def policy_for(self, beta: float) -> Policy:
        return self.entry(beta).policy

    def action(self, state: int, beta: float) -> float:
        return self.policy_for(beta)(state)

    def start_for(self, beta: float) -> RelayStart:
        report = self.entry(beta).report
        return start_from(self.config, report.initial_state, report.initial_coverage)
