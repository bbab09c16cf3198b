"""
Experiment configuration for network-formation runs.

An ExperimentConfig holds everything needed to build the per-relay MDPs,
place a network and run the simulator: region and density, endpoints and
flows, the MDP grid, the link-failure schedule, coding parameters, power
model, strategies, seeds and output paths. The key set is flat so a config
file reads like the parameter table of an experiment.

Example:
    config = ExperimentConfig(width=8, height=8, lam=0.8, horizon=200)
    config.save_json("storage/configs/small.json")
    config = ExperimentConfig.load_json("storage/configs/small.json")
"""

from __future__ import annotations

import json
import math
import time
from pathlib import Path
from typing import Any, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from coding.packet import FlowSpec, ServiceOrder
from infra.logger import get_logger
from infra.paths import CONFIG_STORAGE_DIR, PROJECT_ROOT, RESULTS_DIR
from mdp.model import GammaName, MdpModel, symmetric_actions

logger = get_logger(__name__)

StrategyName = Literal["proposed", "myopic", "fixed"]
FlowMode = Literal["pairwise", "multicast"]
SweepParameter = Literal["omega", "beta", "rho", "area"]

STRATEGY_ORDER: Tuple[str, ...] = ("proposed", "myopic", "fixed")


class ConfigError(ValueError):
    """A configuration is unusable for the requested command."""


class ExperimentConfig(BaseModel):
    """
    A complete, self-contained experiment definition.

    Coverage is measured in squared model units; `unit_length_m` converts
    model lengths to metres for power and radius reporting.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str = "custom"

    # Region and density
    width: float = Field(6.0, gt=0, description="Region width in model units")
    height: float = Field(6.0, gt=0, description="Region height in model units")
    unit_length_m: float = Field(1.0, gt=0, description="Metres per model unit")
    lam: float = Field(0.8, gt=0, description="Relay density λ per unit area")

    # Endpoints and flows
    num_sources: int = Field(2, ge=1)
    num_terminals: int = Field(2, ge=1)
    source_positions: Optional[List[Tuple[float, float]]] = None
    terminal_positions: Optional[List[Tuple[float, float]]] = None
    flows: Optional[FlowMode] = None
    source_coverage: float = Field(4.0, gt=0)

    # Relay MDP
    num_states: int = Field(20, ge=1)
    num_actions: int = Field(5, ge=1)
    action_step: float = Field(0.4, gt=0)
    omega: float = Field(0.55, ge=0, le=1)
    u: Optional[float] = None
    rho: float = Field(0.5, ge=0, lt=1, description="Discount factor; 1 leaves the stopping rule undefined")
    epsilon: float = Field(0.01, gt=0)
    gamma: GammaName = "log"
    gamma_scale: float = Field(1.0, gt=0)
    gamma_cap: float = Field(4.0, gt=0)
    range_ref: Optional[float] = Field(None, gt=0)

    # Link failures and dynamics
    beta: float = Field(0.0, ge=0, lt=1)
    dynamic: bool = False
    mobility_sigma: float = Field(0.1, ge=0)
    membership_interval: int = Field(5, ge=1)
    beta_interval: int = Field(5, ge=1)
    beta_range: Tuple[float, float] = (0.0, 0.3)
    beta_bands: List[float] = Field(default_factory=lambda: [0.0, 0.1, 0.2, 0.3])

    # Coding
    ttl: int = Field(16, ge=0)
    payload_symbols: int = Field(32, ge=1)
    field_degree: int = Field(8, ge=2, le=16)
    nonzero_coefficients: bool = False
    service_order: ServiceOrder = "newest"
    single_generation: bool = False

    # Rates and power
    data_bits: int = Field(910_000, gt=0, description="Bits per generation of one source")
    unit_time_ms: float = Field(1.0, gt=0)
    eta: float = Field(1.0, gt=0)
    alpha: float = Field(2.0, gt=0)
    min_coverage: Optional[float] = Field(None, gt=0)
    fixed_coverage: Optional[float] = Field(None, gt=0)

    # Runs and output
    strategies: List[StrategyName] = Field(default_factory=lambda: list(STRATEGY_ORDER))
    seeds: List[int] = Field(default_factory=lambda: [0])
    horizon: int = Field(100, ge=1)
    output_dir: str = str(RESULTS_DIR)
    event_log: bool = False

    # Sweep grids
    sweep_omega: List[float] = Field(default_factory=list)
    sweep_beta: List[float] = Field(default_factory=list)
    sweep_rho: List[float] = Field(default_factory=list)
    sweep_area: List[float] = Field(default_factory=list)

    # ------------------------------------------------------------------#
    # Validation
    # ------------------------------------------------------------------#
    @field_validator("num_actions")
    @classmethod
    def _odd_action_count(cls, value: int) -> int:
        if value % 2 == 0:
            raise ValueError(f"num_actions must be odd to hold a symmetric grid around 0, got {value}")
        return value

    @field_validator("seeds")
    @classmethod
    def _seeds_present(cls, value: List[int]) -> List[int]:
        if not value:
            raise ValueError("At least one seed is required")
        if len(set(value)) != len(value):
            raise ValueError(f"Duplicate seeds: {value}")
        return value

    @field_validator("strategies")
    @classmethod
    def _strategies_present(cls, value: List[str]) -> List[str]:
        if not value:
            raise ValueError("At least one strategy is required")
        if len(set(value)) != len(value):
            raise ValueError(f"Duplicate strategies: {value}")
        return value

    @field_validator("beta_bands")
    @classmethod
    def _bands_increasing(cls, value: List[float]) -> List[float]:
        if len(value) < 2:
            raise ValueError("beta_bands needs at least two edges")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError(f"beta_bands must be strictly increasing: {value}")
        if value[0] < 0 or value[-1] >= 1:
            raise ValueError(f"beta_bands must lie in [0, 1): {value}")
        return value

    @field_validator("sweep_beta")
    @classmethod
    def _sweep_betas_valid(cls, value: List[float]) -> List[float]:
        bad = [b for b in value if not 0 <= b < 1]
        if bad:
            raise ValueError(f"Swept link failure rates must lie in [0, 1): {bad}")
        return value

    @field_validator("sweep_rho")
    @classmethod
    def _sweep_rhos_valid(cls, value: List[float]) -> List[float]:
        bad = [r for r in value if not 0 <= r < 1]
        if bad:
            raise ValueError(f"Swept discount factors must lie in [0, 1): {bad}")
        return value

    @field_validator("sweep_omega")
    @classmethod
    def _sweep_omegas_valid(cls, value: List[float]) -> List[float]:
        bad = [w for w in value if not 0 <= w <= 1]
        if bad:
            raise ValueError(f"Swept weights must lie in [0, 1]: {bad}")
        return value

    @field_validator("sweep_area")
    @classmethod
    def _sweep_areas_valid(cls, value: List[float]) -> List[float]:
        bad = [a for a in value if a <= 0]
        if bad:
            raise ValueError(f"Swept areas must be positive: {bad}")
        return value

    @model_validator(mode="after")
    def _consistent(self) -> "ExperimentConfig":
        low, high = self.beta_range
        if not 0 <= low <= high < 1:
            raise ValueError(f"beta_range must satisfy 0 <= low <= high < 1, got {self.beta_range}")
        if self.dynamic and not (self.beta_bands[0] <= low and high <= self.beta_bands[-1]):
            raise ValueError(f"beta_range {self.beta_range} falls outside beta_bands {self.beta_bands}")
        if self.flows == "pairwise" and self.num_sources != self.num_terminals:
            raise ValueError("Pairwise flows need as many terminals as sources")
        for label, positions, count in (
            ("source_positions", self.source_positions, self.num_sources),
            ("terminal_positions", self.terminal_positions, self.num_terminals),
        ):
            if positions is None:
                continue
            if len(positions) != count:
                raise ValueError(f"{label} has {len(positions)} entries for {count} nodes")
            outside = [p for p in positions if not (0 <= p[0] <= self.width and 0 <= p[1] <= self.height)]
            if outside:
                raise ValueError(f"{label} outside the region: {outside}")
        # surfaces action-grid and γ problems at load time
        for beta in self.policy_betas():
            self.mdp_model(beta)
        return self

    # ------------------------------------------------------------------#
    # Derived quantities
    # ------------------------------------------------------------------#
    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def actions(self) -> tuple[float, ...]:
        return symmetric_actions(self.num_actions, self.action_step)

    @property
    def coverage_floor(self) -> float:
        """Smallest coverage a relay may shrink to."""
        if self.min_coverage is not None:
            return self.min_coverage
        positive = [a for a in self.actions if a > 0]
        return min(positive) if positive else self.action_step

    def mdp_model(self, beta: float | None = None, **overrides: Any) -> MdpModel:
        """The relay MDP at link failure rate `beta` (defaults to the config's β)."""
        params: dict[str, Any] = dict(
            num_states=self.num_states,
            num_actions=self.num_actions,
            action_step=self.action_step,
            lam=self.lam,
            beta=self.beta if beta is None else beta,
            omega=self.omega,
            u=self.u,
            rho=self.rho,
            range_ref=self.range_ref,
            gamma=self.gamma,
            gamma_scale=self.gamma_scale,
            gamma_cap=self.gamma_cap,
        )
        params.update(overrides)
        return MdpModel.build(**params)

    def policy_betas(self) -> list[float]:
        """One β per policy band: the band midpoints when β changes, otherwise β itself."""
        if not self.dynamic:
            return [self.beta]
        edges = self.beta_bands
        return [round((a + b) / 2, 12) for a, b in zip(edges, edges[1:])]

    def band_index(self, beta: float) -> int:
        """Index of the policy band holding `beta`; the top edge belongs to the last band."""
        if not self.dynamic:
            return 0
        edges = self.beta_bands
        for i, upper in enumerate(edges[1:]):
            if beta < upper:
                return i
        return len(edges) - 2

    def flow_spec(self) -> FlowSpec:
        mode = self.flows
        if mode is None:
            mode = "pairwise" if self.num_sources == self.num_terminals else "multicast"
        if mode == "pairwise":
            return FlowSpec.pairwise(self.num_sources)
        return FlowSpec.multicast(self.num_sources, self.num_terminals)

    def sweep_grid(self, parameter: SweepParameter) -> list[float]:
        grid = getattr(self, f"sweep_{parameter}")
        if not grid:
            raise ConfigError(f"Sweep grid for '{parameter}' is empty")
        return list(grid)

    def with_area(self, area: float) -> "ExperimentConfig":
        """Square region of the given area, keeping explicit endpoint positions scaled."""
        side = math.sqrt(area)
        scale_x, scale_y = side / self.width, side / self.height

        def _scaled(points):
            if points is None:
                return None
            return [(x * scale_x, y * scale_y) for x, y in points]

        return self.clone(
            width=side,
            height=side,
            source_positions=_scaled(self.source_positions),
            terminal_positions=_scaled(self.terminal_positions),
        )

    # ------------------------------------------------------------------#
    # Serialization
    # ------------------------------------------------------------------#
    def to_json_dict(self) -> dict[str, Any]:
        return self.model_dump(mode="json")

    @classmethod
    def from_json_dict(cls, data: dict[str, Any]) -> "ExperimentConfig":
        return cls.model_validate(data)

    def clone(self, **overrides: Any) -> "ExperimentConfig":
        """Re-validated copy with some keys replaced."""
        return type(self).model_validate({**self.to_json_dict(), **overrides})

    def save_json(self, filepath: str | Path | None = None, indent: int = 2) -> Path:
        """
        Save the config as JSON.

        Args:
            filepath: target file; None picks a timestamped name under storage/configs
            indent: JSON indentation

        Returns:
            The written path
        """
        if filepath is None:
            CONFIG_STORAGE_DIR.mkdir(parents=True, exist_ok=True)
            timestamp = time.strftime("%Y%m%d_%H%M%S")
            filepath = CONFIG_STORAGE_DIR / f"{self.name}_{timestamp}.json"
        else:
            filepath = Path(filepath)
            if not filepath.is_absolute():
                filepath = PROJECT_ROOT / filepath
            filepath.parent.mkdir(parents=True, exist_ok=True)

        logger.info("Saving experiment config to %s", filepath)
        filepath.write_text(json.dumps(self.to_json_dict(), indent=indent), encoding="utf-8")
        return filepath

    @classmethod
    def load_json(cls, filepath: str | Path) -> "ExperimentConfig":
        """
        Load a config file.

        Raises:
            ConfigError: the file is missing or is not valid JSON
            pydantic.ValidationError: the keys fail validation
        """
        path = Path(filepath)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError as exc:
            raise ConfigError(f"Config file not found: {path}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"Config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"Config file {path} must hold a JSON object")
        return cls.from_json_dict(data)

    def __str__(self) -> str:
        return f"ExperimentConfig({self.name}, area={self.area:g}, lam={self.lam:g}, horizon={self.horizon})"


def describe_validation_error(exc: ValidationError) -> str:
    """One line per failing key, for CLI diagnostics."""
    lines = []
    for err in exc.errors():
        where = ".".join(str(p) for p in err.get("loc", ())) or "<config>"
        lines.append(f"{where}: {err.get('msg')}")
    return "; ".join(lines)
