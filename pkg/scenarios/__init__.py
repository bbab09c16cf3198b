"""Built-in experiment presets."""

from typing import Callable, Dict

from env.scenario import ConfigError, ExperimentConfig

from .numeric_study import get_numeric_study_config
from .wifi_direct_app import get_wifi_direct_app_config

PRESETS: Dict[str, Callable[..., ExperimentConfig]] = {
    "numeric-study": get_numeric_study_config,
    "wifi-direct-app": get_wifi_direct_app_config,
}


def get_preset(name: str, **overrides) -> ExperimentConfig:
    """
    Raises:
        ConfigError: unknown preset name
    """
    try:
        builder = PRESETS[name]
    except KeyError:
        raise ConfigError(f"Unknown preset '{name}'. Available: {sorted(PRESETS)}") from None
    return builder(**overrides)


__all__ = ["PRESETS", "get_preset", "get_numeric_study_config", "get_wifi_direct_app_config"]
