import json
import math

import pytest
from pydantic import ValidationError

from env.scenario import ConfigError, ExperimentConfig, describe_validation_error


def test_json_round_trip(tmp_path):
    config = ExperimentConfig(name="roundtrip", width=5, height=7, seeds=[1, 2], sweep_rho=[0.3, 0.6])
    path = config.save_json(tmp_path / "config.json")
    loaded = ExperimentConfig.load_json(path)
    assert loaded == config
    assert loaded.area == 35


@pytest.mark.parametrize(
    "overrides",
    [
        {"rho": 1.0},
        {"width": 0},
        {"num_actions": 4},
        {"beta": 1.0},
        {"num_sources": 2, "num_terminals": 3, "flows": "pairwise"},
        {"num_sources": 1, "num_terminals": 1, "source_positions": [(100.0, 0.0)]},
    ],
)
def test_invalid_configs_are_rejected(overrides):
    with pytest.raises(ValidationError):
        ExperimentConfig(**overrides)


def test_dynamic_beta_range_must_fit_the_bands():
    with pytest.raises(ValidationError):
        ExperimentConfig(dynamic=True, beta_range=(0.0, 0.5), beta_bands=[0.0, 0.3])


def test_validation_errors_name_the_key():
    with pytest.raises(ValidationError) as info:
        ExperimentConfig(rho=2.0)
    assert describe_validation_error(info.value).startswith("rho:")


def test_load_missing_file_raises_config_error(tmp_path):
    with pytest.raises(ConfigError):
        ExperimentConfig.load_json(tmp_path / "absent.json")


def test_load_non_object_raises_config_error(tmp_path):
    path = tmp_path / "list.json"
    path.write_text(json.dumps([1, 2, 3]))
    with pytest.raises(ConfigError):
        ExperimentConfig.load_json(path)


def test_empty_sweep_grid_raises_config_error():
    with pytest.raises(ConfigError):
        ExperimentConfig().sweep_grid("omega")


def test_with_area_scales_region_and_endpoints():
    config = ExperimentConfig(width=4, height=4, num_sources=1, num_terminals=1,
                              source_positions=[(0.0, 2.0)], terminal_positions=[(4.0, 2.0)])
    bigger = config.with_area(64.0)
    assert bigger.width == pytest.approx(8.0) and bigger.height == pytest.approx(8.0)
    assert bigger.source_positions == [(0.0, pytest.approx(4.0))]
    assert bigger.terminal_positions[0][0] == pytest.approx(8.0)


def test_policy_bands():
    static = ExperimentConfig(beta=0.2)
    assert static.policy_betas() == [0.2]
    assert static.band_index(0.25) == 0

    dynamic = ExperimentConfig(dynamic=True)
    assert dynamic.policy_betas() == [0.05, 0.15, 0.25]
    assert dynamic.band_index(0.0) == 0
    assert dynamic.band_index(0.1) == 1
    assert dynamic.band_index(0.3) == 2


def test_flow_spec_follows_endpoint_counts():
    assert ExperimentConfig(num_sources=2, num_terminals=2).flow_spec().num_sources == 2
    multicast = ExperimentConfig(num_sources=3, num_terminals=2).flow_spec()
    assert multicast.terminals == frozenset({1, 2})
    assert multicast.sources_of(1) == [1, 2, 3]


def test_coverage_floor_defaults_to_smallest_growth():
    config = ExperimentConfig(num_actions=5, action_step=0.4)
    assert config.coverage_floor == pytest.approx(0.4)
    assert ExperimentConfig(min_coverage=0.1).coverage_floor == 0.1


def test_mdp_model_uses_config_parameters():
    config = ExperimentConfig(num_states=12, rho=0.6, beta=0.1)
    model = config.mdp_model()
    assert model.num_states == 12
    assert model.rho == 0.6
    assert model.beta == 0.1
    assert math.isclose(config.mdp_model(0.2).beta, 0.2)
