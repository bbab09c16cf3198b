from __future__ import annotations

import numpy as np
import pytest

from coding.galois import GaloisField
from mdp.model import MdpModel


@pytest.fixture
def gf() -> GaloisField:
    return GaloisField.get(8)


@pytest.fixture
def gf16() -> GaloisField:
    return GaloisField.get(4)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def numeric_model() -> MdpModel:
    """The 20-state, 5-action grid used for numerical studies."""
    return MdpModel.build(
        num_states=20,
        num_actions=5,
        action_step=0.4,
        lam=0.8,
        beta=0.0,
        omega=0.55,
        rho=0.5,
        gamma="saturating",
        gamma_scale=8.0,
        gamma_cap=4.0,
    )


@pytest.fixture
def small_model() -> MdpModel:
    return MdpModel.build(num_states=6, num_actions=3, action_step=0.5, lam=1.0, rho=0.7)


@pytest.fixture
def small_config():
    """A 4×4 static network, short horizon, proposed policy defaults."""
    from env.scenario import ExperimentConfig

    return ExperimentConfig(name="small", width=4.0, height=4.0, horizon=20, seeds=[0])
