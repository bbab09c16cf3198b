import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from mdp.model import (
    DEFAULT_U_MARGIN,
    MdpModel,
    effective_to_raw,
    make_gamma,
    raw_to_effective,
    state_space_bound,
    symmetric_actions,
    transition,
    utility,
)


def test_effective_to_raw_examples():
    assert effective_to_raw(4, 0.0) == 4
    assert effective_to_raw(4, 0.2) == 5
    assert effective_to_raw(3, 0.3) == 5


def test_effective_to_raw_rejects_certain_failure():
    with pytest.raises(ValueError):
        effective_to_raw(4, 1.0)


@pytest.mark.parametrize("beta", [0.0, 0.1, 0.2, 0.3])
def test_raw_to_effective_inverts_effective_to_raw(beta):
    states = np.arange(1, 21)
    assert np.array_equal(raw_to_effective(effective_to_raw(states, beta), beta, 20), states)


def test_state_space_bound():
    assert state_space_bound(10, 0.5) == 20
    assert state_space_bound(7, 0.0) == 7


def test_symmetric_actions():
    assert symmetric_actions(5, 0.4) == (-0.8, -0.4, 0.0, 0.4, 0.8)
    with pytest.raises(ValueError):
        symmetric_actions(4, 0.4)


@pytest.mark.parametrize("beta", [0.0, 0.1, 0.2, 0.3])
def test_kernel_rows_are_stochastic(numeric_model, beta):
    model = numeric_model.replace(beta=beta)
    P = model.kernel
    assert np.all(P >= 0)
    assert np.max(np.abs(P.sum(axis=2) - 1.0)) <= 1e-12


def test_zero_action_is_unit_mass(numeric_model):
    for s in (1, 7, 20):
        row = transition(s, 0.0, numeric_model)
        assert row[s - 1] == 1.0
        assert row.sum() == 1.0


def test_grow_keeps_state_with_poisson_zero_probability(numeric_model):
    # λa = 0.8
    row = numeric_model.transition(5, 1.0)
    assert row[4] == pytest.approx(math.exp(-0.8))
    assert np.all(row[:4] == 0)


def test_grow_tail_lumped_into_top_state(numeric_model):
    row = numeric_model.transition(19, 0.8)
    assert row[18] == pytest.approx(math.exp(-0.64))
    assert row[19] == pytest.approx(1 - math.exp(-0.64))


def test_shrink_binomial_probability():
    model = MdpModel.build(num_states=6, num_actions=3, action_step=0.5, lam=1.0, range_ref=2.0)
    row = model.transition(4, -1.0)
    assert row[1] == pytest.approx(0.375)
    assert np.all(row[4:] == 0)
    # ξ' = 0 lumps into state 1
    assert row[0] == pytest.approx(4 * 0.5**4 + 0.5**4)


def test_shrink_beyond_reference_rejected():
    model = MdpModel.build(num_states=6, num_actions=3, action_step=0.5, lam=1.0, range_ref=2.0)
    with pytest.raises(ValueError):
        model.transition(4, -2.0)


def test_action_grid_must_fit_smallest_shrink_reference():
    with pytest.raises(ValueError):
        MdpModel.build(num_states=5, num_actions=3, action_step=2.0, lam=1.0)


def test_invalid_parameters_rejected():
    with pytest.raises(ValueError):
        MdpModel.build(num_states=5, num_actions=3, action_step=0.2, lam=1.0, rho=1.0)
    with pytest.raises(ValueError):
        MdpModel.build(num_states=5, num_actions=3, action_step=0.2, lam=0.0)
    with pytest.raises(ValueError):
        MdpModel(num_states=5, actions=(0.0, 0.2), lam=1.0)


def test_grow_kernels_compose():
    model = MdpModel.build(num_states=20, num_actions=5, action_step=0.4, lam=0.8)
    grows = [a for a in model.actions if a > 0]

    def kernel(a):
        return np.vstack([model.transition(int(s), a) for s in model.states])

    for a1 in grows:
        for a2 in grows:
            assert_allclose(kernel(a1) @ kernel(a2), kernel(a1 + a2), atol=1e-10, rtol=0)


def test_utility_examples():
    model = MdpModel.build(num_states=18, num_actions=7, action_step=0.4, lam=0.8, omega=0.53, u=0.2)
    assert utility(3, 0.0, 3, model) == pytest.approx(0.2)
    expected = 0.2 + 0.53 * (math.log2(6) - math.log2(4)) - 0.47 * 1.0
    assert utility(3, 1.0, 5, model) == pytest.approx(expected)


def test_utility_ignores_cost_when_omega_is_one():
    model = MdpModel.build(num_states=10, num_actions=3, action_step=0.4, lam=1.0, omega=1.0, u=0.0)
    for a in (-0.4, 0.0, 0.4):
        assert model.utility(2, a, 6) == pytest.approx(math.log2(7) - math.log2(3))


def test_default_offset_keeps_utilities_nonnegative(numeric_model):
    assert np.all(numeric_model.utilities >= 0)
    assert numeric_model.utilities.min() == pytest.approx(DEFAULT_U_MARGIN)
    assert numeric_model.offset >= (1 - numeric_model.omega) * max(numeric_model.actions)


def test_explicit_offset_wins():
    model = MdpModel.build(num_states=6, num_actions=3, action_step=0.5, lam=1.0, u=0.2)
    assert model.offset == 0.2


@pytest.mark.parametrize("name", ["log", "sqrt", "capped-linear", "saturating"])
def test_gamma_presets_concave_increasing(name):
    g = make_gamma(name, 2.0, 4.0)(np.arange(1, 30))
    assert np.all(np.diff(g) > 0)
    assert np.all(np.diff(g, 2) <= 1e-12)


def test_saturating_gamma_values():
    g = make_gamma("saturating", 8.0, 4.0)
    assert g(4) == pytest.approx(32.0 * (1.0 - math.exp(-1.0)))
    assert g(1000) == pytest.approx(32.0)


def test_model_round_trips_through_dict(numeric_model):
    assert MdpModel.from_dict(numeric_model.to_dict()) == numeric_model
