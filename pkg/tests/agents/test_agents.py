import pytest

from agents import FixedRangeAgent, MyopicAgent, PolicyAgent, PolicyBook
from env import NetworkEnv
from runtime import SimulationRunner


def test_fixed_agent_never_changes_coverage(small_config):
    config = small_config.clone(dynamic=True, horizon=12)
    runner = SimulationRunner(config, "fixed", seed=2)
    agent = runner.agent
    assert isinstance(agent, FixedRangeAgent)
    frames = runner.run(include_history=True)
    assert all(set(f.actions.values()) <= {0.0} for f in frames)
    assert all(r.coverage == pytest.approx(agent.coverage) for r in runner.network.relays)
    assert all(c.action == 0.0 for f in frames for c in f.step_info.changes)


def test_fixed_coverage_override(small_config):
    agent = FixedRangeAgent(small_config.clone(fixed_coverage=1.5))
    assert agent.coverage == 1.5
    assert agent.start_for(0.2).coverage == 1.5


def test_policy_agent_looks_up_each_observation(small_config):
    agent = PolicyAgent(small_config)
    env = NetworkEnv(small_config)
    state = env.reset(seed=0, start=agent.start_for)
    actions, metadata = agent.get_actions(state)
    policy = agent.book.policy_for(0.0)
    assert actions == {rid: policy(s) for rid, s in state["observations"].items()}
    assert metadata["policy"] == "value-iteration"
    assert metadata["actions_count"] == len(state["network"].relays)


def test_policy_agent_switches_band_with_beta(small_config):
    config = small_config.clone(dynamic=True)
    book = PolicyBook.build(config)
    assert [e.beta for e in book.entries] == config.policy_betas()
    assert book.entry(0.02) is book.entries[0]
    assert book.entry(0.27) is book.entries[-1]


def test_policy_book_rejects_unknown_solver(small_config):
    with pytest.raises(ValueError):
        PolicyBook.build(small_config, solver="annealing")


def test_policy_book_is_cached_per_config(small_config):
    assert PolicyBook.cached(small_config) is PolicyBook.cached(small_config)
    assert PolicyBook.cached(small_config, "myopic") is not PolicyBook.cached(small_config)


def test_myopic_matches_proposed_without_discounting(small_config):
    config = small_config.clone(rho=0.0, horizon=15)
    proposed = SimulationRunner(config, "proposed", seed=4)
    myopic = SimulationRunner(config, "myopic", seed=4)
    assert isinstance(myopic.agent, MyopicAgent)
    assert proposed.agent.book.policy_for(0.0).action_indices == myopic.agent.book.policy_for(0.0).action_indices
    proposed.run()
    myopic.run()
    assert proposed.rows == myopic.rows
