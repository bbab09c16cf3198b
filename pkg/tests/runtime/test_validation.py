import pytest

from coding.galois import GaloisField
from runtime.validation import (
    ALL_SUITES,
    SUITE_NAMES,
    TREND_SUITE,
    bellman_suite,
    chain_suite,
    decoding_suite,
    field_axioms,
    kernel_suite,
    run_suites,
    trend_config,
    trends_suite,
)


def _all_pass(results):
    return [str(r) for r in results if not r.passed] == []


@pytest.mark.parametrize("suite", [kernel_suite, bellman_suite, chain_suite])
def test_model_suites_pass(suite):
    results = suite()
    assert results
    assert _all_pass(results)


def test_field_axioms_pass_for_gf16_and_gf256():
    assert _all_pass(field_axioms(GaloisField.get(4)))
    assert _all_pass(field_axioms(GaloisField.get(8)))


def test_corrupted_field_is_caught():
    results = field_axioms(GaloisField.get(8).corrupted())
    failed = {r.code for r in results if not r.passed}
    assert "mul-matches-clmul" in failed


def test_decoding_suite_passes():
    assert _all_pass(decoding_suite(runs=200))


def test_check_result_formatting():
    result = kernel_suite()[0]
    assert str(result).startswith("[PASS] kernel/stochastic-beta-0:")


def test_run_suites_rejects_unknown_names():
    with pytest.raises(ValueError):
        run_suites(["field-axioms", "vibes"])


def test_suite_names_are_runnable():
    assert set(SUITE_NAMES) == {"field-axioms", "kernel", "bellman", "chain", "anonymity", "decoding"}
    assert _all_pass(run_suites(["field-axioms", "kernel"]))


def test_trend_config_reduces_the_application_preset():
    config = trend_config(num_seeds=3, horizon=50)
    assert config.name == "wifi-direct-app"
    assert config.seeds == [0, 1, 2]
    assert config.horizon == 50
    assert config.dynamic


def test_trends_suite_reports_every_trend():
    results = trends_suite(trend_config(num_seeds=2, horizon=3))
    assert [r.code for r in results] == [
        "proposed-beats-myopic",
        "proposed-scr-above-fixed",
        "links-nondecreasing-in-beta",
        "alg_conn-nondecreasing-in-beta",
        "links-nondecreasing-in-omega",
        "alg_conn-nondecreasing-in-omega",
    ]
    assert {r.suite for r in results} == {TREND_SUITE}


def test_trends_suite_is_opt_in():
    assert TREND_SUITE not in SUITE_NAMES
    assert ALL_SUITES[-1] == TREND_SUITE


@pytest.mark.slow
def test_application_trends_hold():
    assert _all_pass(trends_suite(trend_config(), workers=2))
