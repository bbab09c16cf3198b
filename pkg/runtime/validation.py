"""
Self-check suites behind `main.py validate`.

Each suite returns CheckResult records; a run passes only when every
record passes. Suites are deterministic: all randomness comes from fixed
seeds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence

import numpy as np

from coding.galois import GaloisField, GfMatrix, clmul_reference, full_rank_bound, rank
from coding.packet import Buffer, FlowSpec
from coding.rlnc import DecodeError, encode_source, recombine, try_decode
from env.scenario import ExperimentConfig
from infra.logger import get_logger
from mdp.model import MdpModel
from mdp.solver import Policy, bellman_backup, solve_policy
from mdp.stationary import ChainClass, PolicyChain, induce_chain, initial_state, limiting_matrix_power
from scenarios import get_preset
from scenarios.numeric_study import GAMMA, GAMMA_CAP, GAMMA_SCALE

from .experiments import measure_anonymity, paired_win_rate, run_replications, summarize, sweep
from .observability import logfire, trace_suite

log = get_logger(__name__)

SUITE_NAMES = ("field-axioms", "kernel", "bellman", "chain", "anonymity", "decoding")
TREND_SUITE = "trends"
ALL_SUITES = (*SUITE_NAMES, TREND_SUITE)

MIN_WIN_RATE = 0.8


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one check: `code` names the property, `message` the evidence."""

    suite: str
    code: str
    passed: bool
    message: str = ""

    def __str__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.suite}/{self.code}: {self.message}"


def _check(suite: str, code: str, passed: bool, message: str) -> CheckResult:
    return CheckResult(suite, code, bool(passed), message)


def _validation_model(**overrides) -> MdpModel:
    params = dict(
        num_states=20,
        num_actions=5,
        action_step=0.4,
        lam=0.8,
        omega=0.55,
        rho=0.5,
        gamma=GAMMA,
        gamma_scale=GAMMA_SCALE,
        gamma_cap=GAMMA_CAP,
    )
    params.update(overrides)
    return MdpModel.build(**params)


# ============================================================================
# SUITES
# ============================================================================

def field_axioms(field: GaloisField | None = None) -> List[CheckResult]:
    """Exhaustive table checks against the table-free carry-less product."""
    field = field or GaloisField.get(8)
    suite = "field-axioms"
    elems = np.arange(field.order)
    a, b = np.meshgrid(elems, elems, indexing="ij")
    table = field.mul(a, b)
    results = []

    reference = clmul_reference(a, b, degree=field.degree, polynomial=field.polynomial)
    bad = int(np.count_nonzero(table != reference))
    results.append(_check(suite, "mul-matches-clmul", bad == 0, f"{bad} products differ from the reference"))

    results.append(
        _check(suite, "mul-commutative", np.array_equal(table, table.T), "a·b = b·a for all pairs")
    )

    nonzero = elems[1:]
    try:
        inverses = field.inv(nonzero)
        products = field.mul(nonzero, inverses)
        bad = int(np.count_nonzero(products != 1))
        results.append(_check(suite, "inverse", bad == 0, f"{bad} elements with a·a⁻¹ ≠ 1"))
    except ZeroDivisionError as exc:
        results.append(_check(suite, "inverse", False, str(exc)))

    rng = np.random.default_rng(8)
    x, y, z = (field.random(rng, 4096) for _ in range(3))
    assoc = np.array_equal(field.mul(field.mul(x, y), z), field.mul(x, field.mul(y, z)))
    results.append(_check(suite, "mul-associative", assoc, "(xy)z = x(yz) on 4096 triples"))
    dist = np.array_equal(field.mul(x, field.add(y, z)), field.add(field.mul(x, y), field.mul(x, z)))
    results.append(_check(suite, "distributive", dist, "x(y+z) = xy+xz on 4096 triples"))
    identity = np.array_equal(field.mul(elems, 1), elems) and np.array_equal(field.add(elems, 0), elems)
    results.append(_check(suite, "identities", identity, "a·1 = a and a+0 = a"))
    return results


def kernel_suite() -> List[CheckResult]:
    """Row sums, nonnegativity and grow-kernel composition."""
    suite = "kernel"
    results = []
    for beta in (0.0, 0.1, 0.2, 0.3):
        P = _validation_model(beta=beta).kernel
        worst = float(np.max(np.abs(P.sum(axis=2) - 1.0)))
        results.append(
            _check(suite, f"stochastic-beta-{beta:g}", worst <= 1e-12 and np.all(P >= 0), f"max row error {worst:.2e}")
        )

    model = _validation_model()
    grows = [a for a in model.actions if a > 0]

    def kernel(a: float) -> np.ndarray:
        return np.vstack([model.transition(int(s), a) for s in model.states])

    worst = 0.0
    for a1 in grows:
        for a2 in grows:
            worst = max(worst, float(np.max(np.abs(kernel(a1) @ kernel(a2) - kernel(a1 + a2)))))
    results.append(_check(suite, "grow-composition", worst <= 1e-10, f"max entry error {worst:.2e}"))
    return results


def bellman_suite() -> List[CheckResult]:
    """Monotonicity, additivity and ρ-contraction on random value pairs."""
    suite = "bellman"
    rng = np.random.default_rng(31)
    results = []
    for rho in (0.3, 0.5, 0.9):
        model = _validation_model(rho=rho)
        n = model.num_states
        monotone, additive, ratio = True, True, 0.0
        for _ in range(100):
            v, w = rng.normal(0, 5, n), rng.normal(0, 5, n)
            low, high = np.minimum(v, w), np.maximum(v, w)
            monotone &= bool(np.all(bellman_backup(low, model) <= bellman_backup(high, model) + 1e-12))
            for d in (-1.0, 0.5, 3.0):
                shifted = bellman_backup(v + d, model) - bellman_backup(v, model)
                additive &= bool(np.allclose(shifted, rho * d, atol=1e-10))
            gap = np.max(np.abs(v - w))
            ratio = max(ratio, float(np.max(np.abs(bellman_backup(v, model) - bellman_backup(w, model))) / gap))
        results.append(_check(suite, f"monotone-rho-{rho:g}", monotone, "T v ≤ T w whenever v ≤ w"))
        results.append(_check(suite, f"additive-rho-{rho:g}", additive, "T(v + d) = T v + ρd"))
        results.append(
            _check(suite, f"contraction-rho-{rho:g}", ratio <= rho + 1e-12, f"worst ratio {ratio:.6f}")
        )

    counts = [solve_policy(_validation_model(rho=rho), 0.01).iterations for rho in (0.3, 0.5, 0.7, 0.9)]
    increasing = all(a < b for a, b in zip(counts, counts[1:]))
    results.append(_check(suite, "iterations-grow-with-rho", increasing, f"iterations {counts}"))
    return results


def chain_suite() -> List[CheckResult]:
    """Stationarity of the solved chain and the two canonical limits."""
    suite = "chain"
    model = _validation_model()
    results = []

    chain = induce_chain(solve_policy(model, 0.01))
    residual = chain.stationarity_residual()
    results.append(
        _check(suite, "solved-stationary", residual <= 1e-9, f"{chain.chain_class.value} chain, residual {residual:.2e}")
    )

    half = model.num_states // 2
    actions = [0.4] * half + [-0.4] * (model.num_states - half)
    ergodic = induce_chain(Policy(model, tuple(model.action_index(a) for a in actions), np.zeros(model.num_states)))
    residual = ergodic.stationarity_residual()
    results.append(
        _check(
            suite,
            "ergodic-limit",
            ergodic.chain_class is ChainClass.ERGODIC and residual <= 1e-9,
            f"class {ergodic.chain_class.value}, residual {residual:.2e}",
        )
    )

    stay = induce_chain(Policy(model, (model.action_index(0.0),) * model.num_states, np.zeros(model.num_states)))
    results.append(
        _check(
            suite,
            "all-stay-absorbing",
            stay.chain_class is ChainClass.ABSORBING and initial_state(stay) == 1,
            f"class {stay.chain_class.value}, s_dagger {initial_state(stay)}",
        )
    )

    P = np.array([[0.2, 0.5, 0.3], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    absorbing = PolicyChain.from_matrix(P)
    # one transient state, so its limiting row is the whole absorption split
    gap = float(np.max(np.abs(absorbing.sigma - limiting_matrix_power(P)[0])))
    results.append(
        _check(
            suite,
            "absorbing-limit",
            absorbing.chain_class is ChainClass.ABSORBING and gap <= 1e-8,
            f"max gap to the matrix-power limit {gap:.2e}",
        )
    )
    return results


def anonymity_suite(seeds: Sequence[int] = range(100)) -> List[CheckResult]:
    """Mean anonymity within twice the diameter on random connected networks."""
    config = ExperimentConfig(num_sources=2, num_terminals=2)
    values = [measure_anonymity(config, seed) for seed in seeds]
    mean = float(np.mean(values))
    return [_check("anonymity", "connected-mean", mean >= 0.99, f"mean index {mean:.4f} over {len(values)} seeds")]


def decoding_suite(runs: int = 1000, field: GaloisField | None = None) -> List[CheckResult]:
    """Random mixing then decoding: success must return the source data exactly."""
    suite = "decoding"
    field = field or GaloisField.get(8)
    rng = np.random.default_rng(17)
    successes, wrong = 0, 0
    for _ in range(runs):
        k = int(rng.integers(1, 5))
        flows = FlowSpec.multicast(k, 1)
        data = {h: field.random(rng, 16) for h in flows.sources}
        relay = Buffer(ttl=4, field=field)
        for h in flows.sources:
            relay.add(encode_source(h, data[h], 0, flows, field))
        received = [recombine(relay, 0, rng) for _ in range(k)]
        try:
            decoded = try_decode(received, 1, flows, field)
        except DecodeError:
            continue
        successes += 1
        wrong += sum(not np.array_equal(decoded[h], data[h]) for h in flows.sources)
    results = [_check(suite, "exact-recovery", wrong == 0 and successes > 0, f"{successes} decodes, {wrong} wrong")]

    for k in (2, 4, 8):
        trials = 500
        full = sum(rank(GfMatrix.random(rng, k, k, field)) == k for _ in range(trials)) / trials
        bound = full_rank_bound(k, k, field.degree)
        results.append(_check(suite, f"full-rank-{k}", full >= bound, f"frequency {full:.3f}, bound {bound:.3f}"))
    return results


def trend_config(num_seeds: int = 10, horizon: int = 200) -> ExperimentConfig:
    """The wifi-direct-app preset cut down to `num_seeds` seeds of `horizon` steps."""
    return get_preset("wifi-direct-app", seeds=list(range(num_seeds)), horizon=horizon, event_log=False)


def _fmt_series(values: Sequence[float]) -> str:
    return "[" + ", ".join(f"{v:.4g}" for v in values) + "]"


def trends_suite(config: ExperimentConfig | None = None, *, workers: int = 1) -> List[CheckResult]:
    """
    Strategy comparison and sweep monotonicity on a reduced application run.

    Takes minutes at the default size, so it only runs when named.
    """
    suite = TREND_SUITE
    config = config or trend_config()
    results = []

    runs = run_replications(config, workers=workers)
    rate = paired_win_rate(runs, "proposed", "myopic")
    shown = "n/a" if rate is None else f"{rate:.2f}"
    results.append(
        _check(
            suite,
            "proposed-beats-myopic",
            rate is not None and rate >= MIN_WIN_RATE,
            f"goodput win rate {shown} over {len(config.seeds)} seeds",
        )
    )
    scr = {s.strategy: s.scr for s in summarize(runs)}
    proposed, fixed = scr.get("proposed", float("nan")), scr.get("fixed", float("nan"))
    results.append(
        _check(suite, "proposed-scr-above-fixed", proposed > fixed, f"scr proposed {proposed:.4f}, fixed {fixed:.4f}")
    )

    for parameter in ("beta", "omega"):
        points = sweep(config, parameter, workers=workers)
        for metric in ("links", "alg_conn"):
            values = [getattr(p, metric) for p in points]
            rising = all(b >= a for a, b in zip(values, values[1:]))
            results.append(
                _check(suite, f"{metric}-nondecreasing-in-{parameter}", rising, f"{metric} {_fmt_series(values)}")
            )
    return results


# ============================================================================
# RUNNER
# ============================================================================

def run_suites(
    names: Sequence[str] = SUITE_NAMES,
    *,
    field: GaloisField | None = None,
    workers: int = 1,
) -> List[CheckResult]:
    """
    Run the named suites in order.

    Args:
        names: subset of ALL_SUITES
        field: field under test for the field-axiom and decoding suites;
            the validate command passes a corrupted field to inject a fault
        workers: process pool size for the trends suite
    """
    registry: Dict[str, Callable[[], List[CheckResult]]] = {
        "field-axioms": lambda: field_axioms(field),
        "kernel": kernel_suite,
        "bellman": bellman_suite,
        "chain": chain_suite,
        "anonymity": anonymity_suite,
        "decoding": lambda: decoding_suite(field=field),
        TREND_SUITE: lambda: trends_suite(workers=workers),
    }
    unknown = [n for n in names if n not in registry]
    if unknown:
        raise ValueError(f"Unknown suites {unknown}; available: {list(ALL_SUITES)}")

    results: List[CheckResult] = []
    for name in names:
        with trace_suite(name):
            suite_results = registry[name]()
        failed = [r for r in suite_results if not r.passed]
        logfire.info("suite_done", suite=name, checks=len(suite_results), failed=len(failed))
        log.info("Suite %s: %d checks, %d failed", name, len(suite_results), len(failed))
        results.extend(suite_results)
    return results
