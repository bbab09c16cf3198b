import math

import networkx as nx
import numpy as np
import pytest

from coding.packet import FlowSpec
from env import ExperimentConfig, lattice_network
from env.mechanics import (
    MetricsRow,
    MobilityModel,
    RelayStart,
    algebraic_connectivity,
    draw_beta,
    goodput,
    graph_diameter,
    in_range_pairs,
    lattice_endpoint_rows,
    links_of,
    node_power,
    place_relays,
    poisson_count,
    power_dbm,
    redraw_membership,
    spawn_relays,
    topology_graph,
    total_power,
)
from env.mechanics.mobility import DynamicsResolver
from env.world import DeliveryLedger, NetworkState, Region
from env.world.ledger import DeliveryRecord

START = RelayStart(state=2, coverage=1.5)


# ============================================================================
# PLACEMENT
# ============================================================================

@pytest.mark.parametrize("area,median", [(36.0, 29), (64.0, 51), (100.0, 80)])
def test_ppp_relay_count_medians(area, median):
    rng = np.random.default_rng(4)
    counts = [poisson_count(0.8, area, rng) for _ in range(1000)]
    assert abs(np.median(counts) - median) <= 2


def test_poisson_count_needs_positive_mean():
    with pytest.raises(ValueError):
        poisson_count(0.8, 0.0, np.random.default_rng(0))


def test_place_relays_uses_start_and_stays_inside():
    net = NetworkState(Region(6, 6), FlowSpec.pairwise(1), seed=2)
    relays = place_relays(net, 0.8, START, net.rng.placement)
    assert relays
    for relay in relays:
        assert net.region.in_bounds(relay.pos)
        assert relay.coverage == 1.5
        assert relay.state == 2


def test_relay_start_validation():
    with pytest.raises(ValueError):
        RelayStart(state=0, coverage=1.0)
    with pytest.raises(ValueError):
        RelayStart(state=1, coverage=0.0)


def test_lattice_endpoint_rows():
    assert lattice_endpoint_rows(2, 3) == [1.0, 3.0]
    assert lattice_endpoint_rows(1, 3) == [2.0]
    with pytest.raises(ValueError):
        lattice_endpoint_rows(4, 3)


# ============================================================================
# LINKS
# ============================================================================

def _lattice(rows=3, cols=3, beta=0.0):
    config = ExperimentConfig(beta=beta, num_sources=2, num_terminals=2)
    return lattice_network(config, rows=rows, cols=cols)


def test_lattice_links_reach_only_neighbours():
    net = _lattice()
    links = set(links_of(net).links())
    by_pos = {n.pos: n.id for n in net.nodes()}
    centre = by_pos[(2.0, 2.0)]
    assert {rx for tx, rx in links if tx == centre} == {
        by_pos[(1.0, 2.0)], by_pos[(3.0, 2.0)], by_pos[(2.0, 1.0)], by_pos[(2.0, 3.0)]
    }
    # sources never receive, terminals never transmit
    source = by_pos[(0.0, 1.0)]
    terminal = by_pos[(4.0, 3.0)]
    assert all(rx != source for _, rx in links)
    assert all(tx != terminal for tx, _ in links)


def test_colocated_nodes_are_in_range():
    net = NetworkState(Region(2, 2), FlowSpec.pairwise(1))
    spawn_relays(net, [(1.0, 1.0), (1.0, 1.0)], RelayStart(1, 1e-6))
    _, pairs = in_range_pairs(net)
    assert len(pairs) == 2


def test_no_failures_without_link_loss():
    net = _lattice()
    rng = np.random.default_rng(0)
    for _ in range(50):
        assert links_of(net, rng).failed_count == 0


def test_failure_fraction_matches_beta():
    net = _lattice(rows=5, cols=5, beta=0.3)
    rng = np.random.default_rng(5)
    total, failed = 0, 0
    while total < 100_000:
        realization = links_of(net, rng)
        total += realization.count
        failed += realization.failed_count
    assert abs(failed / total - 0.3) <= 0.01


def test_effective_receivers_average_thinned_range():
    net = _lattice(beta=0.25)
    centre = next(n.id for n in net.nodes() if n.pos == (2.0, 2.0))
    rng = np.random.default_rng(9)
    draws = [len(links_of(net, rng).receivers().get(centre, [])) for _ in range(10_000)]
    expected = (1 - 0.25) * 4
    assert abs(np.mean(draws) - expected) <= 0.02 * expected


# ============================================================================
# DYNAMICS
# ============================================================================

def test_mobility_keeps_relays_inside_and_endpoints_fixed():
    net = _lattice()
    endpoints = {n.id: n.pos for n in net.sources + net.terminals}
    rng = np.random.default_rng(1)
    model = MobilityModel(0.5)
    for _ in range(20):
        assert model.move(net, rng) == len(net.relays)
    assert all(net.region.in_bounds(r.pos) for r in net.relays)
    assert {n.id: n.pos for n in net.sources + net.terminals} == endpoints


def test_zero_sigma_moves_nothing():
    net = _lattice()
    before = [r.pos for r in net.relays]
    assert MobilityModel(0.0).move(net, np.random.default_rng(0)) == 0
    assert [r.pos for r in net.relays] == before


def test_membership_redraw_matches_target_count():
    net = NetworkState(Region(6, 6), FlowSpec.pairwise(1), seed=3)
    place_relays(net, 0.8, START, net.rng.placement)
    for seed in range(10):
        rng = np.random.default_rng(seed)
        target = poisson_count(0.8, 36.0, np.random.default_rng(seed))
        joined, left = redraw_membership(net, 0.8, START, rng)
        assert len(net.relays) == target
        assert not (joined and left)


def test_draw_beta_within_range():
    rng = np.random.default_rng(0)
    draws = [draw_beta((0.0, 0.3), rng) for _ in range(200)]
    assert min(draws) >= 0.0 and max(draws) <= 0.3
    assert draw_beta((0.2, 0.2), rng) == 0.2


def test_dynamics_schedule():
    net = NetworkState(Region(6, 6), FlowSpec.pairwise(1), seed=4)
    place_relays(net, 0.8, START, net.rng.placement)
    resolver = DynamicsResolver(
        MobilityModel(0.1), lam=0.8, membership_interval=5, beta_interval=5, beta_range=(0.1, 0.3)
    )
    changed = []
    for t in range(10):
        net.time = t
        result = resolver.apply(net, START)
        changed.append(result.beta_after is not None)
    assert changed == [False] * 4 + [True] + [False] * 4 + [True]
    assert 0.1 <= net.beta <= 0.3


# ============================================================================
# METRICS
# ============================================================================

def test_algebraic_connectivity_examples():
    assert algebraic_connectivity(nx.complete_graph(3)) == pytest.approx(3.0)
    assert algebraic_connectivity(nx.path_graph(3)) == pytest.approx(1.0)
    graph = nx.Graph()
    graph.add_nodes_from([1, 2, 3])
    graph.add_edge(1, 2)
    assert algebraic_connectivity(graph) == 0.0
    assert algebraic_connectivity(nx.empty_graph(1)) == 0.0


def test_topology_graph_is_undirected_support():
    graph = topology_graph([1, 2, 3, 4], [(1, 2), (2, 1), (2, 3)])
    assert graph.number_of_edges() == 2
    assert graph_diameter(graph) is None
    assert graph_diameter(topology_graph([1, 2, 3], [(1, 2), (3, 2)])) == 2


def test_goodput_examples():
    one = DeliveryRecord(1, 1, 0, generated_at=0, delivered_at=2)
    assert goodput([one], data_bits=1000, unit_time_ms=1.0) == pytest.approx(0.5)
    two = DeliveryRecord(2, 2, 0, generated_at=0, delivered_at=1)
    assert goodput([one, two], data_bits=910_000, unit_time_ms=1.0) == pytest.approx(455.0 + 910.0)
    assert goodput([], data_bits=1000, unit_time_ms=1.0) == 0.0


def test_goodput_over_ledger_needs_time():
    ledger = DeliveryLedger()
    ledger.register(1, [1], 0, np.zeros(2))
    ledger.deliver(1, 1, 0, 4)
    assert goodput(ledger, 4000, 1.0, now=4) == pytest.approx(1.0)
    assert goodput(ledger, 4000, 1.0, now=3) == 0.0
    with pytest.raises(ValueError):
        goodput(ledger, 4000, 1.0)


def test_power_examples():
    assert node_power(2.0, eta=1.0, alpha=2.0) == 4.0
    assert node_power(0.0) == 0.0
    assert total_power([1.0, 2.0], eta=2.0, alpha=3.0) == 18.0
    assert power_dbm(1000.0) == pytest.approx(30.0)
    assert power_dbm(0.5) == 0.0
    assert power_dbm(0.0) == 0.0
    assert power_dbm(math.pi) == pytest.approx(10 * math.log10(math.pi))


def test_metrics_row_validation():
    row = MetricsRow(time=0, goodput_mbps=1.0, scr=0.5, power=3.0, links=4, alg_conn=0.2)
    assert row.csv_fields("fixed", 3) == ("0", "1", "0.5", "3", "4", "0.2", "fixed", "3")
    with pytest.raises(ValueError):
        MetricsRow(time=0, goodput_mbps=-1.0, scr=0.5, power=0.0, links=0, alg_conn=0.0)
    with pytest.raises(ValueError):
        MetricsRow(time=0, goodput_mbps=0.0, scr=1.5, power=0.0, links=0, alg_conn=0.0)
