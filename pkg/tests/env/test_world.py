import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from coding.packet import FlowSpec
from env.entities import Relay, Source
from env.world import DeliveryLedger, NetworkState, Region
from env.world.ledger import DeliveryStatus
from env.world.network import RandomStreams


def test_region_rejects_zero_measure():
    with pytest.raises(ValueError):
        Region(0.0, 5.0)
    with pytest.raises(ValueError):
        Region(3.0, -1.0)


def test_region_distance_and_bounds():
    region = Region(6.0, 4.0)
    assert region.area == 24.0
    assert region.distance((0, 0), (3, 4)) == 5.0
    assert region.in_bounds((6.0, 4.0))
    assert not region.in_bounds((6.1, 1.0))


def test_distance_matrix_zero_diagonal():
    d = Region.distance_matrix(np.array([[0, 0], [3, 4], [0, 0]]))
    assert_allclose(np.diag(d), 0.0)
    assert d[0, 1] == 5.0
    assert d[0, 2] == 0.0


def test_reflect_folds_points_back():
    region = Region(4.0, 4.0)
    folded = region.reflect(np.array([[-1.0, 2.0], [5.0, 4.5], [2.0, 9.0]]))
    assert_allclose(folded, [[1.0, 2.0], [3.0, 3.5], [2.0, 1.0]])


def test_edge_positions():
    region = Region(6.0, 6.0)
    assert region.edge_positions(2, "left") == [(0.5, 2.0), (0.5, 4.0)]
    assert region.edge_positions(1, "right") == [(5.5, 3.0)]
    with pytest.raises(ValueError):
        region.edge_positions(1, "top")


def test_ledger_delivery_and_travel():
    ledger = DeliveryLedger()
    data = np.arange(4)
    ledger.register(1, [1, 2], 3, data)
    assert ledger.generated == 2
    assert ledger.deliver(1, 1, 3, 5, data)
    record = ledger.record(1, 1, 3)
    assert record.status is DeliveryStatus.DELIVERED
    assert record.travel == 2
    # second delivery of the same triple is ignored
    assert not ledger.deliver(1, 1, 3, 6, data)
    assert ledger.connectivity_ratio() == 0.5
    assert [r.terminal for r in ledger.deliveries_at(5)] == [1]


def test_ledger_counts_payload_mismatch():
    ledger = DeliveryLedger()
    ledger.register(1, [1], 0, np.array([1, 2, 3]))
    assert not ledger.deliver(1, 1, 0, 2, np.array([1, 2, 4]))
    assert ledger.mismatches == 1
    assert ledger.pending == 1


def test_ledger_expiry():
    ledger = DeliveryLedger()
    ledger.register(1, [1], 0, np.zeros(2))
    ledger.register(1, [1], 4, np.zeros(2))
    assert ledger.expire(4, ttl=4) == []
    gone = ledger.expire(5, ttl=4)
    assert [(r.stamp, r.status) for r in gone] == [(0, DeliveryStatus.EXPIRED)]
    assert not ledger.deliver(1, 1, 0, 5)
    assert ledger.payload(1, 0) is None
    assert ledger.connectivity_ratio() == 0.0


def test_ledger_rejects_double_registration():
    ledger = DeliveryLedger()
    ledger.register(1, [1], 0, np.zeros(2))
    with pytest.raises(ValueError):
        ledger.register(1, [1], 0, np.zeros(2))


def test_random_streams_are_independent_and_reproducible():
    a, b = RandomStreams.from_seed(7), RandomStreams.from_seed(7)
    assert_array_equal(a.links.random(5), b.links.random(5))
    assert not np.array_equal(a.placement.random(5), a.coding.random(5))


def test_network_state_node_management():
    net = NetworkState(Region(4, 4), FlowSpec.pairwise(1), seed=1)
    source = Source(id=net.ids.next_id(), pos=(0.5, 2.0), coverage=2.0, index=1)
    relay = Relay(id=net.ids.next_id(), pos=(2.0, 2.0), coverage=1.0, state=3)
    net.add_node(source)
    net.add_node(relay)
    assert net.relays == [relay]
    assert net.source(1) is source
    assert source.buffer.field is net.field
    assert net.positions().shape == (2, 2)
    with pytest.raises(ValueError):
        net.add_node(Relay(id=net.ids.next_id(), pos=(5.0, 1.0), coverage=1.0))
    with pytest.raises(ValueError):
        net.add_node(Relay(id=relay.id, pos=(1.0, 1.0), coverage=1.0))
    net.remove_node(relay.id)
    assert net.relays == []


def test_network_state_rejects_certain_failure():
    with pytest.raises(ValueError):
        NetworkState(Region(4, 4), FlowSpec.pairwise(1), beta=1.0)
