import numpy as np
import pytest

from coding.packet import Buffer, FlowSpec, Packet


def _pure(h: int, stamp: int, n: int = 3) -> Packet:
    coeffs = np.zeros(n, dtype=np.int64)
    coeffs[h - 1] = 1
    return Packet(stamp, coeffs, np.full(4, h))


def test_packet_is_immutable():
    p = _pure(1, 0)
    with pytest.raises(ValueError):
        p.coeffs[0] = 3


def test_log_line_format():
    p = Packet(3, [1, 0xA7, 0], [1, 2, 3])
    stamp, coeffs, digest = p.to_log_line().split(":")
    assert stamp == "3"
    assert coeffs == "01a700"
    assert len(digest) == 16
    assert digest == Packet(9, [0, 0, 1], [1, 2, 3]).digest()


def test_log_line_pads_to_the_field_width():
    p = Packet(0, [1, 0xBEEF, 0x2A], [0])
    _, coeffs, _ = p.to_log_line(degree=16).split(":")
    assert coeffs == "0001beef002a"
    _, coeffs, _ = Packet(0, [1, 9], [0]).to_log_line(degree=4).split(":")
    assert coeffs == "19"


def test_flow_spec_sets():
    flows = FlowSpec({1: {1, 2}, 2: {2}})
    assert flows.sources == [1, 2]
    assert flows.terminals == {1, 2}
    assert flows.sources_of(2) == [1, 2]
    assert flows.sources_of(1) == [1]
    assert flows.pairs() == [(1, 1), (1, 2), (2, 2)]
    assert FlowSpec.multicast(2, 3).sources_of(3) == [1, 2]


def test_flow_spec_validation():
    with pytest.raises(ValueError):
        FlowSpec({2: {1}})
    with pytest.raises(ValueError):
        FlowSpec({1: set()})


def test_buffer_keeps_only_innovative_packets():
    buffer = Buffer()
    assert buffer.add(_pure(1, 0))
    assert not buffer.add(_pure(1, 0))
    assert buffer.add(_pure(2, 0))
    assert not buffer.add(Packet(0, [1, 1, 0], np.zeros(4)))
    assert not buffer.add(Packet(0, [0, 0, 0], np.zeros(4)))
    assert buffer.group(0).rank == 2
    assert len(buffer) == 2


def test_buffer_head_is_oldest_stamp():
    buffer = Buffer()
    for stamp in (4, 1, 7):
        buffer.add(_pure(1, stamp))
    assert buffer.head().stamp == 1
    assert buffer.stamps() == [1, 4, 7]


def test_buffer_prune_drops_expired():
    buffer = Buffer(ttl=2)
    for stamp in range(5):
        buffer.add(_pure(1, stamp))
    dropped = buffer.prune(now=5)
    assert dropped == [0, 1, 2]
    assert all(5 - s <= 2 for s in buffer.stamps())


def test_next_stamp_service_order():
    buffer = Buffer()
    for stamp in (1, 2, 3):
        buffer.add(_pure(1, stamp))
    assert buffer.next_stamp() == 3
    assert buffer.next_stamp("oldest") == 1
    buffer.mark_sent(3)
    assert buffer.next_stamp() == 2
    buffer.mark_sent(2)
    buffer.mark_sent(1)
    # nothing pending: repeat the newest
    assert buffer.next_stamp() == 3
    assert Buffer().next_stamp() is None
