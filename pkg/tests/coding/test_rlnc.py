import numpy as np
import pytest
from numpy.testing import assert_array_equal

from coding.galois import matmul
from coding.packet import Buffer, FlowSpec, Packet
from coding.rlnc import (
    EmptyStampError,
    MissingSourceError,
    RankDeficientError,
    anonymity_index,
    encode_source,
    payload_consistent,
    recombine,
    target_terminals,
    terminal_set,
    try_decode,
)

L = 32


@pytest.fixture
def flows() -> FlowSpec:
    return FlowSpec.pairwise(3)


@pytest.fixture
def sources(gf, rng) -> dict[int, np.ndarray]:
    return {h: gf.random(rng, L) for h in (1, 2, 3)}


def test_encode_source_unit_vectors(flows, sources):
    p1 = encode_source(1, sources[1], 0, flows)
    p2 = encode_source(2, sources[2], 3, flows)
    assert_array_equal(p1.coeffs, [1, 0, 0])
    assert_array_equal(p2.coeffs, [0, 1, 0])
    assert p2.stamp == 3
    assert p1.is_pure()
    assert_array_equal(p1.payload, sources[1])


def test_encode_source_unknown_source(flows, sources):
    with pytest.raises(ValueError):
        encode_source(4, sources[1], 0, flows)


def test_single_pure_packet_decodes_to_its_data(flows, sources):
    packet = encode_source(1, sources[1], 0, flows)
    decoded = try_decode([packet], 1, flows)
    assert_array_equal(decoded[1], sources[1])


def test_recombine_forced_identity(flows, sources, rng):
    buffer = Buffer()
    original = encode_source(2, sources[2], 5, flows)
    buffer.add(original)
    out = recombine(buffer, 5, rng, coefficients=[1])
    assert out.same_as(original)


def test_recombine_two_pure_packets(flows, sources, rng):
    buffer = Buffer()
    buffer.add(encode_source(1, sources[1], 0, flows))
    buffer.add(encode_source(2, sources[2], 0, flows))
    out = recombine(buffer, 0, rng, coefficients=[0x1D, 0x80])
    assert_array_equal(out.coeffs, [0x1D, 0x80, 0])


def test_recombine_payload_tracks_sources(gf, flows, sources, rng):
    relay_a, relay_b = Buffer(), Buffer()
    for h in (1, 2, 3):
        relay_a.add(encode_source(h, sources[h], 0, flows))
    for _ in range(4):
        packet = recombine(relay_a, 0, rng)
        relay_b.add(packet)
        assert payload_consistent(packet, sources)
    second_hop = recombine(relay_b, 0, rng)
    assert payload_consistent(second_hop, sources)
    expected = matmul(gf, second_hop.coeffs[None, :], np.vstack([sources[h] for h in (1, 2, 3)]))[0]
    assert_array_equal(second_hop.payload, expected)


def test_recombine_empty_stamp(rng):
    with pytest.raises(EmptyStampError):
        recombine(Buffer(), 0, rng)


def test_recombine_nonzero_keeps_every_input(flows, sources):
    rng = np.random.default_rng(7)
    buffer = Buffer()
    for h in (1, 2, 3):
        buffer.add(encode_source(h, sources[h], 0, flows))
    for _ in range(200):
        assert recombine(buffer, 0, rng, nonzero=True).carried_sources() == {1, 2, 3}


def test_terminal_set_examples(flows, sources):
    multicast = FlowSpec({1: {1, 2}, 2: {3}})
    assert terminal_set(encode_source(1, sources[1], 0, multicast), multicast) == {1, 2}
    assert terminal_set(Packet(0, [0, 0], sources[1]), multicast) == frozenset()
    mixed = Packet(0, [4, 9], sources[1])
    assert terminal_set(mixed, multicast) == {1, 2, 3}


def test_terminal_set_monotone_under_mixing(flows, sources, rng):
    buffer = Buffer()
    inputs = [encode_source(h, sources[h], 0, flows) for h in (1, 2)]
    buffer.extend(inputs)
    local = [3, 0x41]
    out = recombine(buffer, 0, rng, coefficients=local)
    for packet, c in zip(inputs, local):
        if c:
            assert terminal_set(out, flows) >= terminal_set(packet, flows)


def test_try_decode_recovers_every_source(flows, sources, rng):
    relay = Buffer()
    for h in (1, 2, 3):
        relay.add(encode_source(h, sources[h], 0, flows))
    terminal = Buffer()
    while terminal.group(0) is None or terminal.group(0).rank < 3:
        terminal.add(recombine(relay, 0, rng))
    for t in (1, 2, 3):
        decoded = try_decode(terminal.packets(0), t, flows)
        assert list(decoded) == [t]
        assert_array_equal(decoded[t], sources[t])


def test_try_decode_rank_deficient(gf, sources):
    multicast = FlowSpec.multicast(2, 1)
    mixed = Packet(0, [3, 7], gf.add(gf.mul(3, sources[1]), gf.mul(7, sources[2])))
    with pytest.raises(RankDeficientError):
        try_decode([mixed, mixed], 1, multicast)


def test_try_decode_missing_source(flows, sources):
    only_first = encode_source(1, sources[1], 0, flows)
    with pytest.raises(MissingSourceError):
        try_decode([only_first], 2, flows)


def test_try_decode_ignores_unwanted_pure_sources(flows, sources):
    # source 3 arrives unmixed; terminal 1 decodes without caring about it
    packets = [encode_source(1, sources[1], 0, flows), encode_source(3, sources[3], 0, flows)]
    assert_array_equal(try_decode(packets, 1, flows)[1], sources[1])


def test_try_decode_rejects_mixed_stamps(flows, sources):
    packets = [encode_source(1, sources[1], 0, flows), encode_source(1, sources[1], 1, flows)]
    with pytest.raises(ValueError):
        try_decode(packets, 1, flows)


def test_decoding_is_exact_over_random_chains(gf, flows):
    """Random two-relay chains: any successful decode is bit-identical."""
    rng = np.random.default_rng(99)
    successes = 0
    for _ in range(1000):
        data = {h: gf.random(rng, 8) for h in (1, 2, 3)}
        first, second = Buffer(), Buffer()
        for h in (1, 2, 3):
            first.add(encode_source(h, data[h], 0, flows))
        for _ in range(3):
            second.add(recombine(first, 0, rng))
        received = [recombine(second, 0, rng) for _ in range(3)]
        t = int(rng.integers(1, 4))
        try:
            decoded = try_decode(received, t, flows)
        except (MissingSourceError, RankDeficientError):
            continue
        successes += 1
        assert_array_equal(decoded[t], data[t])
    assert successes > 900


def test_anonymity_index_examples(flows, sources):
    pure = [encode_source(h, sources[h], 0, flows) for h in (1, 2, 3)]
    assert anonymity_index(pure, flows) == 0.0
    dense = [Packet(0, [1, 2, 3], sources[1]), Packet(0, [9, 9, 9], sources[2])]
    assert anonymity_index(dense, flows) == 1.0
    assert anonymity_index([], flows) == 0.0
    assert anonymity_index(pure + dense, flows) == pytest.approx(0.4)


def test_fully_mixed_packet_targets_are_source_independent(flows, sources):
    packet = Packet(0, [5, 6, 7], sources[1])
    targets = target_terminals(packet, flows)
    assert set(targets) == {1, 2, 3}
    assert all(ts == flows.terminals for ts in targets.values())
