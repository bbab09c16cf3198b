"""
Random linear network coding: source encoding, relay recombination,
terminal sets, decoding and packet anonymity.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from infra.logger import get_logger

from .galois import GaloisField, GfMatrix, SingularMatrixError, matmul, rank, solve
from .packet import Buffer, FlowSpec, Packet

log = get_logger(__name__)


class EmptyStampError(LookupError):
    """No packet with the requested stamp is buffered."""


class DecodeError(ValueError):
    """A terminal cannot reconstruct its sources from what it holds."""


class MissingSourceError(DecodeError):
    """Some wanted source has an all-zero coefficient column."""


class RankDeficientError(DecodeError):
    """The coefficient matrix without zero columns is not full column rank."""


def encode_source(h: int, data, stamp: int, flows: FlowSpec, field: GaloisField | None = None) -> Packet:
    """
    Wrap source data as a pure packet whose coefficients are the unit vector e_h.

    Raises:
        ValueError: h is not a source of `flows`, or data lies outside the field
    """
    field = field or GaloisField.get()
    if h not in flows.terminals_of:
        raise ValueError(f"Unknown source {h}; sources are {flows.sources}")
    data = np.asarray(data, dtype=np.int64)
    if not field.contains(data):
        raise ValueError(f"Source data outside GF(2^{field.degree})")
    coeffs = np.zeros(flows.num_sources, dtype=np.int64)
    coeffs[h - 1] = 1
    return Packet(stamp, coeffs, data)


def recombine(
    buffer: Buffer,
    stamp: int,
    rng: np.random.Generator,
    *,
    coefficients: Sequence[int] | None = None,
    nonzero: bool = False,
) -> Packet:
    """
    Mix every buffered packet of `stamp` with random local coefficients.

    The output coefficients and payload are the same linear combination of
    the inputs, so the global coefficients keep tracking the sources.

    Args:
        buffer: the transmitting node's buffer
        stamp: stamp group to mix
        rng: randomness for the local coefficients
        coefficients: forced local coefficients, one per buffered packet
        nonzero: draw local coefficients from the nonzero elements only

    Raises:
        EmptyStampError: nothing buffered under `stamp`
    """
    packets = buffer.packets(stamp)
    if not packets:
        raise EmptyStampError(f"No buffered packets with stamp {stamp}")
    field = buffer.field

    if coefficients is None:
        local = field.random(rng, len(packets), nonzero=nonzero)
    else:
        local = np.asarray(coefficients, dtype=np.int64)
        if local.shape != (len(packets),):
            raise ValueError(f"Expected {len(packets)} local coefficients, got {local.shape}")

    coeffs = matmul(field, local[None, :], np.vstack([p.coeffs for p in packets]))[0]
    payload = matmul(field, local[None, :], np.vstack([p.payload for p in packets]))[0]
    return Packet(stamp, coeffs, payload)


def terminal_set(packet: Packet, flows: FlowSpec) -> frozenset[int]:
    """Union of T_h over the sources the packet carries."""
    carried = packet.carried_sources()
    return frozenset().union(*(flows.terminals_of[h] for h in carried if h in flows.terminals_of))


def target_terminals(packet: Packet, flows: FlowSpec) -> dict[int, frozenset[int]]:
    """
    Terminal set seen from each carried source.

    Once a packet carries every source, all entries equal T, so a relay's
    decision no longer depends on which source it serves.
    """
    targets = terminal_set(packet, flows)
    return {h: targets for h in sorted(packet.carried_sources())}


def try_decode(
    received: Sequence[Packet],
    t: int,
    flows: FlowSpec,
    field: GaloisField | None = None,
) -> dict[int, np.ndarray]:
    """
    Recover the source data terminal `t` wants from same-stamp packets.

    Decoding needs (1) a nonzero coefficient column for every wanted source
    and (2) full column rank once all-zero columns are removed. The reduced
    system is then solved by Gauss-Jordan elimination.

    Returns:
        {h: payload} for every h in H_t

    Raises:
        MissingSourceError: condition (1) fails
        RankDeficientError: condition (2) fails
        ValueError: packets carry different stamps
    """
    field = field or GaloisField.get()
    wanted = flows.sources_of(t)
    if not wanted:
        return {}
    if not received:
        raise MissingSourceError(f"Terminal {t} holds no packets")
    stamps = {p.stamp for p in received}
    if len(stamps) > 1:
        raise ValueError(f"Packets from several stamps {sorted(stamps)} cannot be decoded together")

    c = np.vstack([p.coeffs for p in received])
    y = np.vstack([p.payload for p in received])

    present = np.any(c != 0, axis=0)
    missing = [h for h in wanted if not present[h - 1]]
    if missing:
        raise MissingSourceError(f"Terminal {t} has no packet carrying sources {missing}")

    columns = np.flatnonzero(present)
    pruned = GfMatrix(c[:, columns], field)
    if rank(pruned) < columns.size:
        raise RankDeficientError(
            f"Terminal {t}: rank {rank(pruned)} < {columns.size} mixed sources"
        )
    try:
        x = solve(pruned, y)
    except SingularMatrixError as exc:
        raise RankDeficientError(str(exc)) from exc

    row_of = {int(col) + 1: i for i, col in enumerate(columns)}
    return {h: x[row_of[h]].copy() for h in wanted}


def anonymity_index(packets: Iterable[Packet], flows: FlowSpec) -> float:
    """Fraction of packets whose terminal set is the full union T."""
    packets = list(packets)
    if not packets:
        return 0.0
    full = flows.terminals
    hits = sum(terminal_set(p, flows) == full for p in packets)
    return hits / len(packets)


def payload_consistent(packet: Packet, source_payloads: dict[int, np.ndarray], field: GaloisField | None = None) -> bool:
    """Whether the payload equals the packet's coefficient combination of the source data."""
    field = field or GaloisField.get()
    sources = np.vstack([source_payloads[h] for h in range(1, packet.num_sources + 1)])
    expected = matmul(field, packet.coeffs[None, :], sources)[0]
    return bool(np.array_equal(expected, packet.payload))
