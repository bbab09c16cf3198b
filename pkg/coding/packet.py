"""
Packets, per-node buffers and flow bookkeeping for network coding.

A packet carries its time stamp, the global coefficient vector over all
N_H sources (source h lives at index h - 1) and the coded payload.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Literal, Mapping

import numpy as np

from .galois import GaloisField, GfMatrix, rank

ServiceOrder = Literal["newest", "oldest"]


# ============================================================================
# PACKET
# ============================================================================

@dataclass(frozen=True, eq=False)
class Packet:
    """
    A network-coded packet.

    Attributes:
        stamp: generation time τ of the source data it mixes
        coeffs: global coding coefficients, one per source
        payload: coded data, L field symbols
    """

    stamp: int
    coeffs: np.ndarray
    payload: np.ndarray

    def __post_init__(self):
        if self.stamp < 0:
            raise ValueError(f"Packet stamp must be nonnegative, got {self.stamp}")
        coeffs = np.array(self.coeffs, dtype=np.int64, copy=True)
        payload = np.array(self.payload, dtype=np.int64, copy=True)
        if coeffs.ndim != 1 or payload.ndim != 1:
            raise ValueError("Packet coefficients and payload must be 1-D")
        coeffs.flags.writeable = False
        payload.flags.writeable = False
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "payload", payload)

    @property
    def num_sources(self) -> int:
        return int(self.coeffs.size)

    def carried_sources(self) -> frozenset[int]:
        """1-based indices of sources with a nonzero coefficient."""
        return frozenset(int(i) + 1 for i in np.flatnonzero(self.coeffs))

    def is_pure(self) -> bool:
        nonzero = np.flatnonzero(self.coeffs)
        return nonzero.size == 1 and int(self.coeffs[nonzero[0]]) == 1

    def digest(self) -> str:
        raw = self.payload.astype("<u2").tobytes()
        return hashlib.blake2b(raw, digest_size=8).hexdigest()

    def to_log_line(self, degree: int = 8) -> str:
        """
        `stamp:hexcoeffs:digest`, e.g. `3:01a700:9f0c...`.

        Each coefficient takes ceil(degree / 4) hex digits, so lines of one
        field have a fixed width.
        """
        width = (degree + 3) // 4
        hexcoeffs = "".join(f"{int(c):0{width}x}" for c in self.coeffs)
        return f"{self.stamp}:{hexcoeffs}:{self.digest()}"

    def same_as(self, other: "Packet") -> bool:
        return (
            self.stamp == other.stamp
            and np.array_equal(self.coeffs, other.coeffs)
            and np.array_equal(self.payload, other.payload)
        )


# ============================================================================
# FLOWS
# ============================================================================

@dataclass(frozen=True)
class FlowSpec:
    """
    Source-to-terminal demands.

    `terminals_of[h]` is T_h. Sources must be numbered 1..N_H because a
    packet's coefficient vector is indexed by source.
    """

    terminals_of: Mapping[int, frozenset[int]]

    def __post_init__(self):
        normalized = {int(h): frozenset(int(t) for t in ts) for h, ts in self.terminals_of.items()}
        if sorted(normalized) != list(range(1, len(normalized) + 1)):
            raise ValueError(f"Sources must be numbered 1..N_H, got {sorted(normalized)}")
        empty = [h for h, ts in normalized.items() if not ts]
        if empty:
            raise ValueError(f"Sources without terminals: {empty}")
        object.__setattr__(self, "terminals_of", normalized)

    @classmethod
    def pairwise(cls, n: int) -> "FlowSpec":
        """Source h serves terminal h only."""
        return cls({h: frozenset({h}) for h in range(1, n + 1)})

    @classmethod
    def multicast(cls, num_sources: int, num_terminals: int) -> "FlowSpec":
        """Every source serves every terminal."""
        terminals = frozenset(range(1, num_terminals + 1))
        return cls({h: terminals for h in range(1, num_sources + 1)})

    @property
    def sources(self) -> list[int]:
        return sorted(self.terminals_of)

    @property
    def num_sources(self) -> int:
        return len(self.terminals_of)

    @property
    def terminals(self) -> frozenset[int]:
        """T, the union of all T_h."""
        return frozenset().union(*self.terminals_of.values())

    def sources_of(self, t: int) -> list[int]:
        """H_t, the sources whose data terminal t wants."""
        return [h for h in self.sources if t in self.terminals_of[h]]

    def pairs(self) -> list[tuple[int, int]]:
        return [(h, t) for h in self.sources for t in sorted(self.terminals_of[h])]


# ============================================================================
# BUFFER
# ============================================================================

@dataclass
class StampGroup:
    """Innovative packets sharing one stamp; `sent` counts transmissions made from it."""

    stamp: int
    packets: list[Packet] = field(default_factory=list)
    rank: int = 0
    sent: int = 0

    @property
    def pending(self) -> bool:
        """Fewer packets sent than degrees of freedom held."""
        return self.sent < self.rank

    def coefficient_matrix(self, gf: GaloisField) -> GfMatrix:
        return GfMatrix(np.vstack([p.coeffs for p in self.packets]), gf)


class Buffer:
    """
    A node's packet store, grouped by stamp with the oldest stamp at the head.

    Only innovative packets are kept: a packet is added when it raises the
    rank of its stamp group's coefficient matrix.

    Attributes:
        ttl: life span in time steps; a stamp expires once now - stamp > ttl
        field: Galois field of the coefficients
    """

    def __init__(self, ttl: int = 16, field: GaloisField | None = None):
        if ttl < 0:
            raise ValueError(f"TTL must be nonnegative, got {ttl}")
        self.ttl = ttl
        self.field = field or GaloisField.get()
        self._groups: dict[int, StampGroup] = {}

    def add(self, packet: Packet) -> bool:
        """Store `packet` if it is innovative. Returns whether it was kept."""
        if not np.any(packet.coeffs):
            return False
        group = self._groups.get(packet.stamp)
        if group is None:
            group = StampGroup(packet.stamp)
            self._groups = dict(sorted({**self._groups, packet.stamp: group}.items()))
        if group.packets:
            new_rank = rank(GfMatrix(np.vstack([*(p.coeffs for p in group.packets), packet.coeffs]), self.field))
        else:
            new_rank = 1
        if new_rank <= group.rank:
            return False
        group.packets.append(packet)
        group.rank = new_rank
        return True

    def extend(self, packets: Iterable[Packet]) -> int:
        return sum(self.add(p) for p in packets)

    def prune(self, now: int) -> list[int]:
        """Drop expired stamp groups; returns the dropped stamps."""
        expired = [s for s in self._groups if now - s > self.ttl]
        for stamp in expired:
            del self._groups[stamp]
        return expired

    def head(self) -> StampGroup | None:
        return next(iter(self._groups.values()), None)

    def group(self, stamp: int) -> StampGroup | None:
        return self._groups.get(stamp)

    def packets(self, stamp: int) -> list[Packet]:
        group = self._groups.get(stamp)
        return list(group.packets) if group else []

    def next_stamp(self, order: ServiceOrder = "newest") -> int | None:
        """
        Stamp to transmit next.

        Pending groups (more degrees of freedom held than packets sent) come
        first, newest or oldest depending on `order`. With nothing pending
        the newest group is repeated.
        """
        if not self._groups:
            return None
        pending = [s for s, g in self._groups.items() if g.pending]
        if pending:
            return max(pending) if order == "newest" else min(pending)
        return max(self._groups)

    def mark_sent(self, stamp: int) -> None:
        group = self._groups.get(stamp)
        if group is not None:
            group.sent += 1

    def stamps(self) -> list[int]:
        return list(self._groups)

    def clear(self) -> None:
        self._groups.clear()

    def __iter__(self) -> Iterator[StampGroup]:
        return iter(list(self._groups.values()))

    def __len__(self) -> int:
        return sum(len(g.packets) for g in self._groups.values())

    def __bool__(self) -> bool:
        return bool(self._groups)

    def __repr__(self) -> str:
        return f"Buffer(ttl={self.ttl}, stamps={self.stamps()}, packets={len(self)})"
