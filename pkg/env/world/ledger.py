"""
Delivery bookkeeping per (source, terminal, stamp) triple.

The ledger is the ground truth for goodput and the successful connectivity
ratio: every generated triple is registered, then either delivered or
expired once its stamp outlives the TTL.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterable

import numpy as np

Triple = tuple[int, int, int]


class DeliveryStatus(Enum):
    PENDING = "pending"
    DELIVERED = "delivered"
    EXPIRED = "expired"


@dataclass
class DeliveryRecord:
    source: int
    terminal: int
    stamp: int
    generated_at: int
    delivered_at: int | None = None
    status: DeliveryStatus = DeliveryStatus.PENDING

    @property
    def travel(self) -> int | None:
        """Whole steps between generation and delivery."""
        if self.delivered_at is None:
            return None
        return self.delivered_at - self.generated_at


class DeliveryLedger:
    """
    Registered, delivered and expired triples plus the source data behind them.

    Attributes:
        mismatches: decodes whose payload differed from the registered data
    """

    def __init__(self):
        self._records: Dict[Triple, DeliveryRecord] = {}
        self._payloads: Dict[tuple[int, int], np.ndarray] = {}
        self._delivered_at: Dict[int, list[DeliveryRecord]] = {}
        self.generated = 0
        self.delivered = 0
        self.expired = 0
        self.mismatches = 0

    def register(self, source: int, terminals: Iterable[int], stamp: int, payload: np.ndarray) -> None:
        """Record a new generation of `source` addressed to `terminals`."""
        self._payloads[(source, stamp)] = np.array(payload, copy=True)
        for t in terminals:
            key = (source, t, stamp)
            if key in self._records:
                raise ValueError(f"Triple {key} registered twice")
            self._records[key] = DeliveryRecord(source, t, stamp, generated_at=stamp)
            self.generated += 1

    def payload(self, source: int, stamp: int) -> np.ndarray | None:
        return self._payloads.get((source, stamp))

    def deliver(self, source: int, terminal: int, stamp: int, now: int, data: np.ndarray | None = None) -> bool:
        """
        Mark a triple delivered at time `now`.

        Returns False when the triple is unknown or no longer pending. A
        decoded payload that differs from the registered one counts as a
        mismatch and is not delivered.
        """
        record = self._records.get((source, terminal, stamp))
        if record is None or record.status is not DeliveryStatus.PENDING:
            return False
        if now < record.generated_at:
            raise ValueError(f"Delivery at {now} precedes generation at {record.generated_at}")
        if data is not None:
            truth = self._payloads.get((source, stamp))
            if truth is None or not np.array_equal(truth, data):
                self.mismatches += 1
                return False
        record.delivered_at = now
        record.status = DeliveryStatus.DELIVERED
        self._delivered_at.setdefault(now, []).append(record)
        self.delivered += 1
        return True

    def expire(self, now: int, ttl: int) -> list[DeliveryRecord]:
        """Expire pending triples whose stamp is older than the TTL allows."""
        gone = [r for r in self._records.values() if r.status is DeliveryStatus.PENDING and now - r.stamp > ttl]
        for record in gone:
            record.status = DeliveryStatus.EXPIRED
        self.expired += len(gone)
        stale = [key for key in self._payloads if now - key[1] > ttl]
        for key in stale:
            del self._payloads[key]
        return gone

    def deliveries_at(self, now: int) -> list[DeliveryRecord]:
        return list(self._delivered_at.get(now, []))

    def record(self, source: int, terminal: int, stamp: int) -> DeliveryRecord | None:
        return self._records.get((source, terminal, stamp))

    @property
    def pending(self) -> int:
        return self.generated - self.delivered - self.expired

    def connectivity_ratio(self) -> float:
        """Delivered over generated triples so far; 0 before anything is generated."""
        if self.generated == 0:
            return 0.0
        return self.delivered / self.generated

    def to_dict(self) -> Dict[str, Any]:
        return {
            "generated": self.generated,
            "delivered": self.delivered,
            "expired": self.expired,
            "pending": self.pending,
            "mismatches": self.mismatches,
        }
