"""
Network state for the simulator:
- Region: continuous deployment area
- DeliveryLedger: per-triple delivery bookkeeping
- NetworkState: nodes, flows, link failure rate and random streams
"""

from .ledger import DeliveryLedger, DeliveryRecord, DeliveryStatus
from .network import NetworkState, RandomStreams
from .region import Region

__all__ = [
    "DeliveryLedger",
    "DeliveryRecord",
    "DeliveryStatus",
    "NetworkState",
    "RandomStreams",
    "Region",
]
