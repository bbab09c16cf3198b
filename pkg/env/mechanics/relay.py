"""
RelayResolver - Packet relaying, coverage adaptation and decoding.

This module handles:
- Applying coverage actions to relays that hold packets
- Building each transmitter's packet from its start-of-step buffer
- Delivering packets over the working links of the step
- Terminal decoding and ledger updates
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Dict, List, Mapping, Tuple

from coding.packet import Packet
from coding.rlnc import DecodeError, try_decode

from ..core.types import NodeKind
from ..entities import Relay
from ..world.ledger import DeliveryRecord
from .links import LinkRealization

if TYPE_CHECKING:
    from ..world.network import NetworkState


@dataclass(frozen=True)
class CoverageChange:
    """A relay's observed state, the action taken and the resulting coverage."""

    node_id: int
    state: int
    action: float
    coverage: float

    def to_log_line(self, now: int) -> str:
        return f"t={now} OBSERVE node={self.node_id} state={self.state} action={self.action:g} coverage={self.coverage:.6g}"


@dataclass(frozen=True)
class Broadcast:
    """One transmission and the nodes that received it."""

    node_id: int
    kind: NodeKind
    packet: Packet
    radius: float
    receivers: Tuple[int, ...] = ()
    innovative: int = 0
    degree: int = 8

    def to_log_line(self, now: int, unit_length_m: float = 1.0) -> str:
        return (
            f"t={now} BROADCAST node={self.node_id} kind={self.kind.value} packet={self.packet.to_log_line(self.degree)} "
            f"receivers={len(self.receivers)} radius={self.radius * unit_length_m:.6g}"
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "node_id": self.node_id,
            "kind": self.kind.value,
            "packet": self.packet.to_log_line(self.degree),
            "radius": self.radius,
            "receivers": list(self.receivers),
            "innovative": self.innovative,
        }


def delivery_log_line(record: DeliveryRecord) -> str:
    return (
        f"t={record.delivered_at} DELIVER source={record.source} terminal={record.terminal} "
        f"stamp={record.stamp} travel={record.travel}"
    )


class RelayResolver:
    """
    Stateless resolver for the packet phase of a step.

    All methods take the NetworkState and return results without modifying
    the resolver itself.
    """

    def apply_actions(
        self,
        state: "NetworkState",
        actions: Mapping[int, float],
        *,
        floor: float,
        ceiling: float,
    ) -> List[CoverageChange]:
        """
        Change the coverage of every relay that holds packets and has an action.

        Relays with an empty buffer stay idle and keep their coverage.
        """
        changes = []
        for relay in state.relays:
            if not relay.buffer or relay.id not in actions:
                continue
            action = float(actions[relay.id])
            coverage = relay.adjust_coverage(action, floor, ceiling)
            changes.append(CoverageChange(relay.id, relay.state, action, coverage))
        return changes

    def build_packets(self, state: "NetworkState") -> Dict[int, Packet]:
        """One packet per transmitter with a nonempty buffer."""
        packets: Dict[int, Packet] = {}
        for node in state.nodes():
            if not node.kind.transmits:
                continue
            packet = node.next_packet(state.rng.coding)
            if packet is not None:
                packets[node.id] = packet
        return packets

    def deliver(
        self,
        state: "NetworkState",
        packets: Mapping[int, Packet],
        realization: LinkRealization,
        *,
        num_states: int,
    ) -> List[Broadcast]:
        """
        Hand each packet to the receivers of its working links.

        A relay's next observed state becomes the number of nodes its
        broadcast reached, clipped to the state grid.
        """
        reached = realization.receivers()
        broadcasts = []
        for node_id, packet in packets.items():
            node = state.get_node(node_id)
            receivers = tuple(reached.get(node_id, ()))
            innovative = 0
            for rx_id in receivers:
                innovative += state.get_node(rx_id).receive(packet)
            if isinstance(node, Relay):
                node.observe(len(receivers), num_states)
            broadcasts.append(Broadcast(node_id, node.kind, packet, node.radius, receivers, innovative, state.field.degree))
        return broadcasts

    def decode(self, state: "NetworkState", now: int) -> List[DeliveryRecord]:
        """
        Let every terminal try its undecoded stamp groups.

        Successful decodes are delivered in the ledger at time now + 1; a
        payload that differs from the source data is counted as a mismatch.
        """
        delivered: List[DeliveryRecord] = []
        for terminal in state.terminals:
            wanted = state.flows.sources_of(terminal.index)
            for stamp in terminal.undecoded_stamps():
                group = terminal.buffer.group(stamp)
                if group is None or group.rank < len(wanted):
                    continue
                try:
                    recovered = try_decode(group.packets, terminal.index, state.flows, state.field)
                except DecodeError:
                    continue
                terminal.decoded.add(stamp)
                for h, data in recovered.items():
                    if state.ledger.deliver(h, terminal.index, stamp, now + 1, data):
                        delivered.append(state.ledger.record(h, terminal.index, stamp))
        return delivered
