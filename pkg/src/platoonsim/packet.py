"""The unit of traffic traced across hops.

All timestamps are in milliseconds of simulation time (1 TTI = 1 ms;
optical deliveries contribute sub-millisecond fractions).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .scenario import VehicleId


@dataclass
class Packet:
    """One application packet.

    Attributes:
        source: Generating vehicle.
        seq: Per-source sequence number (0-based).
        gen_time_ms: Generation instant.
        size_bytes: Payload size; fixed per run.
        traced: True for the measured stream (target-platoon leader's
            packets), False for background traffic.
        hop_trace: ``(vehicle, arrival_ms)`` per hop, starting with the
            source at generation time; arrival times are strictly
            increasing.
    """

    source: VehicleId
    seq: int
    gen_time_ms: float
    size_bytes: int = 300
    traced: bool = False
    hop_trace: list[tuple[VehicleId, float]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.hop_trace:
            self.hop_trace.append((self.source, self.gen_time_ms))

    @property
    def current_holder(self) -> VehicleId:
        return self.hop_trace[-1][0]

    @property
    def last_arrival_ms(self) -> float:
        return self.hop_trace[-1][1]

    def with_hop(self, vehicle: VehicleId, arrival_ms: float) -> "Packet":
        """Copy of this packet extended by one hop.

        Raises:
            ValueError: If ``arrival_ms`` does not increase the trace.
        """
        if arrival_ms <= self.last_arrival_ms:
            raise ValueError(
                f"hop arrival {arrival_ms} ms does not advance past "
                f"{self.last_arrival_ms} ms"
            )
        return Packet(
            source=self.source,
            seq=self.seq,
            gen_time_ms=self.gen_time_ms,
            size_bytes=self.size_bytes,
            traced=self.traced,
            hop_trace=[*self.hop_trace, (vehicle, arrival_ms)],
        )
