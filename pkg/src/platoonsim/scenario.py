"""Static road geometry: platoons of vehicles on parallel lanes.

Vehicles drive in rigid formation, so positions are frozen for a whole
run and only relative geometry matters.  Within a platoon, vehicles are
spaced front-to-front by ``vehicle_length_m + inter_vehicle_gap_m`` and
the leader sits at longitudinal coordinate 0 (plus an optional
per-platoon stagger).  Platoons occupy adjacent lanes separated
laterally by ``lane_offset_m``.

Coordinates: x points along the direction of travel (followers at
negative x), y across lanes.  The reference point of a vehicle is its
front bumper (antenna position).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple


class VehicleId(NamedTuple):
    """Identifies a vehicle as (platoon, position).

    ``platoon`` is a 0-based lane/platoon index; ``position`` is 1-based
    within the platoon, position 1 being the leader and higher positions
    trailing behind it.
    """

    platoon: int
    position: int

    def __str__(self) -> str:  # compact form used in event logs: "1.6"
        return f"{self.platoon}.{self.position}"


def parse_vehicle(text: str) -> VehicleId:
    """Inverse of ``str(VehicleId)``: parse ``"1.6"`` -> VehicleId(1, 6).

    Raises:
        ValueError: If ``text`` is not two dot-separated unsigned
            integers (the only form ``str(VehicleId)`` produces).
    """
    platoon, _, position = text.partition(".")
    if not (platoon.isdigit() and position.isdigit()):
        raise ValueError(f"malformed vehicle id {text!r}")
    return VehicleId(int(platoon), int(position))


@dataclass(frozen=True)
class ScenarioLayout:
    """Validated fleet layout; immutable and safe to share across threads.

    Attributes:
        num_platoons: Number of platoons on the road (>= 1).
        platoon_size: Vehicles per platoon (>= 2: a leader and a tail).
        vehicle_length_m: Body length of every vehicle, metres (> 0).
        inter_vehicle_gap_m: Bumper-to-bumper gap within a platoon,
            metres (> 0); front-to-front spacing is
            ``vehicle_length_m + inter_vehicle_gap_m``.
        lane_offset_m: Lateral distance between adjacent lanes, metres
            (> 0 whenever there is more than one platoon).
        longitudinal_stagger_m: Longitudinal shift applied cumulatively
            per platoon (platoon p's leader sits at
            ``x = p * longitudinal_stagger_m``); 0 keeps all leaders
            abreast.
        target_platoon: 0-based index of the platoon whose
            leader-to-tail stream is measured; defaults to the middle
            platoon.

    Raises:
        ValueError: From construction, if any field is out of range (the
            message names the offending field).
    """

    num_platoons: int = 3
    platoon_size: int = 10
    vehicle_length_m: float = 10.0
    inter_vehicle_gap_m: float = 10.0
    lane_offset_m: float = 4.0
    longitudinal_stagger_m: float = 0.0
    target_platoon: int = field(default=-1)  # -1 -> middle platoon

    def __post_init__(self) -> None:
        if self.num_platoons < 1:
            raise ValueError(
                f"num_platoons must be >= 1, got {self.num_platoons}"
            )
        if self.platoon_size < 2:
            raise ValueError(
                f"platoon_size must be >= 2, got {self.platoon_size}"
            )
        if self.vehicle_length_m <= 0:
            raise ValueError(
                f"vehicle_length_m must be > 0, got {self.vehicle_length_m}"
            )
        if self.inter_vehicle_gap_m <= 0:
            raise ValueError(
                "inter_vehicle_gap_m must be > 0, "
                f"got {self.inter_vehicle_gap_m}"
            )
        if self.num_platoons > 1 and self.lane_offset_m <= 0:
            raise ValueError(
                "lane_offset_m must be > 0 with multiple platoons, "
                f"got {self.lane_offset_m}"
            )
        if self.target_platoon == -1:
            object.__setattr__(self, "target_platoon", self.num_platoons // 2)
        if not 0 <= self.target_platoon < self.num_platoons:
            raise ValueError(
                f"target_platoon must be in [0, {self.num_platoons - 1}], "
                f"got {self.target_platoon}"
            )

    @property
    def spacing_m(self) -> float:
        """Front-to-front distance between successive platoon members."""
        return self.vehicle_length_m + self.inter_vehicle_gap_m

    @property
    def num_vehicles(self) -> int:
        return self.num_platoons * self.platoon_size

    def vehicles(self) -> list[VehicleId]:
        """All vehicle ids, platoon-major then by position."""
        return [
            VehicleId(p, k)
            for p in range(self.num_platoons)
            for k in range(1, self.platoon_size + 1)
        ]

    def index(self, v: VehicleId) -> int:
        """Flat 0-based index of ``v`` in ``vehicles()`` order."""
        return v.platoon * self.platoon_size + (v.position - 1)

    def leader(self, platoon: int | None = None) -> VehicleId:
        return VehicleId(self.target_platoon if platoon is None else platoon, 1)

    def tail(self, platoon: int | None = None) -> VehicleId:
        return VehicleId(
            self.target_platoon if platoon is None else platoon,
            self.platoon_size,
        )


def _check_vehicle(layout: ScenarioLayout, v: VehicleId) -> None:
    if not (
        0 <= v.platoon < layout.num_platoons
        and 1 <= v.position <= layout.platoon_size
    ):
        raise ValueError(f"vehicle {v} is not part of the layout")


def position_of(layout: ScenarioLayout, v: VehicleId) -> tuple[float, float]:
    """Front-bumper (x, y) coordinates of ``v`` in metres.

    The leader of platoon p is at ``x = p * longitudinal_stagger_m``,
    ``y = p * lane_offset_m``; position k trails its leader by
    ``(k - 1) * spacing_m``.

    Raises:
        ValueError: If ``v`` is not part of the layout.
    """
    _check_vehicle(layout, v)
    x = v.platoon * layout.longitudinal_stagger_m - (
        v.position - 1
    ) * layout.spacing_m
    y = v.platoon * layout.lane_offset_m
    return (x, y)


def distance_m(layout: ScenarioLayout, a: VehicleId, b: VehicleId) -> float:
    """Euclidean distance between two distinct vehicles, metres.

    Symmetric and strictly positive.

    Raises:
        ValueError: If ``a == b`` or either id is not part of the layout.
    """
    if a == b:
        raise ValueError(f"distance requires two distinct vehicles, got {a}")
    xa, ya = position_of(layout, a)
    xb, yb = position_of(layout, b)
    return math.hypot(xa - xb, ya - yb)
