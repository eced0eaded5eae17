"""Geometry and vehicle addressing."""

import math

import pytest
from hypothesis import given, strategies as st

from platoonsim.scenario import (
    ScenarioLayout,
    VehicleId,
    distance_m,
    parse_vehicle,
    position_of,
)


def test_vehicle_id_renders_platoon_dot_position():
    assert str(VehicleId(1, 6)) == "1.6"
    assert str(VehicleId(0, 10)) == "0.10"


def test_parse_vehicle_round_trip():
    for v in (VehicleId(0, 1), VehicleId(2, 10), VehicleId(1, 3)):
        assert parse_vehicle(str(v)) == v


@pytest.mark.parametrize("text", ["", "1", "1.", ".5", "a.b", "1.2.3", "-1.2"])
def test_parse_vehicle_rejects_malformed(text):
    with pytest.raises(ValueError):
        parse_vehicle(text)


def test_default_layout_dimensions():
    layout = ScenarioLayout()
    assert layout.num_vehicles == 30
    assert layout.spacing_m == 20.0
    assert layout.target_platoon == 1  # middle of three
    assert layout.leader() == VehicleId(1, 1)
    assert layout.tail() == VehicleId(1, 10)


def test_single_platoon_targets_itself():
    layout = ScenarioLayout(num_platoons=1)
    assert layout.target_platoon == 0
    assert layout.leader() == VehicleId(0, 1)


def test_vehicles_enumerates_platoon_major():
    layout = ScenarioLayout(num_platoons=2, platoon_size=3)
    assert layout.vehicles() == [
        VehicleId(0, 1),
        VehicleId(0, 2),
        VehicleId(0, 3),
        VehicleId(1, 1),
        VehicleId(1, 2),
        VehicleId(1, 3),
    ]
    for i, v in enumerate(layout.vehicles()):
        assert layout.index(v) == i


def test_positions_follow_spacing_and_lanes():
    layout = ScenarioLayout()
    # followers trail their leader along -x at 20 m spacing
    assert position_of(layout, VehicleId(0, 1)) == (0.0, 0.0)
    assert position_of(layout, VehicleId(0, 3)) == (-40.0, 0.0)
    # platoons sit on parallel lanes 4 m apart
    assert position_of(layout, VehicleId(2, 1)) == (0.0, 8.0)


def test_adjacent_vehicles_are_one_spacing_apart():
    layout = ScenarioLayout()
    assert distance_m(layout, VehicleId(1, 5), VehicleId(1, 6)) == 20.0
    # leader to mid vehicle: 5 spacings
    assert distance_m(layout, VehicleId(1, 1), VehicleId(1, 6)) == 100.0
    # leader to tail: 9 spacings
    assert distance_m(layout, VehicleId(1, 1), VehicleId(1, 10)) == 180.0


def test_cross_platoon_distance_is_euclidean():
    layout = ScenarioLayout()
    d = distance_m(layout, VehicleId(0, 1), VehicleId(1, 2))
    assert d == pytest.approx(math.hypot(20.0, 4.0))


def test_distance_same_vehicle_rejected():
    layout = ScenarioLayout()
    with pytest.raises(ValueError):
        distance_m(layout, VehicleId(0, 1), VehicleId(0, 1))


@pytest.mark.parametrize(
    "kwargs,field",
    [
        ({"num_platoons": 0}, "num_platoons"),
        ({"platoon_size": 1}, "platoon_size"),
        ({"vehicle_length_m": 0.0}, "vehicle_length_m"),
        ({"inter_vehicle_gap_m": -1.0}, "inter_vehicle_gap_m"),
        ({"lane_offset_m": 0.0}, "lane_offset_m"),
        ({"target_platoon": 3}, "target_platoon"),
        ({"target_platoon": -2}, "target_platoon"),
    ],
)
def test_layout_validation_names_offending_field(kwargs, field):
    with pytest.raises(ValueError, match=field):
        ScenarioLayout(**kwargs)


_vehicle = st.tuples(st.integers(0, 2), st.integers(1, 10)).map(
    lambda t: VehicleId(*t)
)


@given(a=_vehicle, b=_vehicle)
def test_distance_symmetry(a, b):
    layout = ScenarioLayout()
    if a == b:
        return
    assert distance_m(layout, a, b) == distance_m(layout, b, a)


@given(a=_vehicle, b=_vehicle, c=_vehicle)
def test_distance_triangle_inequality(a, b, c):
    layout = ScenarioLayout()
    if a == b or b == c or a == c:
        return
    ab = distance_m(layout, a, b)
    bc = distance_m(layout, b, c)
    ac = distance_m(layout, a, c)
    assert ac <= ab + bc + 1e-9


@given(a=_vehicle, b=_vehicle)
def test_distance_positive(a, b):
    layout = ScenarioLayout()
    if a == b:
        return
    assert distance_m(layout, a, b) > 0.0


def test_stagger_shifts_platoons_longitudinally():
    layout = ScenarioLayout(longitudinal_stagger_m=5.0)
    x0, _ = position_of(layout, VehicleId(0, 1))
    x1, _ = position_of(layout, VehicleId(1, 1))
    assert x1 - x0 == 5.0
