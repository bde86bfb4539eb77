"""Tests covering the waypoint-based desired trajectory."""
from __future__ import annotations

import math

import numpy as np
import pytest
from pydantic import ValidationError

from colav.schemas import DesiredTrajectorySpec, Waypoint
from colav.services.guidance import DesiredTrajectory


def _dogleg() -> DesiredTrajectory:
    spec = DesiredTrajectorySpec(
        speed_mps=5.0,
        waypoints=[
            Waypoint(time_s=0.0, north_m=0.0, east_m=0.0),
            Waypoint(time_s=100.0, north_m=500.0, east_m=0.0),
            Waypoint(time_s=200.0, north_m=500.0, east_m=500.0),
        ],
    )
    return DesiredTrajectory.from_spec(spec)


def test_position_interpolates_between_waypoints() -> None:
    desired = _dogleg()
    north, east = desired.position(np.array([0.0, 50.0, 100.0, 150.0]))
    np.testing.assert_allclose(north, [0.0, 250.0, 500.0, 500.0])
    np.testing.assert_allclose(east, [0.0, 0.0, 0.0, 250.0])


def test_position_extrapolates_at_constant_velocity() -> None:
    desired = _dogleg()
    north, east = desired.position(np.array([-10.0, 220.0]))
    np.testing.assert_allclose(north, [-50.0, 500.0])
    np.testing.assert_allclose(east, [0.0, 600.0])


def test_speed_and_course_per_leg() -> None:
    desired = _dogleg()
    assert float(desired.speed(20.0)) == pytest.approx(5.0)
    assert float(desired.course(20.0)) == pytest.approx(0.0)
    assert float(desired.course(120.0)) == pytest.approx(math.pi / 2)


def test_cross_track_distance() -> None:
    desired = _dogleg()
    distances = desired.cross_track(np.array([250.0, 600.0]), np.array([-30.0, 250.0]))
    np.testing.assert_allclose(distances, [30.0, 100.0])


def test_straight_helper() -> None:
    desired = DesiredTrajectory.straight(
        north=10.0, east=20.0, course=math.pi / 2, speed=4.0, duration=100.0
    )
    north, east = desired.position(25.0)
    assert float(north) == pytest.approx(10.0)
    assert float(east) == pytest.approx(120.0)


def test_waypoint_times_must_increase() -> None:
    with pytest.raises(ValidationError):
        DesiredTrajectorySpec(
            speed_mps=5.0,
            waypoints=[
                Waypoint(time_s=0.0, north_m=0.0, east_m=0.0),
                Waypoint(time_s=0.0, north_m=10.0, east_m=0.0),
            ],
        )


def test_leg_speed_must_match_declared_speed() -> None:
    with pytest.raises(ValidationError, match="leg 1 implies 2.500 m/s"):
        DesiredTrajectorySpec(
            speed_mps=5.0,
            waypoints=[
                Waypoint(time_s=0.0, north_m=0.0, east_m=0.0),
                Waypoint(time_s=100.0, north_m=500.0, east_m=0.0),
                Waypoint(time_s=300.0, north_m=500.0, east_m=500.0),
            ],
        )
    nearly = DesiredTrajectorySpec(
        speed_mps=5.0,
        waypoints=[
            Waypoint(time_s=0.0, north_m=0.0, east_m=0.0),
            Waypoint(time_s=100.0, north_m=510.0, east_m=0.0),
        ],
    )
    assert nearly.speed_mps == 5.0


def test_anchor_time_projects_onto_the_nearest_leg() -> None:
    desired = _dogleg()
    anchors = desired.anchor_time(np.array([250.0, 600.0, 480.0]), np.array([-30.0, 250.0, 0.0]))
    np.testing.assert_allclose(anchors, [50.0, 150.0, 96.0])


def test_anchor_time_extends_the_end_legs() -> None:
    desired = _dogleg()
    anchors = desired.anchor_time(np.array([-100.0, 500.0]), np.array([0.0, 700.0]))
    np.testing.assert_allclose(anchors, [-20.0, 240.0])
    assert float(desired.anchor_time(-100.0, 0.0)) == pytest.approx(-20.0)
