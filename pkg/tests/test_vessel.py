"""Tests covering the acceleration envelope, feedback correction and the simulated plant."""
from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.interpolate import PPoly

from colav.angles import angle_difference, wrap_angle, wrap_angles
from colav.models import VelocityTrajectory, VesselState
from colav.schemas import PlantConfig
from colav.services.vessel import acceleration_limits, feedback_correct, limits_at_sog, step_plant


def _constant(
    sog: float, course: float, start: float = 0.0, horizon: float = 80.0
) -> VelocityTrajectory:
    breaks = np.array([start, start + horizon])
    return VelocityTrajectory(
        sog_fn=PPoly(np.array([[0.0], [0.0], [sog]]), breaks),
        course_fn=PPoly(np.array([[0.0], [0.0], [0.0], [course]]), breaks),
        start=start,
        horizon=horizon,
    )


def _simulate(
    state: VesselState, sog: float, course: float, plant: PlantConfig, seconds: float
) -> VesselState:
    for _ in range(int(round(seconds / plant.step_s))):
        state = step_plant(state, sog, course, plant, plant.step_s)
    return state


def test_limits_are_affine_in_speed(plant: PlantConfig) -> None:
    limits = limits_at_sog(0.0, plant)
    assert limits.sog_accel_max == pytest.approx(1.0)
    assert limits.sog_accel_min == pytest.approx(-1.5)
    assert limits.course_accel_max == pytest.approx(0.2)
    assert limits.course_accel_min == pytest.approx(-0.2)

    faster = limits_at_sog(10.0, plant)
    assert faster.sog_accel_max == pytest.approx(0.7)
    assert faster.course_accel_max == pytest.approx(0.1)


def test_limits_straddle_zero_at_any_speed(plant: PlantConfig) -> None:
    for sog in np.linspace(0.0, 60.0, 61):
        limits = acceleration_limits(VesselState(0.0, 0.0, float(sog), 0.0), plant)
        assert limits.sog_accel_min < 0 < limits.sog_accel_max
        assert limits.course_accel_min < 0 < limits.course_accel_max
    fast = limits_at_sog(50.0, plant)
    assert fast.sog_accel_max == pytest.approx(plant.sog_accel_floor_mps2)
    assert fast.course_accel_max == pytest.approx(plant.course_accel_floor_radps2)


def test_first_step_from_rest_follows_first_order_response(plant: PlantConfig) -> None:
    state = VesselState(north=0.0, east=0.0, sog=0.0, course=0.0)
    stepped = step_plant(state, 5.0, 0.0, plant, 0.1)
    assert stepped.sog == pytest.approx(5.0 * (1.0 - math.exp(-0.1 / 5.0)), rel=1e-9)
    assert stepped.time == pytest.approx(0.1)


def test_equilibrium_keeps_velocity(plant: PlantConfig) -> None:
    state = VesselState(north=10.0, east=-4.0, sog=5.0, course=0.3)
    stepped = step_plant(state, 5.0, 0.3, plant, 0.1)
    assert stepped.sog == pytest.approx(5.0)
    assert stepped.course == pytest.approx(0.3)
    assert stepped.course_rate == pytest.approx(0.0)
    assert stepped.north == pytest.approx(10.0 + 0.5 * math.cos(0.3))
    assert stepped.east == pytest.approx(-4.0 + 0.5 * math.sin(0.3))


def test_course_rate_saturates(plant: PlantConfig) -> None:
    state = VesselState(north=0.0, east=0.0, sog=5.0, course=0.0)
    for _ in range(200):
        state = step_plant(state, 5.0, 3.0, plant, plant.step_s)
        assert abs(state.course_rate) <= plant.max_course_rate_radps + 1e-12


def test_course_error_uses_shortest_turn(plant: PlantConfig) -> None:
    state = VesselState(north=0.0, east=0.0, sog=5.0, course=math.pi - 0.05)
    stepped = step_plant(state, 5.0, -math.pi + 0.05, plant, plant.step_s)
    assert stepped.course_rate > 0


def test_constant_reference_converges_within_fifty_seconds(plant: PlantConfig) -> None:
    state = VesselState(north=0.0, east=0.0, sog=2.0, course=-1.0, course_rate=0.1)
    final = _simulate(state, 6.0, 1.2, plant, 50.0)
    assert final.sog == pytest.approx(6.0, rel=0.01)
    assert abs(final.course - 1.2) <= 0.01 * 1.2


def test_speed_never_negative(plant: PlantConfig) -> None:
    state = VesselState(north=0.0, east=0.0, sog=0.3, course=0.0)
    for _ in range(100):
        state = step_plant(state, 0.0, 0.0, plant, plant.step_s, feedforward_accel=-2.0)
        assert state.sog >= 0.0


def test_feedforward_tracks_ramping_speed(plant: PlantConfig) -> None:
    state = VesselState(north=0.0, east=0.0, sog=3.0, course=0.0)
    accel = 0.2
    for step in range(100):
        desired = 3.0 + accel * step * plant.step_s
        state = step_plant(state, desired, 0.0, plant, plant.step_s, feedforward_accel=accel)
    assert state.sog == pytest.approx(3.0 + accel * 10.0, abs=0.02)


def test_step_rejects_nonpositive_dt(plant: PlantConfig) -> None:
    state = VesselState(north=0.0, east=0.0, sog=1.0, course=0.0)
    with pytest.raises(ValueError):
        step_plant(state, 1.0, 0.0, plant, 0.0)


def test_feedback_correction_starts_at_state_and_converges(plant: PlantConfig) -> None:
    desired = _constant(5.0, 0.0)
    state = VesselState(north=0.0, east=0.0, sog=3.0, course=0.4)
    corrected = feedback_correct(desired, state, plant)
    assert float(corrected.sog(0.0)) == pytest.approx(3.0)
    assert float(corrected.course(0.0)) == pytest.approx(0.4)
    assert float(corrected.sog(5.0)) == pytest.approx(5.0 - 2.0 * math.exp(-1.0))
    assert float(corrected.course(80.0)) == pytest.approx(0.0, abs=1e-6)
    assert float(corrected.sog(80.0)) == pytest.approx(5.0, abs=1e-6)
    assert corrected.desired().sog_error == 0.0


def test_feedback_correction_wraps_course_error(plant: PlantConfig) -> None:
    desired = _constant(5.0, math.pi - 0.1)
    state = VesselState(north=0.0, east=0.0, sog=5.0, course=-math.pi + 0.1)
    corrected = feedback_correct(desired, state, plant)
    assert corrected.course_error == pytest.approx(0.2)


def test_vessel_state_rejects_negative_speed() -> None:
    with pytest.raises(ValueError):
        VesselState(north=0.0, east=0.0, sog=-0.1, course=0.0)


def test_angles_wrap_to_half_open_interval() -> None:
    assert wrap_angle(math.pi) == pytest.approx(math.pi)
    assert wrap_angle(-math.pi) == pytest.approx(math.pi)
    assert wrap_angle(3.0 * math.pi / 2.0) == pytest.approx(-math.pi / 2.0)
    np.testing.assert_allclose(
        wrap_angles([-math.pi, 0.5, 7.0]), [math.pi, 0.5, 7.0 - 2.0 * math.pi]
    )
    assert angle_difference(0.1, 2.0 * math.pi - 0.1) == pytest.approx(0.2)
