"""Vessel model: acceleration envelope, feedback correction and the simulated plant."""
from __future__ import annotations

import math
from dataclasses import replace

import numpy as np

from ..angles import wrap_angle
from ..models import AccelerationLimits, VelocityTrajectory, VesselState
from ..schemas import PlantConfig


def limits_at_sog(sog: float, config: PlantConfig) -> AccelerationLimits:
    """Acceleration envelope at a given speed; affine in speed, kept away from zero."""
    return AccelerationLimits(
        sog_accel_max=max(config.sog_accel_max_mps2.evaluate(sog), config.sog_accel_floor_mps2),
        sog_accel_min=min(config.sog_accel_min_mps2.evaluate(sog), -config.sog_accel_floor_mps2),
        course_accel_max=max(
            config.course_accel_max_radps2.evaluate(sog), config.course_accel_floor_radps2
        ),
        course_accel_min=min(
            config.course_accel_min_radps2.evaluate(sog), -config.course_accel_floor_radps2
        ),
    )


def acceleration_limits(state: VesselState, config: PlantConfig) -> AccelerationLimits:
    return limits_at_sog(state.sog, config)


def feedback_correct(
    desired: VelocityTrajectory, state: VesselState, config: PlantConfig
) -> VelocityTrajectory:
    """Attach the closed-loop response to the error between ``state`` and ``desired`` at its start.

    The corrected trajectory equals ``desired`` plus the initial speed and
    course errors decaying with the controller time constants; it converges
    to ``desired`` and matches ``state`` exactly at the start time.
    """
    sog_error = state.sog - float(desired.sog(desired.start))
    course_error = wrap_angle(state.course - float(desired.course(desired.start)))
    return replace(
        desired,
        sog_error=sog_error,
        course_error=course_error,
        sog_time_constant=config.sog_time_constant_s,
        course_time_constant=config.course_time_constant_s,
    )


def step_plant(
    state: VesselState,
    desired_sog: float,
    desired_course: float,
    config: PlantConfig,
    dt: float,
    *,
    feedforward_accel: float = 0.0,
    feedforward_rate: float = 0.0,
) -> VesselState:
    """Advance the simulated vessel and its speed/course controllers by ``dt`` seconds.

    Speed follows a first-order response toward ``desired_sog``; the course
    rate follows a first-order response toward a saturated rate command.
    Both changes are limited by the acceleration envelope at the current speed.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    limits = acceleration_limits(state, config)

    tau_u = config.sog_time_constant_s
    target_sog = desired_sog + feedforward_accel * tau_u
    free_sog = target_sog + (state.sog - target_sog) * math.exp(-dt / tau_u)
    sog_change = float(
        np.clip(free_sog - state.sog, limits.sog_accel_min * dt, limits.sog_accel_max * dt)
    )
    sog = max(state.sog + sog_change, 0.0)

    max_rate = config.max_course_rate_radps
    course_error = wrap_angle(desired_course - state.course)
    rate_command = feedforward_rate + course_error / config.course_time_constant_s
    rate_command = float(np.clip(rate_command, -max_rate, max_rate))
    tau_r = config.course_rate_time_constant_s
    free_rate = rate_command + (state.course_rate - rate_command) * math.exp(-dt / tau_r)
    rate_change = float(
        np.clip(
            free_rate - state.course_rate,
            limits.course_accel_min * dt,
            limits.course_accel_max * dt,
        )
    )
    course_rate = float(np.clip(state.course_rate + rate_change, -max_rate, max_rate))
    course = state.course + 0.5 * (state.course_rate + course_rate) * dt

    north = state.north + 0.5 * dt * (
        state.sog * math.cos(state.course) + sog * math.cos(course)
    )
    east = state.east + 0.5 * dt * (state.sog * math.sin(state.course) + sog * math.sin(course))
    return VesselState(
        north=north,
        east=east,
        sog=sog,
        course=course,
        course_rate=course_rate,
        time=state.time + dt,
    )
