"""Acceleration primitives and their exact integration into speed and course trajectories.

Speed primitives are trapezoids over ``[0, sog_maneuver_time_s]``; course primitives are a
positive trapezoid on the first half of ``[0, course_maneuver_time_s]`` followed by its
negative, so a course maneuver ends with zero course rate. All profiles are
piecewise linear, so integrating them once or twice gives exact piecewise
polynomials (``scipy.interpolate.PPoly``) in local time ``[0, horizon]``.
"""
from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np
from scipy.interpolate import PPoly
from scipy.optimize import brentq

from ..angles import wrap_angle
from ..models import AccelerationGrid, AccelerationLimits, AccelProfile, PrimitiveKind, VesselState
from ..schemas import PrimitiveConfig
from .guidance import DesiredTrajectory

_TIME_EPS = 1e-9


def sample_accelerations(
    limits: AccelerationLimits, n: int, kind: PrimitiveKind
) -> tuple[float, ...]:
    """``n`` samples spanning the limits, ascending, with exactly one sample equal to 0."""
    if n < 1:
        raise ValueError(f"sample count must be at least 1, got {n}")
    if n == 1:
        return (0.0,)
    low, high = limits.bounds(kind)
    samples = np.linspace(low, high, n)
    samples[np.argmin(np.abs(samples))] = 0.0
    return tuple(float(value) for value in samples)


def _dedupe(points: Sequence[tuple[float, float]]) -> tuple[tuple[float, float], ...]:
    kept = [points[0]]
    for point in points[1:]:
        if point[0] - kept[-1][0] > _TIME_EPS:
            kept.append(point)
    return tuple(kept)


def speed_profile(amplitude: float, config: PrimitiveConfig) -> AccelProfile:
    ramp = config.ramp_time_s
    total = config.sog_maneuver_time_s
    points = [(0.0, 0.0), (ramp, amplitude), (total - ramp, amplitude), (total, 0.0)]
    return AccelProfile(kind="sog", amplitude=amplitude, breakpoints=_dedupe(points))


def course_profile(amplitude: float, config: PrimitiveConfig) -> AccelProfile:
    ramp = config.ramp_time_s
    total = config.course_maneuver_time_s
    half = total / 2.0
    points = [
        (0.0, 0.0),
        (ramp, amplitude),
        (half - ramp, amplitude),
        (half, 0.0),
        (half + ramp, -amplitude),
        (total - ramp, -amplitude),
        (total, 0.0),
    ]
    return AccelProfile(kind="course", amplitude=amplitude, breakpoints=_dedupe(points))


def course_change(amplitude: float, config: PrimitiveConfig) -> float:
    """Net course change of a course primitive whose initial rate is zero."""
    half = config.course_maneuver_time_s / 2.0
    return amplitude * half * (half - config.ramp_time_s)


def profile_ppoly(
    profile: AccelProfile,
    horizon: float,
    *,
    extra_breaks: Sequence[float] = (),
    offset: float = 0.0,
    offset_until: float = 0.0,
) -> PPoly:
    """Acceleration as a piecewise-linear ``PPoly`` on ``[0, horizon]``.

    ``offset`` is added as a constant on ``[0, offset_until]``.
    """
    if horizon < profile.maneuver_time - _TIME_EPS:
        raise ValueError(
            f"horizon {horizon} is shorter than the maneuver time {profile.maneuver_time}"
        )
    candidates = [point[0] for point in profile.breakpoints] + list(extra_breaks) + [horizon]
    breaks = np.unique(np.clip(np.asarray(candidates, dtype=float), 0.0, horizon))
    breaks = breaks[np.concatenate([[True], np.diff(breaks) > _TIME_EPS])]
    breaks[-1] = horizon
    left = profile.value(breaks[:-1])
    right = profile.value(breaks[1:])
    if offset != 0.0:
        active = breaks[1:] <= offset_until + _TIME_EPS
        left = left + np.where(active, offset, 0.0)
        right = right + np.where(active, offset, 0.0)
    slopes = (right - left) / np.diff(breaks)
    return PPoly(np.vstack([slopes, left]), breaks)


def _clamp_nonnegative(speed: PPoly) -> PPoly:
    """Hold speed at zero from the instant it reaches zero; speed is monotone within a maneuver."""
    start, end = float(speed.x[0]), float(speed.x[-1])
    if float(speed(end)) >= 0.0:
        return speed
    root = start if float(speed(start)) <= 0.0 else brentq(speed, start, end)
    keep = int(np.searchsorted(speed.x, root, side="left"))
    breaks = np.concatenate([speed.x[:keep], [root, end]])
    coefficients = np.hstack([speed.c[:, :keep], np.zeros((speed.c.shape[0], 1))])
    return PPoly(coefficients, breaks)


def integrate_speed(initial_sog: float, profile: AccelProfile, horizon: float) -> PPoly:
    """Speed over local time ``[0, horizon]``: exact integral of the profile, clamped at zero."""
    accel = profile_ppoly(profile, horizon)
    speed = accel.antiderivative()
    speed.c[-1] += initial_sog
    return _clamp_nonnegative(speed)


def integrate_course(
    initial_course: float,
    initial_rate: float,
    profile: AccelProfile,
    config: PrimitiveConfig,
    horizon: float,
) -> PPoly:
    """Course over local time ``[0, horizon]``.

    A nonzero initial course rate is ramped to zero linearly over the ramp
    time and superposed on the profile, so the rate stays continuous across
    levels and every maneuver still ends with zero rate.
    """
    ramp = config.ramp_time_s
    accel = profile_ppoly(
        profile,
        horizon,
        extra_breaks=(ramp,),
        offset=-initial_rate / ramp,
        offset_until=ramp,
    )
    rate = accel.antiderivative()
    rate.c[-1] += initial_rate
    course = rate.antiderivative()
    course.c[-1] += initial_course
    return course


def shift(function: PPoly, start: float) -> PPoly:
    """Move a local-time piecewise polynomial to absolute time."""
    return PPoly(function.c, function.x + start)


def guidance_acceleration(
    state: VesselState,
    desired: DesiredTrajectory,
    config: PrimitiveConfig,
    limits: AccelerationLimits,
    lookahead_m: float,
    *,
    reference_sog: float | None = None,
    reference_course: float | None = None,
    reference_rate: float = 0.0,
) -> tuple[float, float]:
    """Line-of-sight acceleration pair steering back toward the desired trajectory.

    The target point lies ``lookahead_m`` ahead of the own-ship's projection on the desired
    trajectory; the speed sample reaches ``desired.speed_mps`` and the course
    sample turns onto the bearing of the target by the end of one maneuver.
    Both are clamped to the limits.
    """
    sog = state.sog if reference_sog is None else reference_sog
    course = state.course if reference_course is None else reference_course
    desired_speed = max(desired.speed_mps, _TIME_EPS)
    anchor = float(desired.anchor_time(state.north, state.east))
    target_north, target_east = desired.position(anchor + lookahead_m / desired_speed)
    bearing = math.atan2(float(target_east) - state.east, float(target_north) - state.north)

    sog_window = config.sog_maneuver_time_s - config.ramp_time_s
    sog_accel = (desired_speed - sog) / sog_window

    half = config.course_maneuver_time_s / 2.0
    turn = wrap_angle(bearing - course) - reference_rate * config.ramp_time_s / 2.0
    course_accel = turn / (half * (half - config.ramp_time_s))

    return (
        float(np.clip(sog_accel, limits.sog_accel_min, limits.sog_accel_max)),
        float(np.clip(course_accel, limits.course_accel_min, limits.course_accel_max)),
    )


def apply_guidance(
    grid: AccelerationGrid, guidance: tuple[float, float], limits: AccelerationLimits
) -> AccelerationGrid:
    """Replace, per axis, the sample closest to the guidance value by the guidance value.

    Guidance outside the limit box leaves the grid untouched.
    """
    sog_guidance, course_guidance = guidance
    if not limits.contains(sog_guidance, course_guidance):
        return grid
    sog = list(grid.sog)
    course = list(grid.course)
    sog_index = int(np.argmin(np.abs(np.asarray(sog) - sog_guidance)))
    course_index = int(np.argmin(np.abs(np.asarray(course) - course_guidance)))
    sog[sog_index] = sog_guidance
    course[course_index] = course_guidance
    return AccelerationGrid(
        sog=tuple(sog),
        course=tuple(course),
        guided_sog=sog_index,
        guided_course=course_index,
    )
