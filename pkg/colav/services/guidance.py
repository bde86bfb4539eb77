"""Desired trajectory: timed waypoints joined by straight legs."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import shapely
from numpy.typing import ArrayLike

from ..models import FloatArray
from ..schemas import DesiredTrajectorySpec


@dataclass(frozen=True, slots=True)
class DesiredTrajectory:
    """Piecewise-linear position reference, extrapolated at constant velocity past either end."""

    times: FloatArray
    north: FloatArray
    east: FloatArray
    speed_mps: float

    def __post_init__(self) -> None:
        if len(self.times) < 2:
            raise ValueError("a desired trajectory needs at least two waypoints")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("waypoint times must be strictly increasing")

    @classmethod
    def from_spec(cls, spec: DesiredTrajectorySpec) -> DesiredTrajectory:
        return cls(
            times=np.array([waypoint.time_s for waypoint in spec.waypoints], dtype=float),
            north=np.array([waypoint.north_m for waypoint in spec.waypoints], dtype=float),
            east=np.array([waypoint.east_m for waypoint in spec.waypoints], dtype=float),
            speed_mps=spec.speed_mps,
        )

    @classmethod
    def straight(
        cls,
        *,
        north: float,
        east: float,
        course: float,
        speed: float,
        duration: float,
        start_time: float = 0.0,
    ) -> DesiredTrajectory:
        distance = speed * duration
        return cls(
            times=np.array([start_time, start_time + duration]),
            north=np.array([north, north + distance * math.cos(course)]),
            east=np.array([east, east + distance * math.sin(course)]),
            speed_mps=speed,
        )

    def _segment(self, t: FloatArray) -> np.ndarray:
        index = np.searchsorted(self.times, t, side="right") - 1
        return np.clip(index, 0, len(self.times) - 2)

    def velocity(self, t: ArrayLike) -> tuple[FloatArray, FloatArray]:
        times = np.asarray(t, dtype=float)
        segment = self._segment(times)
        span = self.times[segment + 1] - self.times[segment]
        return (
            (self.north[segment + 1] - self.north[segment]) / span,
            (self.east[segment + 1] - self.east[segment]) / span,
        )

    def position(self, t: ArrayLike) -> tuple[FloatArray, FloatArray]:
        times = np.asarray(t, dtype=float)
        segment = self._segment(times)
        velocity_north, velocity_east = self.velocity(times)
        elapsed = times - self.times[segment]
        return (
            self.north[segment] + velocity_north * elapsed,
            self.east[segment] + velocity_east * elapsed,
        )

    def speed(self, t: ArrayLike) -> FloatArray:
        return np.hypot(*self.velocity(t))

    def course(self, t: ArrayLike) -> FloatArray:
        velocity_north, velocity_east = self.velocity(t)
        return np.arctan2(velocity_east, velocity_north)

    def anchor_time(self, north: ArrayLike, east: ArrayLike) -> FloatArray:
        """Time at which the desired trajectory passes closest to each point.

        The first and last legs extend past their waypoints, as in :meth:`position`.
        """
        points_north = np.asarray(north, dtype=float)[..., None]
        points_east = np.asarray(east, dtype=float)[..., None]
        leg_north = np.diff(self.north)
        leg_east = np.diff(self.east)
        length_sq = leg_north**2 + leg_east**2
        with np.errstate(divide="ignore", invalid="ignore"):
            fraction = np.where(
                length_sq > 0.0,
                ((points_north - self.north[:-1]) * leg_north
                 + (points_east - self.east[:-1]) * leg_east) / length_sq,
                0.0,
            )
        low = np.zeros(len(leg_north))
        high = np.ones(len(leg_north))
        low[0], high[-1] = -np.inf, np.inf
        fraction = np.clip(fraction, low, high)
        distance = np.hypot(
            self.north[:-1] + fraction * leg_north - points_north,
            self.east[:-1] + fraction * leg_east - points_east,
        )
        best = np.argmin(distance, axis=-1)
        chosen = np.take_along_axis(fraction, best[..., None], axis=-1)[..., 0]
        spans = np.diff(self.times)
        return np.asarray(self.times[best] + chosen * spans[best], dtype=float)

    def cross_track(self, north: ArrayLike, east: ArrayLike) -> FloatArray:
        """Distance from each point to the waypoint polyline."""
        path = shapely.LineString(np.column_stack([self.north, self.east]))
        points = shapely.points(np.asarray(north, dtype=float), np.asarray(east, dtype=float))
        return np.asarray(shapely.distance(path, points), dtype=float)
