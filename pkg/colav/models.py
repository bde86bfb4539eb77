"""Runtime value types shared by the planner, the world model and the simulator."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.interpolate import PPoly

from .angles import wrap_angle

FloatArray = NDArray[np.float64]
PrimitiveKind = Literal["sog", "course"]


@dataclass(frozen=True, slots=True)
class VesselState:
    """Ground-referenced vessel state. ``course`` is normalized to (-pi, pi]."""

    north: float
    east: float
    sog: float
    course: float
    course_rate: float = 0.0
    time: float = 0.0

    def __post_init__(self) -> None:
        if self.sog < 0:
            raise ValueError(f"sog must be non-negative, got {self.sog}")
        object.__setattr__(self, "course", wrap_angle(self.course))

    def advanced(self, **changes: float) -> VesselState:
        return replace(self, **changes)


@dataclass(frozen=True, slots=True)
class AccelerationLimits:
    sog_accel_max: float
    sog_accel_min: float
    course_accel_max: float
    course_accel_min: float

    def __post_init__(self) -> None:
        if not self.sog_accel_min < 0 < self.sog_accel_max:
            raise ValueError("speed acceleration limits must straddle zero")
        if not self.course_accel_min < 0 < self.course_accel_max:
            raise ValueError("course acceleration limits must straddle zero")

    def bounds(self, kind: PrimitiveKind) -> tuple[float, float]:
        if kind == "sog":
            return self.sog_accel_min, self.sog_accel_max
        return self.course_accel_min, self.course_accel_max

    def contains(self, sog_accel: float, course_accel: float) -> bool:
        return (
            self.sog_accel_min <= sog_accel <= self.sog_accel_max
            and self.course_accel_min <= course_accel <= self.course_accel_max
        )


@dataclass(frozen=True, slots=True)
class AccelProfile:
    """Piecewise-linear acceleration primitive over local time ``[0, maneuver_time]``."""

    kind: PrimitiveKind
    amplitude: float
    breakpoints: tuple[tuple[float, float], ...]

    @property
    def maneuver_time(self) -> float:
        return self.breakpoints[-1][0]

    def value(self, t: ArrayLike) -> FloatArray:
        times = [point[0] for point in self.breakpoints]
        values = [point[1] for point in self.breakpoints]
        return np.interp(np.asarray(t, dtype=float), times, values, left=0.0, right=0.0)


@dataclass(frozen=True, slots=True)
class AccelerationGrid:
    """Speed and course acceleration samples whose Cartesian product spans the maneuvers."""

    sog: tuple[float, ...]
    course: tuple[float, ...]
    guided_sog: int | None = None
    guided_course: int | None = None

    def __post_init__(self) -> None:
        if not self.sog or not self.course:
            raise ValueError("acceleration grid must be nonempty")

    def pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(len(self.sog)) for j in range(len(self.course))]


@dataclass(frozen=True, slots=True)
class VelocityTrajectory:
    """Desired speed and course over ``[start, start + horizon]``.

    ``sog_fn`` and ``course_fn`` are exact piecewise polynomials in absolute
    time; the course is unwrapped. Evaluation past the end holds the final
    value. A nonzero ``sog_error``/``course_error`` turns the trajectory into
    its feedback-corrected version: the initial error decays exponentially
    with the given time constants.
    """

    sog_fn: PPoly
    course_fn: PPoly
    start: float
    horizon: float
    sample_step: float = 0.5
    sog_error: float = 0.0
    course_error: float = 0.0
    sog_time_constant: float = 1.0
    course_time_constant: float = 1.0

    @property
    def end(self) -> float:
        return self.start + self.horizon

    def _clip(self, t: ArrayLike) -> FloatArray:
        return np.clip(np.asarray(t, dtype=float), self.start, self.end)

    def _decay(self, t: ArrayLike, time_constant: float) -> FloatArray:
        elapsed = np.maximum(np.asarray(t, dtype=float) - self.start, 0.0)
        return np.exp(-elapsed / time_constant)

    def sog(self, t: ArrayLike) -> FloatArray:
        value = np.maximum(self.sog_fn(self._clip(t)), 0.0)
        if self.sog_error != 0.0:
            value = np.maximum(value + self.sog_error * self._decay(t, self.sog_time_constant), 0.0)
        return value

    def course(self, t: ArrayLike) -> FloatArray:
        value = self.course_fn(self._clip(t))
        if self.course_error != 0.0:
            value = value + self.course_error * self._decay(t, self.course_time_constant)
        return np.asarray(value, dtype=float)

    def sog_rate(self, t: ArrayLike) -> FloatArray:
        """Rate of the desired (uncorrected) speed; zero outside the span and while clamped."""
        times = np.asarray(t, dtype=float)
        inside = (times >= self.start) & (times < self.end)
        moving = self.sog_fn(self._clip(times)) > 0.0
        rate = self.sog_fn.derivative()(self._clip(times))
        return np.where(inside & moving, rate, 0.0)

    def course_rate(self, t: ArrayLike) -> FloatArray:
        """Rate of the desired (uncorrected) course; zero outside the span."""
        times = np.asarray(t, dtype=float)
        inside = (times >= self.start) & (times < self.end)
        return np.where(inside, self.course_fn.derivative()(self._clip(times)), 0.0)

    def desired(self) -> VelocityTrajectory:
        """Drop any feedback correction."""
        return replace(self, sog_error=0.0, course_error=0.0)


@dataclass(frozen=True, slots=True)
class PoseSamples:
    """Pose trajectory sampled at fixed steps; arrays are ``(K,)`` or stacked ``(C, K)``."""

    times: FloatArray
    north: FloatArray
    east: FloatArray
    course: FloatArray

    def row(self, index: int) -> PoseSamples:
        return PoseSamples(self.times, self.north[index], self.east[index], self.course[index])


@dataclass(frozen=True, slots=True)
class ManeuverNode:
    """Vessel configuration at the start of a tree level."""

    time: float
    north: float
    east: float
    sog: float
    course: float
    course_rate: float = 0.0


@dataclass(frozen=True, slots=True)
class Maneuver:
    """One sub-trajectory: a speed and a course primitive started from a node."""

    start: float
    duration: float
    sog_fn: PPoly
    course_fn: PPoly
    sog_index: int
    course_index: int
    sog_amplitude: float
    course_amplitude: float
    guided: bool = False

    @property
    def end(self) -> float:
        return self.start + self.duration


@dataclass(frozen=True, slots=True)
class CandidateTrajectory:
    """One root-to-leaf path through the trajectory prediction tree."""

    index: int
    desired: VelocityTrajectory
    corrected: VelocityTrajectory
    pose: PoseSamples
    leaf_path: tuple[tuple[int, int], ...]
    amplitudes: tuple[tuple[float, float], ...]
    guided: bool = False


@dataclass(frozen=True, slots=True)
class OccupancyGrid:
    """Rasterized static obstacles; ``values[i, j]`` is row ``i`` (north), column ``j`` (east)."""

    origin_north: float
    origin_east: float
    resolution: float
    values: FloatArray

    def __post_init__(self) -> None:
        if self.resolution <= 0:
            raise ValueError("grid resolution must be positive")
        if self.values.size and (self.values.min() < 0 or self.values.max() > 100):
            raise ValueError("grid values must lie in [0, 100]")

    @property
    def shape(self) -> tuple[int, int]:
        rows, cols = self.values.shape
        return int(rows), int(cols)


@dataclass(frozen=True, slots=True)
class GridBounds:
    north_min: float
    north_max: float
    east_min: float
    east_max: float

    def __post_init__(self) -> None:
        if self.north_max <= self.north_min or self.east_max <= self.east_min:
            raise ValueError("grid bounds must have positive extent")


@dataclass(frozen=True, slots=True)
class StaticObstacle:
    name: str
    vertices: tuple[tuple[float, float], ...]
    padding: float


@dataclass(frozen=True, slots=True)
class ObstacleEstimate:
    """Tracked (or true) moving obstacle with a north/east velocity."""

    id: str
    timestamp: float
    north: float
    east: float
    velocity_north: float
    velocity_east: float

    @property
    def sog(self) -> float:
        return math.hypot(self.velocity_north, self.velocity_east)

    @property
    def course(self) -> float:
        if self.sog == 0.0:
            return 0.0
        return math.atan2(self.velocity_east, self.velocity_north)


@dataclass(frozen=True, slots=True)
class PlannerMemory:
    """The desired velocity trajectory the controllers currently track."""

    trajectory: VelocityTrajectory
    start_time: float
    first_step_time: float


@dataclass(frozen=True, slots=True)
class CostBreakdown:
    align: float
    avoid_moving: float
    avoid_static: float
    tran_sog: float
    tran_course: float
    total: float

    def as_dict(self) -> dict[str, float]:
        return {
            "align": self.align,
            "avoid_moving": self.avoid_moving,
            "avoid_static": self.avoid_static,
            "tran_sog": self.tran_sog,
            "tran_course": self.tran_course,
            "total": self.total,
        }


@dataclass(frozen=True, slots=True)
class CostTable:
    """Unweighted term values for every candidate plus the weighted totals."""

    align: FloatArray
    avoid_moving: FloatArray
    avoid_static: FloatArray
    tran_sog: FloatArray
    tran_course: FloatArray
    total: FloatArray

    def breakdown(self, index: int) -> CostBreakdown:
        return CostBreakdown(
            align=float(self.align[index]),
            avoid_moving=float(self.avoid_moving[index]),
            avoid_static=float(self.avoid_static[index]),
            tran_sog=float(self.tran_sog[index]),
            tran_course=float(self.tran_course[index]),
            total=float(self.total[index]),
        )


@dataclass(frozen=True, slots=True)
class Selection:
    candidate: CandidateTrajectory
    index: int
    breakdown: CostBreakdown
    table: CostTable


@dataclass(slots=True)
class StateRecord:
    time: float
    north: float
    east: float
    sog: float
    course: float
    desired_sog: float
    desired_course: float
    obstacle_distances: dict[str, float] = field(default_factory=dict)


@dataclass(slots=True)
class PlannerRecord:
    time: float
    candidate_index: int
    leaf_path: tuple[tuple[int, int], ...]
    candidate_count: int
    breakdown: CostBreakdown
    wall_time: float


@dataclass(slots=True)
class ObstacleRecord:
    time: float
    truth: ObstacleEstimate
    estimate: ObstacleEstimate


@dataclass(slots=True)
class RunLog:
    """Time-stamped output of one closed-loop run."""

    scenario: str
    seed: int
    obstacle_ids: list[str] = field(default_factory=list)
    states: list[StateRecord] = field(default_factory=list)
    iterations: list[PlannerRecord] = field(default_factory=list)
    obstacles: list[ObstacleRecord] = field(default_factory=list)
    selected: list[VelocityTrajectory] = field(default_factory=list)
