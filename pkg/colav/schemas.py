"""Pydantic documents: parameter files, scenario files and run outputs."""
from __future__ import annotations

import math
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator


class _Document(BaseModel):
    """Immutable, strict-keyed base for configuration documents."""

    model_config = ConfigDict(frozen=True, extra="forbid")


# --------------------------------------------------------------------------- planner


class PrimitiveConfig(_Document):
    """Acceleration primitive timing for one tree level."""

    step_time_s: float = Field(gt=0)
    ramp_time_s: float = Field(gt=0)
    sog_maneuver_time_s: float = Field(gt=0)
    course_maneuver_time_s: float = Field(gt=0)
    n_sog: int = Field(default=1, ge=1)
    n_course: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _check_timing(self) -> PrimitiveConfig:
        if self.sog_maneuver_time_s > self.step_time_s:
            raise ValueError("sog_maneuver_time_s must not exceed step_time_s")
        if self.course_maneuver_time_s > self.step_time_s:
            raise ValueError("course_maneuver_time_s must not exceed step_time_s")
        ramp_limit = min(self.sog_maneuver_time_s / 2.0, self.course_maneuver_time_s / 4.0)
        if self.ramp_time_s > ramp_limit:
            raise ValueError(
                f"ramp_time_s={self.ramp_time_s} exceeds half the speed maneuver or a quarter "
                f"of the course maneuver ({ramp_limit})"
            )
        return self


class TreeConfig(_Document):
    """Trajectory prediction tree shape: depth, per-level step times and branching."""

    depth: int = Field(ge=1)
    step_times_s: list[float]
    n_sog: list[int]
    n_course: list[int]
    ramp_time_s: float = Field(gt=0)
    sog_maneuver_time_s: float = Field(gt=0)
    course_maneuver_time_s: float = Field(gt=0)
    sample_step_s: float = Field(default=0.5, gt=0)

    @model_validator(mode="after")
    def _check_levels(self) -> TreeConfig:
        for name in ("step_times_s", "n_sog", "n_course"):
            if len(getattr(self, name)) != self.depth:
                raise ValueError(f"{name} must have one entry per level (depth={self.depth})")
        for index in range(self.depth):
            try:
                self.level(index)
            except ValidationError as exc:
                reasons = "; ".join(str(error["msg"]) for error in exc.errors())
                raise ValueError(f"level {index + 1}: {reasons}") from exc
        return self

    def level(self, index: int) -> PrimitiveConfig:
        return PrimitiveConfig(
            step_time_s=self.step_times_s[index],
            ramp_time_s=self.ramp_time_s,
            sog_maneuver_time_s=self.sog_maneuver_time_s,
            course_maneuver_time_s=self.course_maneuver_time_s,
            n_sog=self.n_sog[index],
            n_course=self.n_course[index],
        )

    @property
    def horizon_s(self) -> float:
        return float(sum(self.step_times_s))

    @property
    def candidate_count(self) -> int:
        return math.prod(u * c for u, c in zip(self.n_sog, self.n_course))


class ObjectiveWeights(_Document):
    """Weights of the five objective terms."""

    align: float = Field(default=1.5, gt=0)
    avoid_moving: float = Field(default=6000.0, gt=0)
    avoid_static: float = Field(default=30.0, gt=0)
    tran_sog: float = Field(default=2100.0, gt=0)
    tran_course: float = Field(default=1050.0, gt=0)

    def scaled(self, factor: float) -> ObjectiveWeights:
        return ObjectiveWeights(
            align=self.align * factor,
            avoid_moving=self.avoid_moving * factor,
            avoid_static=self.avoid_static * factor,
            tran_sog=self.tran_sog * factor,
            tran_course=self.tran_course * factor,
        )


class ObstacleRegions(_Document):
    """Nested collision (0) / safety (1) / margin (2) regions around a moving obstacle."""

    fore_m: tuple[float, float, float] = (50.0, 150.0, 250.0)
    aft_m: tuple[float, float, float] = (25.0, 75.0, 125.0)
    colregs_expansion_m: float = Field(default=100.0, ge=0)
    safety_boundary_cost: float = Field(default=0.5, gt=0, lt=1)
    stationary_sog_threshold_mps: float = Field(default=0.5, ge=0)

    @model_validator(mode="after")
    def _check_nesting(self) -> ObstacleRegions:
        for name in ("fore_m", "aft_m"):
            values = getattr(self, name)
            if not 0 < values[0] < values[1] < values[2]:
                raise ValueError(f"{name} must be positive and strictly increasing")
        return self

    @property
    def starboard_m(self) -> tuple[float, float, float]:
        d = self.colregs_expansion_m
        return (self.aft_m[0] + d, self.aft_m[1] + d, self.aft_m[2] + d)


class GuidanceConfig(_Document):
    """Line-of-sight guidance used to shift level-1 acceleration samples."""

    enabled: bool = True
    lookahead_m: float = Field(default=100.0, gt=0)


class AlignConfig(_Document):
    normalization_m: float = Field(default=3.0, gt=0)


class PlannerConfig(_Document):
    """Everything one planner iteration needs besides the plant model."""

    tree: TreeConfig
    weights: ObjectiveWeights = Field(default_factory=ObjectiveWeights)
    regions: ObstacleRegions = Field(default_factory=ObstacleRegions)
    guidance: GuidanceConfig = Field(default_factory=GuidanceConfig)
    align: AlignConfig = Field(default_factory=AlignConfig)
    period_s: float = Field(default=5.0, gt=0)


# --------------------------------------------------------------------------- plant


class AffineCoefficients(_Document):
    """``value = base + per_mps * sog``."""

    base: float
    per_mps: float = 0.0

    def evaluate(self, sog: float) -> float:
        return self.base + self.per_mps * sog


class PlantConfig(_Document):
    """Simulated vessel + speed/course controller and its acceleration envelope."""

    sog_time_constant_s: float = Field(default=5.0, gt=0)
    course_time_constant_s: float = Field(default=5.0, gt=0)
    course_rate_time_constant_s: float = Field(default=0.5, gt=0)
    max_course_rate_radps: float = Field(default=0.3, gt=0)
    step_s: float = Field(default=0.1, gt=0)

    sog_accel_max_mps2: AffineCoefficients = AffineCoefficients(base=1.0, per_mps=-0.03)
    sog_accel_min_mps2: AffineCoefficients = AffineCoefficients(base=-1.5, per_mps=0.03)
    course_accel_max_radps2: AffineCoefficients = AffineCoefficients(base=0.2, per_mps=-0.01)
    course_accel_min_radps2: AffineCoefficients = AffineCoefficients(base=-0.2, per_mps=0.01)
    sog_accel_floor_mps2: float = Field(default=0.05, gt=0)
    course_accel_floor_radps2: float = Field(default=0.01, gt=0)


# --------------------------------------------------------------------------- world


class WorldConfig(_Document):
    grid_resolution_m: float = Field(default=5.0, gt=0)
    grid_margin_m: float = Field(default=200.0, ge=0)
    estimate_period_s: float = Field(default=2.5, gt=0)
    estimate_latency_s: float = Field(default=0.0, ge=0)


class ParameterSet(_Document):
    """Root of a parameter file."""

    planner: PlannerConfig
    plant: PlantConfig = Field(default_factory=PlantConfig)
    world: WorldConfig = Field(default_factory=WorldConfig)

    @model_validator(mode="after")
    def _check_rates(self) -> ParameterSet:
        if self.plant.step_s > self.planner.period_s:
            raise ValueError("plant.step_s must not exceed planner.period_s")
        return self


# --------------------------------------------------------------------------- scenario


class OwnshipInit(_Document):
    north_m: float = 0.0
    east_m: float = 0.0
    sog_mps: float = Field(default=0.0, ge=0)
    course_deg: float = 0.0
    course_rate_degps: float = 0.0


class Waypoint(_Document):
    time_s: float
    north_m: float
    east_m: float


# relative mismatch allowed between a leg's implied speed and speed_mps
SPEED_TOLERANCE = 0.05


class DesiredTrajectorySpec(_Document):
    speed_mps: float = Field(gt=0)
    waypoints: list[Waypoint] = Field(min_length=2)

    @model_validator(mode="after")
    def _check_monotone(self) -> DesiredTrajectorySpec:
        times = [waypoint.time_s for waypoint in self.waypoints]
        if any(later <= earlier for earlier, later in zip(times, times[1:])):
            raise ValueError("waypoint times must be strictly increasing")
        for index, (start, end) in enumerate(zip(self.waypoints, self.waypoints[1:])):
            length = math.hypot(end.north_m - start.north_m, end.east_m - start.east_m)
            implied = length / (end.time_s - start.time_s)
            if abs(implied - self.speed_mps) > SPEED_TOLERANCE * self.speed_mps:
                raise ValueError(
                    f"leg {index} implies {implied:.3f} m/s but speed_mps is {self.speed_mps}"
                )
        return self


class StaticObstacleSpec(_Document):
    name: str = "static"
    vertices_m: list[tuple[float, float]] = Field(min_length=3)
    padding_m: float = Field(default=150.0, ge=0)


class MovingObstacleSpec(_Document):
    id: str = Field(min_length=1, pattern=r"^[A-Za-z0-9_\-]+$")
    north_m: float
    east_m: float
    sog_mps: float = Field(ge=0)
    course_deg: float


class NoiseConfig(_Document):
    position_sigma_m: float = Field(default=10.0, ge=0)
    velocity_sigma_mps: float = Field(default=0.5, ge=0)


class ScenarioDocument(_Document):
    name: str = Field(min_length=1)
    description: str = ""
    duration_s: float = Field(ge=0)
    seed: int = 0
    ownship: OwnshipInit
    desired_trajectory: DesiredTrajectorySpec
    static_obstacles: list[StaticObstacleSpec] = Field(default_factory=list)
    moving_obstacles: list[MovingObstacleSpec] = Field(default_factory=list)
    noise: NoiseConfig = Field(default_factory=NoiseConfig)

    @model_validator(mode="after")
    def _check_ids(self) -> ScenarioDocument:
        ids = [obstacle.id for obstacle in self.moving_obstacles]
        if len(ids) != len(set(ids)):
            raise ValueError("moving obstacle ids must be unique")
        return self


# --------------------------------------------------------------------------- outputs


class RegionEntries(BaseModel):
    """Number of transitions from outside to inside each region."""

    collision: int = Field(default=0, ge=0)
    safety: int = Field(default=0, ge=0)
    margin: int = Field(default=0, ge=0)


class StaticObstacleMetrics(BaseModel):
    name: str
    min_distance_m: float = Field(ge=0)


class MovingObstacleMetrics(BaseModel):
    id: str
    min_distance_m: float = Field(ge=0)
    time_of_closest_approach_s: float
    passing_side: Literal["port", "starboard"]
    crossed_astern: bool | None = None
    region_entries: RegionEntries = Field(default_factory=RegionEntries)


class CrossTrackStats(BaseModel):
    mean_m: float = Field(ge=0)
    rms_m: float = Field(ge=0)
    max_m: float = Field(ge=0)
    final_m: float = Field(ge=0)


class Metrics(BaseModel):
    """Minimum distances, tracking quality and region entries of one run."""

    static_obstacles: list[StaticObstacleMetrics] = Field(default_factory=list)
    moving_obstacles: list[MovingObstacleMetrics] = Field(default_factory=list)
    cross_track: CrossTrackStats
    region_entries: RegionEntries = Field(default_factory=RegionEntries)


class IterationSummary(BaseModel):
    """One planner iteration as written to the run summary."""

    time_s: float
    candidate_index: int = Field(ge=0)
    leaf_path: list[tuple[int, int]]
    candidate_count: int = Field(ge=1)
    terms: dict[str, float]
    wall_time_s: float = Field(ge=0)


class RunSummary(BaseModel):
    scenario: str
    seed: int
    duration_s: float
    metrics: Metrics
    iterations: list[IterationSummary] = Field(default_factory=list)


class ValidationReport(BaseModel):
    valid: bool
    violations: list[str] = Field(default_factory=list)


class RunSpec(BaseModel):
    """Resolved command-line request for one simulation run."""

    scenario: str
    params_path: Path | None = None
    output_dir: Path
    seed: int | None = None
    plot: bool = False
    export_grid: bool = False
    overrides: dict[str, Any] = Field(default_factory=dict)
