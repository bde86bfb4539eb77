"""Closed-loop simulation: plant, noisy obstacle estimates and the periodic planner."""
from __future__ import annotations

import math

import numpy as np
import shapely
import structlog

from ..errors import PlannerError
from ..models import (
    FloatArray,
    ObstacleEstimate,
    ObstacleRecord,
    PlannerRecord,
    RunLog,
    StateRecord,
    VelocityTrajectory,
    VesselState,
)
from ..schemas import (
    CrossTrackStats,
    Metrics,
    MovingObstacleMetrics,
    MovingObstacleSpec,
    ObstacleRegions,
    PlannerConfig,
    PlantConfig,
    RegionEntries,
    ScenarioDocument,
    StaticObstacleMetrics,
    WorldConfig,
)
from .cost import region_scales, to_obstacle_frame
from .guidance import DesiredTrajectory
from .planner import Planner
from .vessel import step_plant
from .world import (
    build_grid,
    inject_noise,
    obstacle_polygon,
    static_obstacle_from,
    true_obstacle_state,
)

logger = structlog.get_logger(__name__)


def initial_state(scenario: ScenarioDocument) -> VesselState:
    ownship = scenario.ownship
    return VesselState(
        north=ownship.north_m,
        east=ownship.east_m,
        sog=ownship.sog_mps,
        course=math.radians(ownship.course_deg),
        course_rate=math.radians(ownship.course_rate_degps),
        time=0.0,
    )


def _every(period: float, dt: float) -> int:
    return max(1, int(round(period / dt)))


def run_closed_loop(
    scenario: ScenarioDocument,
    planner_config: PlannerConfig,
    plant_config: PlantConfig,
    world_config: WorldConfig | None = None,
    *,
    seed: int | None = None,
) -> RunLog:
    """Simulate ``scenario`` for its full duration and return the time-stamped log.

    The plant advances every ``plant.step_s``; obstacle estimates refresh
    every ``world.estimate_period_s`` and the planner runs every
    ``planner.period_s``, both on integer step counters. The same seed
    reproduces the run exactly.
    """
    world = world_config or WorldConfig()
    seed = scenario.seed if seed is None else seed
    rng = np.random.default_rng(seed)
    desired = DesiredTrajectory.from_spec(scenario.desired_trajectory)
    grid = build_grid(
        [static_obstacle_from(spec) for spec in scenario.static_obstacles],
        world.grid_resolution_m,
        world.grid_margin_m,
    )
    planner = Planner(planner_config, plant_config)

    dt = plant_config.step_s
    steps = int(round(scenario.duration_s / dt))
    plan_every = _every(planner_config.period_s, dt)
    estimate_every = _every(world.estimate_period_s, dt)
    noise = scenario.noise

    log = RunLog(
        scenario=scenario.name,
        seed=seed,
        obstacle_ids=[spec.id for spec in scenario.moving_obstacles],
    )
    logger.info(
        "simulation.start",
        scenario=scenario.name,
        seed=seed,
        duration_s=scenario.duration_s,
        static_obstacles=len(scenario.static_obstacles),
        moving_obstacles=len(scenario.moving_obstacles),
    )

    state = initial_state(scenario)
    reference: VelocityTrajectory | None = None
    estimates: list[ObstacleEstimate] = []
    for step in range(steps + 1):
        now = step * dt
        if step < steps and step % estimate_every == 0:
            estimates = []
            for spec in scenario.moving_obstacles:
                truth = true_obstacle_state(spec, now - world.estimate_latency_s)
                estimate = inject_noise(
                    truth, noise.position_sigma_m, noise.velocity_sigma_mps, rng
                )
                estimates.append(estimate)
                truth_now = true_obstacle_state(spec, now)
                log.obstacles.append(ObstacleRecord(time=now, truth=truth_now, estimate=estimate))
        if step < steps and step % plan_every == 0:
            try:
                result = planner.plan(state, desired, grid, estimates)
            except PlannerError as exc:
                logger.error("simulation.planner_failed", time=now, error=exc.detail)
                raise
            reference = result.selection.candidate.desired
            log.selected.append(reference)
            log.iterations.append(
                PlannerRecord(
                    time=now,
                    candidate_index=result.selection.index,
                    leaf_path=result.selection.candidate.leaf_path,
                    candidate_count=len(result.candidates),
                    breakdown=result.selection.breakdown,
                    wall_time=result.wall_time,
                )
            )

        if reference is None:
            desired_sog, desired_course = state.sog, state.course
            feedforward_accel = feedforward_rate = 0.0
        else:
            desired_sog = float(reference.sog(now))
            desired_course = float(reference.course(now))
            feedforward_accel = float(reference.sog_rate(now))
            feedforward_rate = float(reference.course_rate(now))

        log.states.append(
            StateRecord(
                time=now,
                north=state.north,
                east=state.east,
                sog=state.sog,
                course=state.course,
                desired_sog=desired_sog,
                desired_course=desired_course,
                obstacle_distances={
                    spec.id: _distance_to(state, true_obstacle_state(spec, now))
                    for spec in scenario.moving_obstacles
                },
            )
        )
        if step == steps:
            break
        state = step_plant(
            state,
            desired_sog,
            desired_course,
            plant_config,
            dt,
            feedforward_accel=feedforward_accel,
            feedforward_rate=feedforward_rate,
        ).advanced(time=(step + 1) * dt)

    logger.info(
        "simulation.complete",
        scenario=scenario.name,
        states=len(log.states),
        iterations=len(log.iterations),
    )
    return log


def _distance_to(state: VesselState, obstacle: ObstacleEstimate) -> float:
    return math.hypot(state.north - obstacle.north, state.east - obstacle.east)


def _track(log: RunLog) -> tuple[FloatArray, FloatArray, FloatArray]:
    if not log.states:
        raise ValueError("run log has no states")
    times = np.array([record.time for record in log.states])
    north = np.array([record.north for record in log.states])
    east = np.array([record.east for record in log.states])
    return times, north, east


def _entries(inside: np.ndarray) -> int:
    """Outside-to-inside transitions; starting inside counts as one entry."""
    if inside.size == 0:
        return 0
    return int(inside[0]) + int(np.count_nonzero(inside[1:] & ~inside[:-1]))


def _crossed_astern(x: FloatArray, y: FloatArray) -> bool | None:
    """Whether the first crossing of the obstacle's track line happens behind it."""
    sign = np.sign(y)
    crossings = np.flatnonzero((sign[1:] * sign[:-1] < 0) | ((sign[1:] == 0) & (sign[:-1] != 0)))
    if crossings.size == 0:
        return None
    k = int(crossings[0])
    fraction = y[k] / (y[k] - y[k + 1]) if y[k] != y[k + 1] else 0.0
    return bool(x[k] + (x[k + 1] - x[k]) * fraction < 0.0)


def moving_obstacle_metrics(
    log: RunLog, spec: MovingObstacleSpec, regions: ObstacleRegions
) -> MovingObstacleMetrics:
    times, north, east = _track(log)
    course = math.radians(spec.course_deg)
    obstacle_north = spec.north_m + spec.sog_mps * math.cos(course) * times
    obstacle_east = spec.east_m + spec.sog_mps * math.sin(course) * times
    distance = np.hypot(north - obstacle_north, east - obstacle_east)
    closest = int(np.argmin(distance))
    x, y = to_obstacle_frame(north - obstacle_north, east - obstacle_east, course)
    stationary = spec.sog_mps < regions.stationary_sog_threshold_mps
    inside = region_scales(x, y, regions, stationary=stationary) <= 1.0
    return MovingObstacleMetrics(
        id=spec.id,
        min_distance_m=float(distance[closest]),
        time_of_closest_approach_s=float(times[closest]),
        passing_side="starboard" if y[closest] >= 0.0 else "port",
        crossed_astern=None if stationary else _crossed_astern(x, y),
        region_entries=RegionEntries(
            collision=_entries(inside[:, 0]),
            safety=_entries(inside[:, 1]),
            margin=_entries(inside[:, 2]),
        ),
    )


def cross_track_stats(log: RunLog, desired: DesiredTrajectory) -> CrossTrackStats:
    _, north, east = _track(log)
    error = desired.cross_track(north, east)
    return CrossTrackStats(
        mean_m=float(error.mean()),
        rms_m=float(np.sqrt(np.mean(error**2))),
        max_m=float(error.max()),
        final_m=float(error[-1]),
    )


def compute_metrics(
    log: RunLog, scenario: ScenarioDocument, regions: ObstacleRegions
) -> Metrics:
    """Distances to the true obstacles, tracking quality and region entries."""
    _, north, east = _track(log)
    points = shapely.points(north, east)
    static: list[StaticObstacleMetrics] = []
    for spec in scenario.static_obstacles:
        polygon = obstacle_polygon(static_obstacle_from(spec))
        distances = shapely.distance(polygon, points)
        static.append(
            StaticObstacleMetrics(name=spec.name, min_distance_m=float(np.min(distances)))
        )

    moving = [
        moving_obstacle_metrics(log, spec, regions) for spec in scenario.moving_obstacles
    ]
    totals = RegionEntries(
        collision=sum(item.region_entries.collision for item in moving),
        safety=sum(item.region_entries.safety for item in moving),
        margin=sum(item.region_entries.margin for item in moving),
    )
    return Metrics(
        static_obstacles=static,
        moving_obstacles=moving,
        cross_track=cross_track_stats(
            log, DesiredTrajectory.from_spec(scenario.desired_trajectory)
        ),
        region_entries=totals,
    )
