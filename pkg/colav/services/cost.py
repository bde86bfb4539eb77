"""Objective terms, region geometry around moving obstacles and candidate selection.

All terms are evaluated for every candidate at once on stacked ``(C, K)``
pose arrays.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import structlog
from numpy.typing import ArrayLike
from scipy.integrate import trapezoid

from ..angles import wrap_angles
from ..errors import PlannerError
from ..models import (
    CandidateTrajectory,
    CostTable,
    FloatArray,
    ObstacleEstimate,
    OccupancyGrid,
    PlannerMemory,
    PoseSamples,
    Selection,
)
from ..schemas import ObjectiveWeights, ObstacleRegions
from .guidance import DesiredTrajectory
from .world import predict_obstacle, query

logger = structlog.get_logger(__name__)

ALIGN_NORMALIZATION_M = 3.0


@dataclass(frozen=True, slots=True)
class CostContext:
    """Everything besides the candidates that the objective depends on."""

    weights: ObjectiveWeights
    regions: ObstacleRegions
    desired: DesiredTrajectory
    grid: OccupancyGrid | None = None
    obstacles: tuple[ObstacleEstimate, ...] = ()
    memory: PlannerMemory | None = None
    align_normalization_m: float = ALIGN_NORMALIZATION_M
    deviation_minima: tuple[float, float] | None = None


def stack_poses(candidates: Sequence[CandidateTrajectory]) -> PoseSamples:
    return PoseSamples(
        times=candidates[0].pose.times,
        north=np.vstack([candidate.pose.north for candidate in candidates]),
        east=np.vstack([candidate.pose.east for candidate in candidates]),
        course=np.vstack([candidate.pose.course for candidate in candidates]),
    )


# --------------------------------------------------------------------------- geometry


def to_obstacle_frame(
    d_north: ArrayLike, d_east: ArrayLike, course: ArrayLike
) -> tuple[FloatArray, FloatArray]:
    """Rotate a north/east offset into the obstacle frame: x forward, y to starboard."""
    dn = np.asarray(d_north, dtype=float)
    de = np.asarray(d_east, dtype=float)
    cos_c = np.cos(course)
    sin_c = np.sin(course)
    return dn * cos_c + de * sin_c, -dn * sin_c + de * cos_c


def region_scales(
    x: ArrayLike, y: ArrayLike, regions: ObstacleRegions, *, stationary: bool = False
) -> FloatArray:
    """Normalized elliptic radius of ``(x, y)`` w.r.t. each region boundary; last axis is 3.

    A value of at most 1 means the point lies inside that region. Each
    quadrant uses its own semi-axes: fore ``a``, aft and port ``b``,
    starboard ``c``; a stationary obstacle gets circles of radii ``b``.
    """
    xs = np.asarray(x, dtype=float)[..., None]
    ys = np.asarray(y, dtype=float)[..., None]
    fore = np.asarray(regions.fore_m)
    aft = np.asarray(regions.aft_m)
    starboard = np.asarray(regions.starboard_m)
    if stationary:
        return np.hypot(xs, ys) / aft
    along = np.where(xs >= 0.0, fore, aft)
    across = np.where(ys >= 0.0, starboard, aft)
    return np.hypot(xs / along, ys / across)


def region_level(
    x: ArrayLike, y: ArrayLike, regions: ObstacleRegions, *, stationary: bool = False
) -> np.ndarray:
    """Innermost region containing each point: 0 collision, 1 safety, 2 margin, 3 outside."""
    inside = region_scales(x, y, regions, stationary=stationary) <= 1.0
    return np.where(inside[..., 0], 0, np.where(inside[..., 1], 1, np.where(inside[..., 2], 2, 3)))


def region_cost(
    x: ArrayLike, y: ArrayLike, regions: ObstacleRegions, *, stationary: bool = False
) -> FloatArray:
    """Collision-risk cost in ``[0, 1]`` of a point in the obstacle frame.

    1 inside the collision region, ``safety_boundary_cost`` on the safety
    boundary and 0 from the margin boundary outward, falling linearly along
    each ray from the obstacle in between.
    """
    scales = region_scales(x, y, regions, stationary=stationary)
    boundary = regions.safety_boundary_cost
    with np.errstate(divide="ignore", invalid="ignore"):
        inverse = 1.0 / scales
        inner = (1.0 - inverse[..., 0]) / (inverse[..., 1] - inverse[..., 0])
        outer = (1.0 - inverse[..., 1]) / (inverse[..., 2] - inverse[..., 1])
        cost = np.where(
            scales[..., 0] <= 1.0,
            1.0,
            np.where(
                scales[..., 1] <= 1.0,
                1.0 - (1.0 - boundary) * inner,
                np.where(scales[..., 2] <= 1.0, boundary * (1.0 - outer), 0.0),
            ),
        )
    return np.clip(cost, 0.0, 1.0)


# --------------------------------------------------------------------------- terms


def align(
    pose: PoseSamples, desired: DesiredTrajectory, normalization_m: float = ALIGN_NORMALIZATION_M
) -> FloatArray:
    """Time integral of the distance to the desired trajectory, divided by ``normalization_m``.

    The reference is re-anchored where the desired trajectory passes closest
    to the first pose and then advances with it, so lateral offset and
    progress relative to the desired speed over the horizon are what count.
    """
    anchor = desired.anchor_time(pose.north[..., :1], pose.east[..., :1])
    target_north, target_east = desired.position(anchor + (pose.times - pose.times[0]))
    error = np.hypot(pose.north - target_north, pose.east - target_east)
    return np.asarray(trapezoid(error, pose.times, axis=-1) / normalization_m, dtype=float)


def avoid_moving(
    pose: PoseSamples, obstacles: Sequence[ObstacleEstimate], regions: ObstacleRegions
) -> FloatArray:
    """Worst region cost over the horizon and over all obstacles."""
    worst = np.zeros(np.shape(pose.north)[:-1])
    for obstacle in obstacles:
        (north, east), course, sog = predict_obstacle(obstacle, pose.times)
        x, y = to_obstacle_frame(pose.north - north, pose.east - east, course)
        cost = region_cost(x, y, regions, stationary=sog < regions.stationary_sog_threshold_mps)
        worst = np.maximum(worst, cost.max(axis=-1))
    return worst


def avoid_static(pose: PoseSamples, grid: OccupancyGrid | None) -> FloatArray:
    """Time integral of the occupancy value along the pose trajectory."""
    if grid is None:
        return np.zeros(np.shape(pose.north)[:-1])
    values = query(grid, pose.north, pose.east)
    return np.asarray(trapezoid(values, pose.times, axis=-1), dtype=float)


def deviation_integrals(
    candidates: Sequence[CandidateTrajectory], memory: PlannerMemory | None
) -> tuple[FloatArray, FloatArray]:
    """Integrated speed and course deviation from the previous plan over the first level."""
    count = len(candidates)
    if memory is None or count == 0:
        return np.zeros(count), np.zeros(count)
    times = candidates[0].pose.times
    window = times[times <= times[0] + memory.first_step_time + 1e-9]
    if len(window) < 2:
        return np.zeros(count), np.zeros(count)
    previous_sog = memory.trajectory.sog(window)
    previous_course = memory.trajectory.course(window)
    sog = np.vstack([candidate.desired.sog(window) for candidate in candidates])
    course = np.vstack([candidate.desired.course(window) for candidate in candidates])
    sog_deviation = trapezoid(np.abs(sog - previous_sog), window, axis=-1)
    course_deviation = trapezoid(np.abs(wrap_angles(course - previous_course)), window, axis=-1)
    return np.asarray(sog_deviation), np.asarray(course_deviation)


def transitional_costs(
    candidates: Sequence[CandidateTrajectory],
    memory: PlannerMemory | None,
    minima: tuple[float, float] | None = None,
) -> tuple[FloatArray, FloatArray]:
    """1 for candidates that deviate more than the least-deviating candidate, else 0."""
    sog_deviation, course_deviation = deviation_integrals(candidates, memory)
    if memory is None or len(candidates) == 0:
        return sog_deviation, course_deviation
    sog_min, course_min = minima or (float(sog_deviation.min()), float(course_deviation.min()))
    return (
        (sog_deviation > sog_min).astype(float),
        (course_deviation > course_min).astype(float),
    )


def evaluate(candidates: Sequence[CandidateTrajectory], context: CostContext) -> CostTable:
    """All unweighted terms and the weighted totals for ``candidates``."""
    if not candidates:
        raise PlannerError("no candidates to evaluate")
    pose = stack_poses(candidates)
    align_term = align(pose, context.desired, context.align_normalization_m)
    moving_term = avoid_moving(pose, context.obstacles, context.regions)
    static_term = avoid_static(pose, context.grid)
    tran_sog, tran_course = transitional_costs(candidates, context.memory, context.deviation_minima)
    weights = context.weights
    total = (
        weights.align * align_term
        + weights.avoid_moving * moving_term
        + weights.avoid_static * static_term
        + weights.tran_sog * tran_sog
        + weights.tran_course * tran_course
    )
    return CostTable(
        align=align_term,
        avoid_moving=moving_term,
        avoid_static=static_term,
        tran_sog=tran_sog,
        tran_course=tran_course,
        total=total,
    )


def objective(candidate: CandidateTrajectory, context: CostContext) -> float:
    """Weighted objective of a single candidate.

    Without ``context.deviation_minima`` the candidate is its own reference,
    so both transitional terms are 0.
    """
    return float(evaluate([candidate], context).total[0])


def select(candidates: Sequence[CandidateTrajectory], context: CostContext) -> Selection:
    """Minimum-cost candidate; ties go to the smaller transitional sum, then the lower index."""
    table = evaluate(candidates, context)
    indices = np.arange(len(candidates))
    order = np.lexsort((indices, table.tran_sog + table.tran_course, table.total))
    best = int(order[0])
    if not np.isfinite(table.total[best]):
        raise PlannerError("objective is not finite", candidate=best)
    return Selection(
        candidate=candidates[best],
        index=best,
        breakdown=table.breakdown(best),
        table=table,
    )
