"""Trajectory prediction tree: expands maneuvers level by level into candidate trajectories."""
from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import structlog
from scipy.interpolate import PPoly

from ..models import (
    AccelerationGrid,
    AccelerationLimits,
    CandidateTrajectory,
    FloatArray,
    Maneuver,
    ManeuverNode,
    PoseSamples,
    VelocityTrajectory,
    VesselState,
)
from ..schemas import GuidanceConfig, PlantConfig, PrimitiveConfig, TreeConfig
from .guidance import DesiredTrajectory
from .primitives import (
    apply_guidance,
    course_profile,
    guidance_acceleration,
    integrate_course,
    integrate_speed,
    sample_accelerations,
    shift,
    speed_profile,
)
from .vessel import feedback_correct, limits_at_sog

logger = structlog.get_logger(__name__)


def generate_maneuvers(
    node: ManeuverNode,
    config: PrimitiveConfig,
    limits: AccelerationLimits,
    guidance: tuple[float, float] | None = None,
) -> list[Maneuver]:
    """All ``n_sog * n_course`` sub-trajectories from ``node``, ordered speed-major."""
    grid = AccelerationGrid(
        sog=sample_accelerations(limits, config.n_sog, "sog"),
        course=sample_accelerations(limits, config.n_course, "course"),
    )
    if guidance is not None:
        grid = apply_guidance(grid, guidance, limits)

    horizon = config.step_time_s
    speeds = [
        shift(integrate_speed(node.sog, speed_profile(amplitude, config), horizon), node.time)
        for amplitude in grid.sog
    ]
    courses = [
        shift(
            integrate_course(
                node.course, node.course_rate, course_profile(amplitude, config), config, horizon
            ),
            node.time,
        )
        for amplitude in grid.course
    ]
    return [
        Maneuver(
            start=node.time,
            duration=horizon,
            sog_fn=speeds[i],
            course_fn=courses[j],
            sog_index=i,
            course_index=j,
            sog_amplitude=grid.sog[i],
            course_amplitude=grid.course[j],
            guided=i == grid.guided_sog or j == grid.guided_course,
        )
        for i, j in grid.pairs()
    ]


def _sample_grid(start: float, horizon: float, step: float) -> tuple[int, FloatArray]:
    count = max(1, math.ceil(horizon / step - 1e-9))
    return count, np.linspace(start, start + horizon, 2 * count + 1)


def _integrate_positions(
    sog: FloatArray, course: FloatArray, h: float, north: float, east: float
) -> tuple[FloatArray, FloatArray]:
    """RK4 on the kinematics given speed/course on a half-step grid (last axis ``2K+1``).

    The velocity depends on time only, so the two midpoint stages coincide.
    """
    velocity_north = sog * np.cos(course)
    velocity_east = sog * np.sin(course)

    def _advance(velocity: FloatArray, origin: float) -> FloatArray:
        k1 = velocity[..., 0:-1:2]
        k2 = velocity[..., 1::2]
        k4 = velocity[..., 2::2]
        increments = h / 6.0 * (k1 + 4.0 * k2 + k4)
        zeros = np.zeros(increments.shape[:-1] + (1,))
        return origin + np.concatenate([zeros, np.cumsum(increments, axis=-1)], axis=-1)

    return _advance(velocity_north, north), _advance(velocity_east, east)


def predict_poses(
    trajectories: Sequence[VelocityTrajectory], north: float, east: float
) -> PoseSamples:
    """Integrate the kinematics of every trajectory from a common start pose.

    All trajectories must share ``start``, ``horizon`` and ``sample_step``;
    the result holds ``(C, K)`` arrays.
    """
    if not trajectories:
        raise ValueError("no trajectories to integrate")
    first = trajectories[0]
    count, half_grid = _sample_grid(first.start, first.horizon, first.sample_step)
    sog = np.vstack([trajectory.sog(half_grid) for trajectory in trajectories])
    course = np.vstack([trajectory.course(half_grid) for trajectory in trajectories])
    north_samples, east_samples = _integrate_positions(
        sog, course, first.horizon / count, north, east
    )
    return PoseSamples(
        times=half_grid[::2],
        north=north_samples,
        east=east_samples,
        course=course[:, ::2],
    )


def predict_pose(trajectory: VelocityTrajectory, north: float, east: float) -> PoseSamples:
    """Pose samples of one (typically feedback-corrected) velocity trajectory."""
    return predict_poses([trajectory], north, east).row(0)


def concatenate(functions: Sequence[PPoly]) -> PPoly:
    """Join consecutive piecewise polynomials of equal degree into one."""
    breaks = [functions[0].x] + [function.x[1:] for function in functions[1:]]
    return PPoly(np.hstack([function.c for function in functions]), np.concatenate(breaks))


@dataclass(frozen=True, slots=True)
class _Branch:
    node: ManeuverNode | None
    maneuvers: tuple[Maneuver, ...]


def _child_node(parent: ManeuverNode, maneuver: Maneuver, sample_step: float) -> ManeuverNode:
    count, half_grid = _sample_grid(maneuver.start, maneuver.duration, sample_step)
    course_samples = maneuver.course_fn(half_grid)
    north, east = _integrate_positions(
        np.maximum(maneuver.sog_fn(half_grid), 0.0),
        course_samples,
        maneuver.duration / count,
        parent.north,
        parent.east,
    )
    end = maneuver.end
    return ManeuverNode(
        time=end,
        north=float(north[-1]),
        east=float(east[-1]),
        sog=max(float(maneuver.sog_fn(end)), 0.0),
        course=float(maneuver.course_fn(end)),
        course_rate=float(maneuver.course_fn.derivative()(end)),
    )


def root_node(state: VesselState, current: VelocityTrajectory | None) -> ManeuverNode:
    """Tree root: the vessel pose with the velocity the controllers are currently asked for."""
    if current is None:
        sog, course, course_rate = state.sog, state.course, state.course_rate
    else:
        sog = float(current.sog(state.time))
        course = float(current.course(state.time))
        course_rate = float(current.course_rate(state.time))
    return ManeuverNode(
        time=state.time,
        north=state.north,
        east=state.east,
        sog=sog,
        course=course,
        course_rate=course_rate,
    )


def build_tree(
    state: VesselState,
    current: VelocityTrajectory | None,
    config: TreeConfig,
    plant: PlantConfig,
    desired: DesiredTrajectory | None = None,
    guidance: GuidanceConfig | None = None,
) -> list[CandidateTrajectory]:
    """Expand the full tree from ``state`` and return one candidate per root-to-leaf path.

    ``current`` is the desired velocity trajectory from the previous
    iteration; the root continues it so consecutive plans join smoothly.
    Level-1 samples are shifted toward line-of-sight guidance when a desired
    trajectory and an enabled guidance config are given. Candidates are
    ordered by their level-1 maneuver first.
    """
    root = root_node(state, current)
    root_limits = limits_at_sog(root.sog, plant)
    first_level = config.level(0)

    root_guidance: tuple[float, float] | None = None
    if desired is not None and guidance is not None and guidance.enabled:
        root_guidance = guidance_acceleration(
            state,
            desired,
            first_level,
            root_limits,
            guidance.lookahead_m,
            reference_sog=root.sog,
            reference_course=root.course,
            reference_rate=root.course_rate,
        )

    branches = [_Branch(node=root, maneuvers=())]
    for level in range(config.depth):
        level_config = config.level(level)
        last_level = level == config.depth - 1
        expanded: list[_Branch] = []
        for branch in branches:
            node = branch.node
            assert node is not None
            limits = root_limits if level == 0 else limits_at_sog(node.sog, plant)
            maneuvers = generate_maneuvers(
                node, level_config, limits, root_guidance if level == 0 else None
            )
            for maneuver in maneuvers:
                child = None if last_level else _child_node(node, maneuver, config.sample_step_s)
                expanded.append(_Branch(node=child, maneuvers=branch.maneuvers + (maneuver,)))
        branches = expanded

    desired_trajectories = [
        VelocityTrajectory(
            sog_fn=concatenate([maneuver.sog_fn for maneuver in branch.maneuvers]),
            course_fn=concatenate([maneuver.course_fn for maneuver in branch.maneuvers]),
            start=state.time,
            horizon=config.horizon_s,
            sample_step=config.sample_step_s,
        )
        for branch in branches
    ]
    corrected = [feedback_correct(trajectory, state, plant) for trajectory in desired_trajectories]
    poses = predict_poses(corrected, state.north, state.east)

    candidates = [
        CandidateTrajectory(
            index=index,
            desired=desired_trajectories[index],
            corrected=corrected[index],
            pose=poses.row(index),
            leaf_path=tuple((m.sog_index, m.course_index) for m in branch.maneuvers),
            amplitudes=tuple((m.sog_amplitude, m.course_amplitude) for m in branch.maneuvers),
            guided=branch.maneuvers[0].guided,
        )
        for index, branch in enumerate(branches)
    ]
    logger.debug(
        "tree.built",
        time=state.time,
        candidates=len(candidates),
        horizon_s=config.horizon_s,
        guided=root_guidance is not None,
    )
    return candidates
