"""One planner iteration: build the tree, score every candidate, remember the winner."""
from __future__ import annotations

import time
from collections.abc import Sequence
from dataclasses import dataclass

import structlog

from ..errors import PlannerError
from ..models import (
    CandidateTrajectory,
    ObstacleEstimate,
    OccupancyGrid,
    PlannerMemory,
    Selection,
    VesselState,
)
from ..schemas import PlannerConfig, PlantConfig
from .cost import CostContext, select
from .guidance import DesiredTrajectory
from .tree import build_tree

logger = structlog.get_logger(__name__)


@dataclass(frozen=True, slots=True)
class PlanResult:
    selection: Selection
    candidates: tuple[CandidateTrajectory, ...]
    wall_time: float


class Planner:
    """Receding-horizon planner; keeps the last selected trajectory between iterations."""

    def __init__(self, config: PlannerConfig, plant: PlantConfig) -> None:
        self.config = config
        self.plant = plant
        self.memory: PlannerMemory | None = None

    def reset(self) -> None:
        self.memory = None

    def context(
        self,
        desired: DesiredTrajectory,
        grid: OccupancyGrid | None,
        obstacles: Sequence[ObstacleEstimate],
    ) -> CostContext:
        return CostContext(
            weights=self.config.weights,
            regions=self.config.regions,
            desired=desired,
            grid=grid,
            obstacles=tuple(obstacles),
            memory=self.memory,
            align_normalization_m=self.config.align.normalization_m,
        )

    def plan(
        self,
        state: VesselState,
        desired: DesiredTrajectory,
        grid: OccupancyGrid | None = None,
        obstacles: Sequence[ObstacleEstimate] = (),
    ) -> PlanResult:
        started = time.perf_counter()
        current = self.memory.trajectory if self.memory is not None else None
        candidates = build_tree(
            state, current, self.config.tree, self.plant, desired, self.config.guidance
        )
        if not candidates:
            raise PlannerError("trajectory tree produced no candidates", time=state.time)
        selection = select(candidates, self.context(desired, grid, obstacles))
        self.memory = PlannerMemory(
            trajectory=selection.candidate.desired,
            start_time=state.time,
            first_step_time=self.config.tree.step_times_s[0],
        )
        wall_time = time.perf_counter() - started
        logger.debug(
            "planner.iteration",
            time=state.time,
            candidate=selection.index,
            leaf_path=selection.candidate.leaf_path,
            total=selection.breakdown.total,
            wall_time_s=round(wall_time, 4),
        )
        return PlanResult(selection=selection, candidates=tuple(candidates), wall_time=wall_time)
