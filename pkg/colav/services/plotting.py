"""North-up SVG plot of a run: tracks, obstacles, padding contours and 60 s time marks."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import structlog  # noqa: E402
from matplotlib.patches import Polygon as MplPolygon  # noqa: E402

from ..models import OccupancyGrid, RunLog  # noqa: E402
from ..schemas import ScenarioDocument  # noqa: E402
from .guidance import DesiredTrajectory  # noqa: E402
from .world import true_obstacle_state  # noqa: E402

logger = structlog.get_logger(__name__)

MARK_PERIOD_S = 60.0


def _marks(times: np.ndarray) -> np.ndarray:
    """Indices of the samples closest to each multiple of the mark period."""
    if times.size == 0:
        return np.array([], dtype=int)
    targets = np.arange(0.0, times[-1] + 1e-9, MARK_PERIOD_S)
    return np.unique(np.searchsorted(times, targets - 1e-9).clip(0, times.size - 1))


def plot_run(
    log: RunLog, scenario: ScenarioDocument, grid: OccupancyGrid | None, path: Path
) -> Path:
    """Render the run with east on the horizontal axis and north up."""
    times = np.array([record.time for record in log.states])
    north = np.array([record.north for record in log.states])
    east = np.array([record.east for record in log.states])

    fig, ax = plt.subplots(figsize=(7.0, 9.0))
    for spec in scenario.static_obstacles:
        vertices = np.array([(e, n) for n, e in spec.vertices_m])
        ax.add_patch(MplPolygon(vertices, closed=True, facecolor="gold", edgecolor="darkgoldenrod"))
    if grid is not None:
        rows, cols = grid.shape
        north_centers = grid.origin_north + (np.arange(rows) + 0.5) * grid.resolution
        east_centers = grid.origin_east + (np.arange(cols) + 0.5) * grid.resolution
        if grid.values.max() > 0:
            ax.contour(
                east_centers,
                north_centers,
                grid.values,
                levels=[0.5],
                colors="darkgreen",
                linewidths=0.8,
            )

    desired = DesiredTrajectory.from_spec(scenario.desired_trajectory)
    if times.size:
        desired_north, desired_east = desired.position(times)
        ax.plot(desired_east, desired_north, "k--", linewidth=0.8, label="desired")
    ax.plot(east, north, color="tab:blue", linewidth=1.5, label="own-ship")

    marks = _marks(times)
    ax.plot(east[marks], north[marks], "*", color="tab:blue", markersize=7)
    for index in marks:
        ax.annotate(
            f"{times[index]:.0f}",
            (east[index], north[index]),
            textcoords="offset points",
            xytext=(6, 0),
            fontsize=7,
        )

    for spec in scenario.moving_obstacles:
        states = [true_obstacle_state(spec, float(t)) for t in times]
        obstacle_north = np.array([state.north for state in states])
        obstacle_east = np.array([state.east for state in states])
        ax.plot(obstacle_east, obstacle_north, color="tab:red", linewidth=1.0, label=spec.id)
        if marks.size:
            ax.plot(
                obstacle_east[marks], obstacle_north[marks], "*", color="tab:red", markersize=6
            )
        if times.size:
            ax.plot(obstacle_east[0], obstacle_north[0], "o", color="tab:red", markersize=5)

    ax.set_xlabel("east [m]")
    ax.set_ylabel("north [m]")
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_title(scenario.name)
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, linewidth=0.3)

    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", bbox_inches="tight", metadata={"Date": None})
    plt.close(fig)
    logger.info("output.plot_written", path=str(path))
    return path
