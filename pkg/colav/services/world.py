"""World model: padded occupancy grid for static obstacles, moving-obstacle estimates."""
from __future__ import annotations

import json
import math
from collections.abc import Sequence
from pathlib import Path

import numpy as np
import shapely
import structlog
from numpy.typing import ArrayLike
from scipy.ndimage import distance_transform_edt

from ..errors import InvalidObstacleError
from ..models import FloatArray, GridBounds, ObstacleEstimate, OccupancyGrid, StaticObstacle
from ..schemas import MovingObstacleSpec, StaticObstacleSpec

logger = structlog.get_logger(__name__)

OCCUPIED = 100.0


def static_obstacle_from(spec: StaticObstacleSpec) -> StaticObstacle:
    return StaticObstacle(
        name=spec.name,
        vertices=tuple((float(north), float(east)) for north, east in spec.vertices_m),
        padding=spec.padding_m,
    )


def obstacle_polygon(obstacle: StaticObstacle) -> shapely.Polygon:
    """Shapely polygon in (north, east); rejects degenerate or self-intersecting input."""
    if len(obstacle.vertices) < 3:
        raise InvalidObstacleError(
            "polygon needs at least three vertices", obstacle=obstacle.name
        )
    polygon = shapely.Polygon(obstacle.vertices)
    if not polygon.is_valid:
        raise InvalidObstacleError(
            "polygon is self-intersecting or otherwise invalid",
            obstacle=obstacle.name,
            reason=shapely.is_valid_reason(polygon),
        )
    if polygon.area <= 0.0:
        raise InvalidObstacleError("polygon has zero area", obstacle=obstacle.name)
    return polygon


def grid_bounds_for(obstacles: Sequence[StaticObstacle], margin: float) -> GridBounds:
    """Bounding box of all padded obstacles, grown by ``margin``."""
    if not obstacles:
        raise ValueError("no obstacles to bound")
    boxes = [obstacle_polygon(obstacle).buffer(obstacle.padding).bounds for obstacle in obstacles]
    return GridBounds(
        north_min=min(box[0] for box in boxes) - margin,
        north_max=max(box[2] for box in boxes) + margin,
        east_min=min(box[1] for box in boxes) - margin,
        east_max=max(box[3] for box in boxes) + margin,
    )


def rasterize_and_pad(
    obstacles: Sequence[StaticObstacle], resolution: float, bounds: GridBounds
) -> OccupancyGrid:
    """Rasterize polygons at ``resolution`` and add a linearly decaying padding around each.

    Interior cells get 100; a cell at distance ``d`` from an obstacle gets
    ``100 * (1 - d / padding)`` when ``d < padding``; overlapping obstacles
    combine with ``max``. Every obstacle marks at least the cell holding a
    point of its interior.
    """
    if resolution <= 0:
        raise ValueError(f"resolution must be positive, got {resolution}")
    rows = max(1, math.ceil((bounds.north_max - bounds.north_min) / resolution))
    cols = max(1, math.ceil((bounds.east_max - bounds.east_min) / resolution))
    north_centers = bounds.north_min + (np.arange(rows) + 0.5) * resolution
    east_centers = bounds.east_min + (np.arange(cols) + 0.5) * resolution
    north_grid, east_grid = np.meshgrid(north_centers, east_centers, indexing="ij")

    values = np.zeros((rows, cols))
    for obstacle in obstacles:
        polygon = obstacle_polygon(obstacle)
        inside = shapely.contains_xy(polygon, north_grid, east_grid)
        if not inside.any():
            anchor = polygon.representative_point()
            row = int((anchor.x - bounds.north_min) // resolution)
            col = int((anchor.y - bounds.east_min) // resolution)
            if 0 <= row < rows and 0 <= col < cols:
                inside[row, col] = True
        layer = np.where(inside, OCCUPIED, 0.0)
        if obstacle.padding > 0 and inside.any():
            distance = distance_transform_edt(~inside, sampling=resolution)
            padded = OCCUPIED * (1.0 - distance / obstacle.padding)
            layer = np.where(inside, OCCUPIED, np.where(distance < obstacle.padding, padded, 0.0))
        values = np.maximum(values, layer)
        logger.debug(
            "world.obstacle_rasterized",
            obstacle=obstacle.name,
            occupied_cells=int(inside.sum()),
            padding_m=obstacle.padding,
        )

    return OccupancyGrid(
        origin_north=bounds.north_min,
        origin_east=bounds.east_min,
        resolution=resolution,
        values=np.clip(values, 0.0, OCCUPIED),
    )


def build_grid(
    obstacles: Sequence[StaticObstacle], resolution: float, margin: float
) -> OccupancyGrid | None:
    if not obstacles:
        return None
    grid = rasterize_and_pad(obstacles, resolution, grid_bounds_for(obstacles, margin))
    logger.info(
        "world.grid_built",
        obstacles=len(obstacles),
        rows=grid.shape[0],
        cols=grid.shape[1],
        resolution_m=resolution,
    )
    return grid


def query(grid: OccupancyGrid, north: ArrayLike, east: ArrayLike) -> FloatArray:
    """Value of the cell containing each point; 0 outside the grid."""
    north_array = np.asarray(north, dtype=float)
    east_array = np.asarray(east, dtype=float)
    rows, cols = grid.shape
    row = np.floor((north_array - grid.origin_north) / grid.resolution).astype(int)
    col = np.floor((east_array - grid.origin_east) / grid.resolution).astype(int)
    valid = (row >= 0) & (row < rows) & (col >= 0) & (col < cols)
    result = np.zeros(np.broadcast(north_array, east_array).shape)
    result[valid] = grid.values[row[valid], col[valid]]
    return result


def predict_obstacle(
    estimate: ObstacleEstimate, t: ArrayLike
) -> tuple[tuple[FloatArray, FloatArray], float, float]:
    """Constant-velocity extrapolation: ((north, east), course, sog) at times ``t``."""
    elapsed = np.asarray(t, dtype=float) - estimate.timestamp
    north = estimate.north + estimate.velocity_north * elapsed
    east = estimate.east + estimate.velocity_east * elapsed
    return (north, east), estimate.course, estimate.sog


def true_obstacle_state(spec: MovingObstacleSpec, t: float) -> ObstacleEstimate:
    """Ground truth of a scripted constant-velocity obstacle at time ``t``."""
    course = math.radians(spec.course_deg)
    velocity_north = spec.sog_mps * math.cos(course)
    velocity_east = spec.sog_mps * math.sin(course)
    return ObstacleEstimate(
        id=spec.id,
        timestamp=t,
        north=spec.north_m + velocity_north * t,
        east=spec.east_m + velocity_east * t,
        velocity_north=velocity_north,
        velocity_east=velocity_east,
    )


def inject_noise(
    truth: ObstacleEstimate,
    position_sigma: float,
    velocity_sigma: float,
    rng: np.random.Generator,
) -> ObstacleEstimate:
    """Zero-mean Gaussian perturbation of position and velocity."""
    d_north, d_east = rng.normal(0.0, position_sigma, size=2)
    dv_north, dv_east = rng.normal(0.0, velocity_sigma, size=2)
    return ObstacleEstimate(
        id=truth.id,
        timestamp=truth.timestamp,
        north=truth.north + float(d_north),
        east=truth.east + float(d_east),
        velocity_north=truth.velocity_north + float(dv_north),
        velocity_east=truth.velocity_east + float(dv_east),
    )


def export_pgm(grid: OccupancyGrid, path: Path) -> Path:
    """Write the grid as a binary PGM (north up, white free) plus a georeferencing sidecar."""
    image = np.round(255.0 * (OCCUPIED - grid.values) / OCCUPIED).astype(np.uint8)[::-1]
    rows, cols = grid.shape
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("wb") as handle:
        handle.write(f"P5\n{cols} {rows}\n255\n".encode("ascii"))
        handle.write(image.tobytes())
    sidecar = path.with_suffix(".json")
    sidecar.write_text(
        json.dumps(
            {
                "origin_north_m": grid.origin_north,
                "origin_east_m": grid.origin_east,
                "resolution_m": grid.resolution,
                "rows": rows,
                "cols": cols,
                "first_row": "north_max",
            },
            indent=2,
        ),
        encoding="utf-8",
    )
    logger.info("world.grid_exported", path=str(path), rows=rows, cols=cols)
    return path
