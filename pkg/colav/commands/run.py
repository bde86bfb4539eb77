"""``colav run``: simulate one scenario and write its artifacts."""
from __future__ import annotations

import time
from pathlib import Path

import structlog

from ..config import AppSettings
from ..dependencies import get_params_service
from ..errors import ConfigError
from ..schemas import RunSpec, RunSummary
from ..services.output import build_summary, write_run_csv, write_summary
from ..services.plotting import plot_run
from ..services.scenarios import resolve_scenario
from ..services.simulation import compute_metrics, run_closed_loop
from ..services.world import build_grid, export_pgm, static_obstacle_from

logger = structlog.get_logger(__name__)

CSV_NAME = "run.csv"
SUMMARY_NAME = "metrics.json"
PLOT_NAME = "scenario.svg"
GRID_NAME = "grid.pgm"


def _prepare_output(output_dir: Path) -> None:
    try:
        output_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(
            "output directory cannot be created", path=str(output_dir), reason=str(exc)
        ) from exc


def run(settings: AppSettings, spec: RunSpec) -> RunSummary:
    """Load parameters and scenario, simulate, then write CSV, summary and optional extras."""
    started = time.perf_counter()
    params = get_params_service(settings).load(spec.params_path, spec.overrides)
    scenario = resolve_scenario(spec.scenario)
    seed = spec.seed if spec.seed is not None else scenario.seed
    _prepare_output(spec.output_dir)

    log = run_closed_loop(scenario, params.planner, params.plant, params.world, seed=seed)
    metrics = compute_metrics(log, scenario, params.planner.regions)
    summary = build_summary(log, scenario, metrics)
    write_run_csv(log, spec.output_dir / CSV_NAME)
    write_summary(summary, spec.output_dir / SUMMARY_NAME)

    if spec.plot or spec.export_grid:
        grid = build_grid(
            [static_obstacle_from(item) for item in scenario.static_obstacles],
            params.world.grid_resolution_m,
            params.world.grid_margin_m,
        )
        if spec.plot:
            plot_run(log, scenario, grid, spec.output_dir / PLOT_NAME)
        if spec.export_grid:
            if grid is None:
                logger.warning("run.grid_export_skipped", reason="scenario has no static obstacles")
            else:
                export_pgm(grid, spec.output_dir / GRID_NAME)

    logger.info(
        "run.complete",
        scenario=scenario.name,
        seed=seed,
        output_dir=str(spec.output_dir),
        collision_entries=metrics.region_entries.collision,
        wall_time_s=round(time.perf_counter() - started, 3),
    )
    return summary
