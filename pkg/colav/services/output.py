"""Run artifacts: per-step CSV log and the JSON summary."""
from __future__ import annotations

import csv
from pathlib import Path

import structlog

from ..angles import wrap_angle
from ..models import RunLog
from ..schemas import IterationSummary, Metrics, RunSummary, ScenarioDocument

logger = structlog.get_logger(__name__)

BASE_COLUMNS = (
    "time_s",
    "north_m",
    "east_m",
    "sog_mps",
    "course_rad",
    "desired_sog_mps",
    "desired_course_rad",
)


def csv_columns(log: RunLog) -> list[str]:
    return [*BASE_COLUMNS, *(f"distance_{obstacle_id}_m" for obstacle_id in log.obstacle_ids)]


def _number(value: float) -> str:
    return f"{value:.6f}"


def write_run_csv(log: RunLog, path: Path) -> Path:
    """One row per plant step; distances are to the true obstacle positions."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(csv_columns(log))
        for record in log.states:
            row = [
                record.time,
                record.north,
                record.east,
                record.sog,
                record.course,
                record.desired_sog,
                wrap_angle(record.desired_course),
            ]
            row.extend(record.obstacle_distances[obstacle_id] for obstacle_id in log.obstacle_ids)
            writer.writerow([_number(value) for value in row])
    logger.info("output.csv_written", path=str(path), rows=len(log.states))
    return path


def build_summary(log: RunLog, scenario: ScenarioDocument, metrics: Metrics) -> RunSummary:
    return RunSummary(
        scenario=scenario.name,
        seed=log.seed,
        duration_s=scenario.duration_s,
        metrics=metrics,
        iterations=[
            IterationSummary(
                time_s=record.time,
                candidate_index=record.candidate_index,
                leaf_path=list(record.leaf_path),
                candidate_count=record.candidate_count,
                terms=record.breakdown.as_dict(),
                wall_time_s=record.wall_time,
            )
            for record in log.iterations
        ],
    )


def write_summary(summary: RunSummary, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(summary.model_dump_json(indent=2), encoding="utf-8")
    logger.info("output.summary_written", path=str(path), iterations=len(summary.iterations))
    return path
