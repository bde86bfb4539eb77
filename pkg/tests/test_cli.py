"""Tests covering the command-line entry point and run artifacts."""
from __future__ import annotations

import csv
import json
from pathlib import Path

import pytest

from colav.main import main
from colav.services.output import BASE_COLUMNS


def _scenario_file(tmp_path: Path, duration: float = 20.0, moving: bool = True) -> Path:
    document: dict[str, object] = {
        "name": "short-crossing",
        "duration_s": duration,
        "seed": 5,
        "ownship": {"sog_mps": 5.0},
        "desired_trajectory": {
            "speed_mps": 5.0,
            "waypoints": [
                {"time_s": 0.0, "north_m": 0.0, "east_m": 0.0},
                {"time_s": 500.0, "north_m": 2500.0, "east_m": 0.0},
            ],
        },
        "static_obstacles": [
            {
                "name": "rock",
                "vertices_m": [[300.0, 150.0], [300.0, 250.0], [400.0, 250.0], [400.0, 150.0]],
                "padding_m": 50.0,
            }
        ],
        "moving_obstacles": (
            [{"id": "osd1", "north_m": 600.0, "east_m": 400.0, "sog_mps": 2.5, "course_deg": 270.0}]
            if moving
            else []
        ),
    }
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(document), encoding="utf-8")
    return path


def _error(stderr: str) -> dict[str, object]:
    envelope: dict[str, object] = json.loads(stderr.strip().splitlines()[-1])
    return envelope


def test_run_writes_artifacts(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    out = tmp_path / "out"
    scenario = str(_scenario_file(tmp_path))
    code = main(["run", "--scenario", scenario, "--out", str(out), "--plot", "--export-grid"])
    assert code == 0
    status = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert status["status"] == "ok"
    assert status["seed"] == 5
    for name in ("run.csv", "metrics.json", "scenario.svg", "grid.pgm", "grid.json"):
        assert (out / name).exists()

    with (out / "run.csv").open(encoding="utf-8") as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == [*BASE_COLUMNS, "distance_osd1_m"]
    assert len(rows) == 1 + 201
    assert rows[1][0] == "0.000000"

    summary = json.loads((out / "metrics.json").read_text(encoding="utf-8"))
    assert summary["scenario"] == "short-crossing"
    assert len(summary["iterations"]) == 4
    assert summary["metrics"]["moving_obstacles"][0]["id"] == "osd1"
    assert set(summary["iterations"][0]["terms"]) >= {"align", "avoid_moving", "total"}


def test_seeded_runs_write_identical_csv(tmp_path: Path) -> None:
    scenario = str(_scenario_file(tmp_path))
    first, second = tmp_path / "first", tmp_path / "second"
    assert main(["run", "--scenario", scenario, "--out", str(first), "--seed", "9"]) == 0
    assert main(["run", "--scenario", scenario, "--out", str(second), "--seed", "9"]) == 0
    assert (first / "run.csv").read_bytes() == (second / "run.csv").read_bytes()


def test_overrides_reach_the_run(tmp_path: Path) -> None:
    out = tmp_path / "out"
    scenario = str(_scenario_file(tmp_path, duration=10.0, moving=False))
    code = main(
        ["run", "--scenario", scenario, "--out", str(out), "--set", "planner.period_s=2.5"]
    )
    assert code == 0
    summary = json.loads((out / "metrics.json").read_text(encoding="utf-8"))
    planned = [item["time_s"] for item in summary["iterations"]]
    assert planned == pytest.approx([0.0, 2.5, 5.0, 7.5])
    assert summary["metrics"]["moving_obstacles"] == []


def test_missing_scenario_file_exits_with_config_error(
    tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    missing = str(tmp_path / "nowhere.json")
    assert main(["run", "--scenario", missing, "--out", str(tmp_path / "out")]) == 2
    envelope = _error(capsys.readouterr().err)
    assert envelope["status"] == "error"
    error = envelope["error"]
    assert isinstance(error, dict)
    assert error["type"] == "ConfigError"
    assert error["scenario"] == missing


def test_invalid_override_exits_with_config_error(
    tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    out = str(tmp_path / "out")
    code = main(
        ["run", "--scenario", "scenario-1", "--out", out, "--set", "planner.tree.ramp_time_s=3"]
    )
    assert code == 2
    error = _error(capsys.readouterr().err)["error"]
    assert isinstance(error, dict)
    assert any("ramp_time_s" in message for message in error["violations"])


def test_validate_command(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["validate"]) == 0
    report = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert report == {"valid": True, "violations": []}

    broken = tmp_path / "params.json"
    broken.write_text('{"planner": {"tree": {"depth": 0}}}', encoding="utf-8")
    assert main(["validate", "--params", str(broken)]) == 2
    report = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert report["valid"] is False
    assert report["violations"]


def test_scenarios_command_lists_builtins(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["scenarios"]) == 0
    names = [line.split("\t")[0] for line in capsys.readouterr().out.splitlines()]
    assert names == ["scenario-1", "scenario-2", "scenario-3", "scenario-4"]


def test_unwritable_output_directory(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    blocker = tmp_path / "file"
    blocker.write_text("", encoding="utf-8")
    code = main(["run", "--scenario", "scenario-1", "--out", str(blocker / "out")])
    assert code == 2
    error = _error(capsys.readouterr().err)["error"]
    assert isinstance(error, dict)
    assert error["message"] == "output directory cannot be created"


def test_seeded_run_matches_golden_csv(tmp_path: Path) -> None:
    document = {
        "name": "golden",
        "duration_s": 0.2,
        "ownship": {"sog_mps": 5.0},
        "desired_trajectory": {
            "speed_mps": 5.0,
            "waypoints": [
                {"time_s": 0.0, "north_m": 0.0, "east_m": 0.0},
                {"time_s": 200.0, "north_m": 1000.0, "east_m": 0.0},
            ],
        },
        "moving_obstacles": [
            {"id": "buoy", "north_m": 3000.0, "east_m": 4000.0, "sog_mps": 0.0, "course_deg": 0.0}
        ],
    }
    scenario = tmp_path / "golden.json"
    scenario.write_text(json.dumps(document), encoding="utf-8")
    out = tmp_path / "out"
    assert main(["run", "--scenario", str(scenario), "--out", str(out), "--seed", "11"]) == 0
    golden = Path(__file__).parent / "data" / "golden_run.csv"
    assert (out / "run.csv").read_text(encoding="utf-8") == golden.read_text(encoding="utf-8")
