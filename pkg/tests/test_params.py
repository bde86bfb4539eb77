"""Tests covering parameter loading, overrides and validation reports."""
from __future__ import annotations

import json
from pathlib import Path

import pytest

from colav.config import AppSettings
from colav.dependencies import get_params_service
from colav.errors import ConfigError
from colav.services.params import ParamsService, apply_overrides, parse_override


def _write_params(tmp_path: Path, **overrides: object) -> Path:
    document = apply_overrides(get_params_service().read_document(), overrides)
    path = tmp_path / "params.json"
    path.write_text(json.dumps(document), encoding="utf-8")
    return path


def test_default_parameters_load() -> None:
    params = get_params_service().load()
    assert params.planner.tree.candidate_count == 225
    assert params.planner.tree.horizon_s == 80.0
    assert params.planner.weights.avoid_moving == 6000.0
    assert params.plant.step_s == 0.1
    assert params.planner.regions.starboard_m == (125.0, 175.0, 225.0)


def test_overrides_replace_dotted_keys() -> None:
    params = get_params_service().load(
        overrides={"planner.weights.align": 3.0, "planner.guidance.enabled": False}
    )
    assert params.planner.weights.align == 3.0
    assert params.planner.guidance.enabled is False
    assert params.planner.weights.avoid_static == 30.0


def test_override_through_scalar_is_rejected() -> None:
    with pytest.raises(ConfigError):
        apply_overrides({"planner": {"period_s": 5.0}}, {"planner.period_s.value": 1.0})


def test_parse_override() -> None:
    assert parse_override("planner.weights.align=2.5") == ("planner.weights.align", 2.5)
    assert parse_override("planner.tree.n_sog=[3,1,1]") == ("planner.tree.n_sog", [3, 1, 1])
    assert parse_override("name=head-on") == ("name", "head-on")
    with pytest.raises(ConfigError):
        parse_override("planner.weights.align")


def test_invalid_override_reports_violations() -> None:
    with pytest.raises(ConfigError) as excinfo:
        get_params_service().load(overrides={"planner.weights.align": -1.0})
    violations = excinfo.value.detail["violations"]
    assert any(message.startswith("planner.weights.align") for message in violations)


def test_validate_accepts_defaults() -> None:
    report = get_params_service().validate()
    assert report.valid
    assert report.violations == []


def test_validate_reports_ramp_constraint(tmp_path: Path) -> None:
    path = _write_params(
        tmp_path, **{"planner.tree.ramp_time_s": 2.0, "planner.tree.course_maneuver_time_s": 5.0}
    )
    report = get_params_service().validate(path)
    assert not report.valid
    assert any("ramp_time_s" in message for message in report.violations)


def test_validate_reports_negative_weight_and_never_writes(tmp_path: Path) -> None:
    path = _write_params(tmp_path, **{"planner.weights.tran_sog": -5.0})
    before = path.read_bytes()
    report = get_params_service().validate(path)
    assert not report.valid
    assert any(message.startswith("planner.weights.tran_sog") for message in report.violations)
    assert path.read_bytes() == before


def test_validate_reports_mismatched_level_lists(tmp_path: Path) -> None:
    path = _write_params(tmp_path, **{"planner.tree.n_sog": [5, 1]})
    report = get_params_service().validate(path)
    assert any("n_sog" in message for message in report.violations)


def test_validate_unreadable_file(tmp_path: Path) -> None:
    report = get_params_service().validate(tmp_path / "missing.json")
    assert not report.valid
    assert report.violations == ["parameter file cannot be read"]


def test_validate_includes_scenario_violations(tmp_path: Path) -> None:
    scenario = tmp_path / "scenario.json"
    scenario.write_text('{"name": "broken", "duration_s": 10}', encoding="utf-8")
    report = get_params_service().validate(scenario=str(scenario))
    assert not report.valid
    assert all(message.startswith("scenario.") for message in report.violations)

    builtin = get_params_service().validate(scenario="scenario-2")
    assert builtin.valid


def test_settings_point_at_packaged_defaults(tmp_path: Path) -> None:
    path = _write_params(tmp_path, **{"planner.period_s": 2.5})
    service = ParamsService(AppSettings(default_params_path=path))
    assert service.load().planner.period_s == 2.5
