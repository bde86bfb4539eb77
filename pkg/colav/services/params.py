"""Parameter files: loading, dotted-key overrides and validation."""
from __future__ import annotations

import copy
import json
from collections.abc import Mapping
from pathlib import Path
from typing import Any

import structlog
from pydantic import ValidationError

from ..config import AppSettings
from ..errors import ConfigError, validation_messages
from ..schemas import ParameterSet, ValidationReport
from .scenarios import resolve_scenario
from .world import obstacle_polygon, static_obstacle_from

logger = structlog.get_logger(__name__)


def parse_override(text: str) -> tuple[str, Any]:
    """Split ``key=value``; the value is read as JSON when possible, else kept as a string."""
    key, separator, raw = text.partition("=")
    key = key.strip()
    if not separator or not key:
        raise ConfigError("override must look like key=value", override=text)
    try:
        value: Any = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def apply_overrides(document: Mapping[str, Any], overrides: Mapping[str, Any]) -> dict[str, Any]:
    """Return a copy of ``document`` with dotted ``planner.weights.align``-style keys replaced."""
    result = copy.deepcopy(dict(document))
    for dotted, value in overrides.items():
        parts = dotted.split(".")
        target = result
        for part in parts[:-1]:
            child = target.setdefault(part, {})
            if not isinstance(child, dict):
                raise ConfigError("override path crosses a scalar value", key=dotted)
            target = child
        target[parts[-1]] = value
    return result


class ParamsService:
    """Reads parameter documents; the on-disk files are never modified."""

    def __init__(self, settings: AppSettings) -> None:
        self.settings = settings

    def resolve_path(self, path: Path | None) -> Path:
        return path if path is not None else self.settings.default_params_path

    def read_document(self, path: Path | None = None) -> dict[str, Any]:
        resolved = self.resolve_path(path)
        try:
            document = json.loads(resolved.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(
                "parameter file cannot be read", path=str(resolved), reason=str(exc)
            ) from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(
                "parameter file is not valid JSON", path=str(resolved), reason=str(exc)
            ) from exc
        if not isinstance(document, dict):
            raise ConfigError("parameter file must hold a JSON object", path=str(resolved))
        return document

    def load(
        self, path: Path | None = None, overrides: Mapping[str, Any] | None = None
    ) -> ParameterSet:
        resolved = self.resolve_path(path)
        document = apply_overrides(self.read_document(resolved), overrides or {})
        try:
            params = ParameterSet.model_validate(document)
        except ValidationError as exc:
            raise ConfigError(
                "parameter file is invalid",
                path=str(resolved),
                violations=validation_messages(exc),
            ) from exc
        logger.info(
            "params.loaded",
            path=str(resolved),
            overrides=sorted((overrides or {}).keys()),
            candidates=params.planner.tree.candidate_count,
            horizon_s=params.planner.tree.horizon_s,
        )
        return params

    def validate(self, path: Path | None = None, scenario: str | None = None) -> ValidationReport:
        """Check a parameter file (and optionally a scenario) and list every violation."""
        violations: list[str] = []
        try:
            self.load(path)
        except ConfigError as exc:
            violations.extend(exc.detail.get("violations", [exc.message]))
        if scenario is not None:
            try:
                document = resolve_scenario(scenario)
                for spec in document.static_obstacles:
                    obstacle_polygon(static_obstacle_from(spec))
            except ConfigError as exc:
                found = exc.detail.get("violations")
                if found:
                    violations.extend(f"scenario.{message}" for message in found)
                else:
                    obstacle = exc.detail.get("obstacle")
                    prefix = f"scenario.{obstacle}" if obstacle else "scenario"
                    violations.append(f"{prefix}: {exc.message}")
        report = ValidationReport(valid=not violations, violations=violations)
        logger.info("params.validated", valid=report.valid, violations=len(violations))
        return report
