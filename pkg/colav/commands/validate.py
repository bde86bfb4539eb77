"""``colav validate``: check a parameter file (and optionally a scenario) without running."""
from __future__ import annotations

from pathlib import Path

from ..config import AppSettings
from ..dependencies import get_params_service
from ..schemas import ValidationReport


def validate(
    settings: AppSettings, params_path: Path | None = None, scenario: str | None = None
) -> ValidationReport:
    """Return every violation found; files are only read."""
    return get_params_service(settings).validate(params_path, scenario)
