"""Application configuration powered by pydantic-settings."""
from __future__ import annotations

from functools import lru_cache
from pathlib import Path
from typing import Literal

from pydantic_settings import BaseSettings, SettingsConfigDict


BASE_DIR = Path(__file__).resolve().parent
DATA_DIR = BASE_DIR / "data"


class AppSettings(BaseSettings):
    """Process-level settings loaded from ``COLAV_*`` environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env", env_file_encoding="utf-8", env_prefix="COLAV_", extra="ignore"
    )

    app_name: str = "colav"
    app_version: str = "0.1.0"
    log_level: str = "INFO"
    log_format: Literal["json", "console"] = "json"

    default_params_path: Path = DATA_DIR / "default_params.json"
    default_output_dir: Path = Path("runs")
    default_seed: int = 0


@lru_cache
def get_settings() -> AppSettings:
    """Return cached settings loaded from the environment."""
    return AppSettings()
