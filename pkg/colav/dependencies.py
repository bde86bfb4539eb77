"""Factories wiring services to settings for the command handlers."""
from __future__ import annotations

from .config import AppSettings, get_settings
from .services.params import ParamsService


def get_params_service(settings: AppSettings | None = None) -> ParamsService:
    """Construct a ParamsService bound to the process settings."""
    return ParamsService(settings=settings or get_settings())
