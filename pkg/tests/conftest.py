"""Pytest configuration for planner and simulator tests."""
from __future__ import annotations

import os
from typing import Generator

import pytest

from colav.config import get_settings
from colav.dependencies import get_params_service
from colav.schemas import ParameterSet, PlantConfig, PrimitiveConfig


@pytest.fixture(scope="session", autouse=True)
def configure_test_env(tmp_path_factory: pytest.TempPathFactory) -> Generator[None, None, None]:
    """Send default run output to a throwaway directory and keep logs quiet."""
    os.environ["COLAV_DEFAULT_OUTPUT_DIR"] = str(tmp_path_factory.mktemp("runs"))
    os.environ["COLAV_LOG_LEVEL"] = "WARNING"
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture(scope="session")
def params() -> ParameterSet:
    return get_params_service().load()


@pytest.fixture
def plant() -> PlantConfig:
    return PlantConfig()


@pytest.fixture
def primitive() -> PrimitiveConfig:
    return PrimitiveConfig(
        step_time_s=20.0,
        ramp_time_s=1.0,
        sog_maneuver_time_s=5.0,
        course_maneuver_time_s=5.0,
        n_sog=5,
        n_course=5,
    )
