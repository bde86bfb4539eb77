"""Builtin evaluation scenarios and scenario-file loading.

Every builtin scenario starts the own-ship at the origin heading north at
the desired speed; the desired trajectory is a straight northbound line.
Moving obstacles cruise at 5 knots.
"""
from __future__ import annotations

import json
from pathlib import Path

import structlog
from pydantic import ValidationError

from ..errors import ConfigError, validation_messages
from ..schemas import (
    DesiredTrajectorySpec,
    MovingObstacleSpec,
    OwnshipInit,
    ScenarioDocument,
    StaticObstacleSpec,
    Waypoint,
)

logger = structlog.get_logger(__name__)

OBSTACLE_SOG_MPS = 5.0 * 0.5144


def _northbound(speed: float, duration: float) -> DesiredTrajectorySpec:
    end = duration + 200.0
    return DesiredTrajectorySpec(
        speed_mps=speed,
        waypoints=[
            Waypoint(time_s=0.0, north_m=0.0, east_m=0.0),
            Waypoint(time_s=end, north_m=speed * end, east_m=0.0),
        ],
    )


def _box(
    name: str, north: tuple[float, float], east: tuple[float, float], padding: float
) -> StaticObstacleSpec:
    (n0, n1), (e0, e1) = north, east
    return StaticObstacleSpec(
        name=name,
        vertices_m=[(n0, e0), (n0, e1), (n1, e1), (n1, e0)],
        padding_m=padding,
    )


def _static_only() -> ScenarioDocument:
    speed, duration = 5.0, 700.0
    return ScenarioDocument(
        name="scenario-1",
        description="Two static obstacles astride the desired line, 150 m padding.",
        duration_s=duration,
        ownship=OwnshipInit(sog_mps=speed),
        desired_trajectory=_northbound(speed, duration),
        static_obstacles=[
            StaticObstacleSpec(
                name="island-south",
                vertices_m=[(900.0, -200.0), (1000.0, -230.0), (1150.0, -90.0), (1120.0, 60.0),
                            (960.0, 40.0)],
                padding_m=150.0,
            ),
            StaticObstacleSpec(
                name="island-north",
                vertices_m=[(2000.0, -60.0), (2050.0, 150.0), (2200.0, 200.0), (2230.0, 20.0),
                            (2120.0, -50.0)],
                padding_m=150.0,
            ),
        ],
    )


def _head_on() -> ScenarioDocument:
    speed, duration = 5.0, 560.0
    return ScenarioDocument(
        name="scenario-2",
        description=(
            "Head-on encounter at the entry of a narrow channel; an islet near the desired "
            "line and a shoal further east limit the starboard maneuver. 50 m padding."
        ),
        duration_s=duration,
        ownship=OwnshipInit(sog_mps=speed),
        desired_trajectory=_northbound(speed, duration),
        static_obstacles=[
            _box("islet", (1100.0, 1300.0), (-120.0, 40.0), 50.0),
            _box("channel-west", (1700.0, 2300.0), (-400.0, -70.0), 50.0),
            _box("channel-east", (1700.0, 2300.0), (70.0, 400.0), 50.0),
            _box("shoal-east", (500.0, 800.0), (350.0, 550.0), 50.0),
        ],
        moving_obstacles=[
            MovingObstacleSpec(
                id="osd1", north_m=1650.0, east_m=0.0, sog_mps=OBSTACLE_SOG_MPS, course_deg=180.0
            ),
        ],
    )


def _crossing() -> ScenarioDocument:
    speed, duration = 5.0, 500.0
    return ScenarioDocument(
        name="scenario-3",
        description=(
            "Crossing from starboard; an island on the starboard side blocks an early "
            "starboard turn. 150 m padding."
        ),
        duration_s=duration,
        ownship=OwnshipInit(sog_mps=speed),
        desired_trajectory=_northbound(speed, duration),
        static_obstacles=[
            StaticObstacleSpec(
                name="island-starboard",
                vertices_m=[(300.0, 200.0), (320.0, 420.0), (650.0, 450.0), (700.0, 230.0)],
                padding_m=150.0,
            ),
        ],
        moving_obstacles=[
            MovingObstacleSpec(
                id="osd1",
                north_m=1100.0,
                east_m=565.0,
                sog_mps=OBSTACLE_SOG_MPS,
                course_deg=270.0,
            ),
        ],
    )


def _overtaking() -> ScenarioDocument:
    speed, duration = 8.0, 300.0
    return ScenarioDocument(
        name="scenario-4",
        description=(
            "Overtaking a slower vessel; a static obstacle blocks passing on its port side. "
            "150 m padding."
        ),
        duration_s=duration,
        ownship=OwnshipInit(sog_mps=speed),
        desired_trajectory=_northbound(speed, duration),
        static_obstacles=[_box("bank-west", (700.0, 1300.0), (-500.0, -180.0), 150.0)],
        moving_obstacles=[
            MovingObstacleSpec(
                id="osd1", north_m=600.0, east_m=0.0, sog_mps=OBSTACLE_SOG_MPS, course_deg=0.0
            ),
        ],
    )


def builtin_scenarios() -> dict[str, ScenarioDocument]:
    scenarios = [_static_only(), _head_on(), _crossing(), _overtaking()]
    return {scenario.name: scenario for scenario in scenarios}


def load_scenario(path: Path) -> ScenarioDocument:
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError("scenario file cannot be read", path=str(path), reason=str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            "scenario file is not valid JSON", path=str(path), reason=str(exc)
        ) from exc
    try:
        return ScenarioDocument.model_validate(document)
    except ValidationError as exc:
        raise ConfigError(
            "scenario file is invalid",
            path=str(path),
            violations=validation_messages(exc),
        ) from exc


def resolve_scenario(source: str) -> ScenarioDocument:
    """A builtin scenario by name, else a scenario JSON file."""
    builtin = builtin_scenarios()
    if source in builtin:
        return builtin[source]
    path = Path(source)
    if not path.exists():
        raise ConfigError(
            "unknown scenario", scenario=source, builtin=sorted(builtin.keys())
        )
    logger.info("scenario.loaded", path=str(path))
    return load_scenario(path)
