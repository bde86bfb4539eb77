"""Exception hierarchy shared by the library and the command line."""
from __future__ import annotations

from typing import Any

from pydantic import ValidationError


class ColavError(Exception):
    """Base error carrying a process exit code and a JSON-friendly detail."""

    exit_code: int = 1

    def __init__(self, message: str, **detail: Any) -> None:
        super().__init__(message)
        self.message = message
        self.detail: dict[str, Any] = {"message": message, **detail}

    def envelope(self) -> dict[str, Any]:
        return {"status": "error", "error": {"type": type(self).__name__, **self.detail}}


class ConfigError(ColavError, ValueError):
    """Unreadable or invalid parameter/scenario input."""

    exit_code = 2


class InvalidObstacleError(ConfigError):
    """Static obstacle polygon is degenerate (fewer than 3 vertices, no area, self-intersecting)."""


class PlannerError(ColavError):
    """The planner could not produce a trajectory."""

    exit_code = 3


def validation_messages(exc: ValidationError) -> list[str]:
    """Flatten pydantic errors into ``"dotted.location: message"`` strings."""
    messages = []
    for error in exc.errors():
        location = ".".join(str(part) for part in error["loc"])
        messages.append(f"{location}: {error['msg']}" if location else error["msg"])
    return messages
