"""Angle helpers. Courses are radians clockwise from north."""
from __future__ import annotations

import math

import numpy as np
from numpy.typing import ArrayLike, NDArray


def wrap_angle(angle: float) -> float:
    """Wrap a scalar angle to (-pi, pi]."""
    wrapped = math.remainder(angle, 2.0 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    return wrapped


def wrap_angles(angles: ArrayLike) -> NDArray[np.float64]:
    """Vectorized :func:`wrap_angle`."""
    values = np.asarray(angles, dtype=float)
    wrapped = np.remainder(values + np.pi, 2.0 * np.pi) - np.pi
    # remainder maps +pi to -pi; the interval is closed at +pi
    return np.where(wrapped <= -np.pi, wrapped + 2.0 * np.pi, wrapped)


def angle_difference(a: float, b: float) -> float:
    """Return ``a - b`` wrapped to (-pi, pi]."""
    return wrap_angle(a - b)
