"""Least-squares line fitting for the ball pitcher.

The fit uses the closed-form solution on exact sums:

    slope = (n*sum(xy) - sum(x)*sum(y)) / (n*sum(x^2) - sum(x)^2)

computed with ``math.fsum``. For integer-valued inputs (the noiseless
simulator produces them) every sum is exact in double precision, so the
fit recovers a generating line bit-for-bit -- which is what lets the
closed-loop target shot land exactly on the target.
"""

from __future__ import annotations

import math
from typing import Sequence

from ..errors import DegenerateX, InsufficientData, UninvertibleLine
from .types import SPEED_MAX, LaunchPoint, LineModel

# Slopes flatter than this cannot be meaningfully inverted.
MIN_INVERTIBLE_SLOPE = 1e-9


def fit_line(points: Sequence[LaunchPoint]) -> LineModel:
    """Unique least-squares line through the points.

    Needs at least two points with at least two distinct speeds.
    """
    if len(points) < 2:
        raise InsufficientData(f"need >= 2 points to fit a line, got {len(points)}")
    speeds = [p.speed for p in points]
    if len(set(speeds)) == 1:
        raise DegenerateX("all speeds identical; slope is undetermined")

    n = float(len(points))
    sx = math.fsum(speeds)
    sy = math.fsum(p.distance for p in points)
    sxy = math.fsum(p.speed * p.distance for p in points)
    sxx = math.fsum(p.speed * p.speed for p in points)

    denom = n * sxx - sx * sx
    if denom == 0.0:
        raise DegenerateX("zero speed variance; slope is undetermined")
    slope = (n * sxy - sx * sy) / denom
    intercept = (sy - slope * sx) / n
    return LineModel(slope=slope, intercept=intercept)


def loss(points: Sequence[LaunchPoint], line: LineModel) -> float:
    """Mean squared vertical error of the line against the points, in cm^2."""
    if not points:
        raise InsufficientData("loss needs at least one point")
    return math.fsum(
        (p.distance - line.predict(p.speed)) ** 2 for p in points
    ) / len(points)


def invert_line(line: LineModel, target_distance: float) -> tuple[float, bool]:
    """Speed that makes the line hit ``target_distance``.

    Returns (speed, clamped): the speed is clamped into [0, 100] and the
    flag reports whether clamping happened.
    """
    if abs(line.slope) <= MIN_INVERTIBLE_SLOPE:
        raise UninvertibleLine(f"slope {line.slope} too flat to invert")
    speed = (target_distance - line.intercept) / line.slope
    if speed < 0.0:
        return 0.0, True
    if speed > SPEED_MAX:
        return SPEED_MAX, True
    return speed, False
