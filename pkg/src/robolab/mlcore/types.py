"""Domain value types shared by the three experiments.

All types are immutable; validation happens at construction so anything
holding one of these can trust its invariants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum, IntEnum

import numpy as np

# Fixed plot ranges. Features are normalized by these constants for
# distance computations so the classifier does not shift around as
# unrelated data is added.
COLOR_MAX = 255.0
LENGTH_MAX = 250.0
SPEED_MAX = 100.0

# The crawler arm has four discrete positions and two actions per state.
N_STATES = 4
N_ACTIONS = 2


class FruitLabel(str, Enum):
    """The two trained classes."""

    APPLE = "apple"
    BANANA = "banana"


class CrawlerAction(IntEnum):
    """Move the arm to the next / previous position in the cyclic order."""

    FORWARD = 0
    BACKWARD = 1


class ActionMode(str, Enum):
    """Whether an action came from exploration or from the greedy policy."""

    EXPLORATORY = "exploratory"
    EXPLOITATIVE = "exploitative"


def _check_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class FeaturePoint:
    """One fruit measurement: green-channel intensity and length in mm."""

    color: float
    length: float

    def __post_init__(self):
        _check_finite("color", self.color)
        _check_finite("length", self.length)
        if not 0.0 <= self.color <= COLOR_MAX:
            raise ValueError(f"color out of range [0, {COLOR_MAX}]: {self.color}")
        if not 0.0 <= self.length <= LENGTH_MAX:
            raise ValueError(f"length out of range [0, {LENGTH_MAX}]: {self.length}")


@dataclass(frozen=True)
class Sample:
    """A labeled fruit measurement. Ids are unique within a dataset."""

    id: int
    point: FeaturePoint
    label: FruitLabel


@dataclass(frozen=True)
class LaunchPoint:
    """One (motor speed %, measured distance cm) pair."""

    speed: float
    distance: float

    def __post_init__(self):
        _check_finite("speed", self.speed)
        _check_finite("distance", self.distance)
        if not 0.0 <= self.speed <= SPEED_MAX:
            raise ValueError(f"speed out of range [0, {SPEED_MAX}]: {self.speed}")
        if self.distance < 0.0:
            raise ValueError(f"distance must be >= 0: {self.distance}")


@dataclass(frozen=True)
class LineModel:
    """distance = slope * speed + intercept (cm per speed-%, cm)."""

    slope: float
    intercept: float

    def __post_init__(self):
        _check_finite("slope", self.slope)
        _check_finite("intercept", self.intercept)

    def predict(self, speed: float) -> float:
        return self.slope * speed + self.intercept


@dataclass(frozen=True)
class QParams:
    """Q-learning constants.

    gamma is restricted to the two toggle values exposed in the UI;
    alpha is a fixed design constant and not user-adjustable.
    """

    epsilon: float
    gamma: float
    alpha: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon out of range [0, 1]: {self.epsilon}")
        if self.gamma not in (0.0, 1.0):
            raise ValueError(f"gamma must be 0.0 or 1.0: {self.gamma}")
        # alpha == 0 is allowed so "the update with a zero rate is the
        # identity" stays an expressible (and tested) property.
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha out of range [0, 1]: {self.alpha}")


def check_state(state: int) -> int:
    """Validate an arm position index."""
    if not isinstance(state, (int, np.integer)) or not 0 <= int(state) < N_STATES:
        raise ValueError(f"state must be an integer in 0..{N_STATES - 1}: {state!r}")
    return int(state)


def next_state(state: int, action: CrawlerAction) -> int:
    """Cyclic neighbor of ``state`` in the direction of ``action``."""
    s = check_state(state)
    if action == CrawlerAction.FORWARD:
        return (s + 1) % N_STATES
    return (s - 1) % N_STATES


def zero_qtable() -> np.ndarray:
    """Fresh all-zero 4x2 action-value table."""
    return np.zeros((N_STATES, N_ACTIONS), dtype=np.float64)


def check_qtable(q: np.ndarray) -> np.ndarray:
    """Validate shape and finiteness of an action-value table."""
    q = np.asarray(q, dtype=np.float64)
    if q.shape != (N_STATES, N_ACTIONS):
        raise ValueError(f"q-table must be {N_STATES}x{N_ACTIONS}, got {q.shape}")
    if not np.all(np.isfinite(q)):
        raise ValueError("q-table entries must be finite")
    return q
