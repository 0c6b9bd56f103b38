"""Per-experiment state machines tying mlcore to the device gateway."""

from .base import (
    EV_FIT_COMPUTED,
    EV_LINE_CHANGED,
    EV_MODE_CHANGED,
    EV_Q_UPDATED,
    EV_SAMPLE_ADDED,
    EV_SAMPLE_DELETED,
    EV_SAMPLE_EDITED,
    EV_STATUS_CHANGED,
    EV_STEP_TAKEN,
    ExperimentSession,
    Mode,
    SessionEvent,
)
from .crawler import CrawlerSession, RunState
from .fruit import FruitSession
from .pitcher import PitcherSession

EXPERIMENTS = ("fruit", "pitcher", "crawler")

SESSION_TYPES = {
    "fruit": FruitSession,
    "pitcher": PitcherSession,
    "crawler": CrawlerSession,
}

__all__ = [
    "CrawlerSession",
    "EV_FIT_COMPUTED",
    "EV_LINE_CHANGED",
    "EV_MODE_CHANGED",
    "EV_Q_UPDATED",
    "EV_SAMPLE_ADDED",
    "EV_SAMPLE_DELETED",
    "EV_SAMPLE_EDITED",
    "EV_STATUS_CHANGED",
    "EV_STEP_TAKEN",
    "EXPERIMENTS",
    "ExperimentSession",
    "FruitSession",
    "Mode",
    "PitcherSession",
    "RunState",
    "SESSION_TYPES",
    "SessionEvent",
]
