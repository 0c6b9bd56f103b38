"""Ball-pitcher session: collect launches, tune or fit the line, hit targets.

The stored loss is recomputed from scratch on every change, so it can
never go stale against the points or the line.
"""

from __future__ import annotations

from typing import Optional

from ..devices import protocol as wire
from ..devices.gateway import DeviceHandle
from ..errors import InsufficientData, WrongMode
from ..mlcore import fit_line, invert_line, loss
from ..mlcore.types import SPEED_MAX, LaunchPoint, LineModel
from .base import (
    EV_FIT_COMPUTED,
    EV_LINE_CHANGED,
    EV_MODE_CHANGED,
    EV_SAMPLE_ADDED,
    EV_STATUS_CHANGED,
    ExperimentSession,
    Mode,
    SessionEvent,
)

DEFAULT_SPEED = 50.0
DEFAULT_LINE = LineModel(slope=1.0, intercept=0.0)


class PitcherSession(ExperimentSession):
    experiment = "pitcher"

    def __init__(self, device: Optional[DeviceHandle] = None):
        super().__init__(device)
        self.mode = Mode.TRAINING
        self.points: list[LaunchPoint] = []
        self.current_speed = DEFAULT_SPEED
        self.line = DEFAULT_LINE
        self.last_loss: Optional[float] = None

    def snapshot(self) -> dict:
        return {
            **self._snapshot_header(),
            "mode": self.mode.value,
            "points": [{"speed": p.speed, "distance": p.distance}
                       for p in self.points],
            "current_speed": self.current_speed,
            "line": {"slope": self.line.slope, "intercept": self.line.intercept},
            "last_loss": self.last_loss,
        }

    def _refresh_loss(self) -> None:
        self.last_loss = loss(self.points, self.line) if self.points else None

    # -- mutations ------------------------------------------------------

    def set_mode(self, mode: Mode | str) -> Optional[SessionEvent]:
        mode = Mode(mode)
        if mode == self.mode:
            return None
        self.mode = mode
        return self._emit(EV_MODE_CHANGED, {"mode": mode.value})

    def set_speed(self, speed: float) -> SessionEvent:
        speed = float(speed)
        if not 0.0 <= speed <= SPEED_MAX:
            raise ValueError(f"speed out of range [0, {SPEED_MAX}]: {speed}")
        self.current_speed = speed
        return self._emit(EV_STATUS_CHANGED, {"current_speed": speed})

    def launch_and_measure(self) -> LaunchPoint:
        """Fire at the current speed, measure where the ball landed, record it."""
        if self.mode != Mode.TRAINING:
            raise WrongMode("collecting launches requires training mode")
        device = self._require_device()
        device.submit(wire.CMD_LAUNCH, speed=self.current_speed)
        landed_mm = device.submit(wire.CMD_READ_DISTANCE).args["value"]
        point = LaunchPoint(speed=self.current_speed, distance=float(landed_mm) / 10.0)
        self.points.append(point)
        self._refresh_loss()
        self._emit(EV_SAMPLE_ADDED,
                   {"point": {"speed": point.speed, "distance": point.distance}})
        return point

    def set_line(self, slope: float, intercept: float) -> float:
        """Manually tune the line; returns the resulting loss."""
        if self.mode != Mode.INFERENCE:
            raise WrongMode("tuning the line requires inference mode")
        if not self.points:
            raise InsufficientData("collect at least one launch first")
        self.line = LineModel(slope=float(slope), intercept=float(intercept))
        self._refresh_loss()
        self._emit(EV_LINE_CHANGED,
                   {"line": {"slope": self.line.slope,
                             "intercept": self.line.intercept},
                    "loss": self.last_loss})
        return self.last_loss

    def autofit(self) -> LineModel:
        """Replace the line with the least-squares best fit."""
        if self.mode != Mode.INFERENCE:
            raise WrongMode("autofit requires inference mode")
        self.line = fit_line(self.points)
        self._refresh_loss()
        self._emit(EV_FIT_COMPUTED,
                   {"line": {"slope": self.line.slope,
                             "intercept": self.line.intercept},
                    "loss": self.last_loss})
        return self.line

    def target_shot(self, target_distance: float) -> dict:
        """Invert the line for a target, launch at that speed, measure the landing.

        Pure inference: the result is returned (and shown in the UI) but
        not added to the training data, so the session state is untouched.
        """
        if self.mode != Mode.INFERENCE:
            raise WrongMode("target shots require inference mode")
        speed, clamped = invert_line(self.line, float(target_distance))
        device = self._require_device()
        device.submit(wire.CMD_LAUNCH, speed=speed)
        landed_mm = device.submit(wire.CMD_READ_DISTANCE).args["value"]
        return {
            "target": float(target_distance),
            "speed": speed,
            "clamped": clamped,
            "landing": float(landed_mm) / 10.0,
        }

    # -- persistence ------------------------------------------------------

    @classmethod
    def restore(cls, state: dict,
                device: Optional[DeviceHandle] = None) -> "PitcherSession":
        session = cls(device=device)
        session._seq = int(state["seq"])
        session.mode = Mode(state["mode"])
        session.points = [
            LaunchPoint(speed=p["speed"], distance=p["distance"])
            for p in state["points"]
        ]
        session.current_speed = float(state["current_speed"])
        session.line = LineModel(slope=state["line"]["slope"],
                                 intercept=state["line"]["intercept"])
        session.last_loss = state["last_loss"]
        return session
