"""Crawler session: the Q-learning training loop against the arm device.

Stepping cadence is caller-driven (the service ticks, the CLI loops); the
session only knows how to take one step. The action rng is part of the
serialized state, so a restored session continues the exact same
trajectory it would have taken without the restart.
"""

from __future__ import annotations

from enum import Enum
from typing import Optional

import numpy as np

from ..devices import protocol as wire
from ..devices.gateway import DeviceHandle
from ..errors import DeviceUnavailable, WrongRunState
from ..mlcore import greedy_policy, q_update, select_action
from ..mlcore.qlearning import check_qtable
from ..mlcore.types import (
    ActionMode,
    CrawlerAction,
    QParams,
    next_state,
    zero_qtable,
)
from .base import (
    EV_Q_UPDATED,
    EV_STATUS_CHANGED,
    EV_STEP_TAKEN,
    ExperimentSession,
    SessionEvent,
)

DEFAULT_EPSILON = 0.5
DEFAULT_GAMMA = 0.0


class RunState(str, Enum):
    IDLE = "idle"
    RUNNING = "running"
    PAUSED = "paused"


# Legal control transitions; Reset is legal from anywhere.
_TRANSITIONS = {
    "start": (RunState.IDLE, RunState.RUNNING),
    "pause": (RunState.RUNNING, RunState.PAUSED),
    "resume": (RunState.PAUSED, RunState.RUNNING),
}


class CrawlerSession(ExperimentSession):
    experiment = "crawler"

    def __init__(self, device: Optional[DeviceHandle] = None, seed: int = 0,
                 epsilon: float = DEFAULT_EPSILON, gamma: float = DEFAULT_GAMMA):
        super().__init__(device)
        self.run_state = RunState.IDLE
        self.q = zero_qtable()
        self.params = QParams(epsilon=epsilon, gamma=gamma)
        self.current = 0
        self.step_count = 0
        self.cumulative_displacement = 0.0
        self.last_action_mode: Optional[ActionMode] = None
        self._rng = np.random.default_rng(seed)

    def snapshot(self) -> dict:
        return {
            **self._snapshot_header(),
            "run_state": self.run_state.value,
            "q": self.q.tolist(),
            "params": {"epsilon": self.params.epsilon,
                       "gamma": self.params.gamma,
                       "alpha": self.params.alpha},
            "current": self.current,
            "step_count": self.step_count,
            "cumulative_displacement": self.cumulative_displacement,
            "last_action_mode": (self.last_action_mode.value
                                 if self.last_action_mode else None),
            "rng": self._rng.bit_generator.state,
        }

    def greedy(self) -> dict[int, CrawlerAction]:
        return greedy_policy(self.q)

    # -- mutations ------------------------------------------------------

    def control(self, command: str) -> SessionEvent:
        """start / pause / resume / reset."""
        if command == "reset":
            return self._reset()
        try:
            expected, target = _TRANSITIONS[command]
        except KeyError:
            raise ValueError(f"unknown control command {command!r}") from None
        if self.run_state != expected:
            raise WrongRunState(
                f"cannot {command} from {self.run_state.value}"
            )
        self.run_state = target
        return self._emit(EV_STATUS_CHANGED, {"run_state": target.value})

    def _reset(self) -> SessionEvent:
        self._return_arm_home()
        self.run_state = RunState.IDLE
        self.q = zero_qtable()
        self.current = 0
        self.step_count = 0
        self.cumulative_displacement = 0.0
        self.last_action_mode = None
        return self._emit(EV_STATUS_CHANGED, {"run_state": "idle", "reset": True})

    def _return_arm_home(self) -> None:
        """Walk the physical arm back to position 0, one joint move at a time."""
        if self.device is None:
            self.current = 0
            return
        while self.current != 0:
            target = next_state(self.current, CrawlerAction.BACKWARD)
            try:
                reply = self.device.submit(wire.CMD_MOVE_ARM, target=target)
            except DeviceUnavailable:
                # keep tracking wherever the arm actually is
                raise
            self.current = int(reply.args["state"])

    def set_params(self, epsilon: Optional[float] = None,
                   gamma: Optional[float] = None) -> SessionEvent:
        """Adjust exploration rate and/or the discount toggle.

        Takes effect at the next step boundary, never mid-step.
        """
        self.params = QParams(
            epsilon=self.params.epsilon if epsilon is None else float(epsilon),
            gamma=self.params.gamma if gamma is None else float(gamma),
            alpha=self.params.alpha,
        )
        return self._emit(EV_STATUS_CHANGED,
                          {"params": {"epsilon": self.params.epsilon,
                                      "gamma": self.params.gamma}})

    def step(self) -> SessionEvent:
        """One training step: pick, move, observe reward, update Q.

        If the device drops mid-step the session (including its rng) is
        left exactly as before, so the step simply never happened.
        """
        if self.run_state != RunState.RUNNING:
            raise WrongRunState(f"cannot step while {self.run_state.value}")
        device = self._require_device()
        rng_state = self._rng.bit_generator.state
        action, mode = select_action(self.q, self.current,
                                     self.params.epsilon, self._rng)
        target = next_state(self.current, action)
        try:
            reply = device.submit(wire.CMD_MOVE_ARM, target=target)
        except DeviceUnavailable:
            self._rng.bit_generator.state = rng_state
            raise
        reward = float(reply.args["displacement_mm"])
        landed = int(reply.args["state"])

        previous = self.current
        self.q = q_update(self.q, previous, action, reward, landed, self.params)
        self.current = landed
        self.step_count += 1
        self.cumulative_displacement += reward
        self.last_action_mode = mode

        self._emit(EV_Q_UPDATED, {
            "state": previous, "action": int(action),
            "value": float(self.q[previous, action]),
        })
        return self._emit(EV_STEP_TAKEN, {
            "from": previous, "to": landed,
            "action": int(action), "action_mode": mode.value,
            "reward": reward, "step_count": self.step_count,
            "cumulative_displacement": self.cumulative_displacement,
        })

    # -- persistence ------------------------------------------------------

    @classmethod
    def restore(cls, state: dict,
                device: Optional[DeviceHandle] = None) -> "CrawlerSession":
        session = cls(device=device,
                      epsilon=state["params"]["epsilon"],
                      gamma=state["params"]["gamma"])
        session._seq = int(state["seq"])
        session.run_state = RunState(state["run_state"])
        session.q = check_qtable(np.array(state["q"], dtype=np.float64))
        session.params = QParams(epsilon=state["params"]["epsilon"],
                                 gamma=state["params"]["gamma"],
                                 alpha=state["params"]["alpha"])
        session.current = int(state["current"])
        session.step_count = int(state["step_count"])
        session.cumulative_displacement = float(state["cumulative_displacement"])
        mode = state["last_action_mode"]
        session.last_action_mode = ActionMode(mode) if mode else None
        session._rng.bit_generator.state = state["rng"]
        return session
