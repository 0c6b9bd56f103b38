"""Shared machinery for the three experiment sessions.

Sessions are single-writer state machines. Every mutation bumps a
per-session sequence number and emits one SessionEvent carrying both a
small delta description and the full post-mutation snapshot; folding an
event log therefore reduces to taking the last event's state, which is
what makes reload/replay robustness cheap to guarantee.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

from ..devices.gateway import DeviceHandle
from ..errors import DeviceUnavailable

# Event kinds. One vocabulary across all experiments.
EV_SAMPLE_ADDED = "sample_added"
EV_SAMPLE_EDITED = "sample_edited"
EV_SAMPLE_DELETED = "sample_deleted"
EV_MODE_CHANGED = "mode_changed"
EV_LINE_CHANGED = "line_changed"
EV_FIT_COMPUTED = "fit_computed"
EV_Q_UPDATED = "q_updated"
EV_STEP_TAKEN = "step_taken"
EV_STATUS_CHANGED = "status_changed"

SNAPSHOT_VERSION = 1


class Mode(str, Enum):
    TRAINING = "training"
    INFERENCE = "inference"


@dataclass(frozen=True)
class SessionEvent:
    """One state transition: strictly increasing seq, delta, and snapshot."""

    seq: int
    kind: str
    data: dict
    state: dict

    def to_dict(self) -> dict:
        return {"seq": self.seq, "kind": self.kind,
                "data": self.data, "state": self.state}

    @classmethod
    def from_dict(cls, obj: dict) -> "SessionEvent":
        return cls(seq=int(obj["seq"]), kind=obj["kind"],
                   data=obj["data"], state=obj["state"])


class ExperimentSession:
    """Base class: device access, event emission, snapshot plumbing."""

    experiment = "?"

    def __init__(self, device: Optional[DeviceHandle] = None):
        self.device = device
        self._seq = 0
        self._listeners: list[Callable[[SessionEvent], None]] = []

    @property
    def seq(self) -> int:
        return self._seq

    def add_listener(self, callback: Callable[[SessionEvent], None]) -> None:
        self._listeners.append(callback)

    def remove_listener(self, callback: Callable[[SessionEvent], None]) -> None:
        self._listeners.remove(callback)

    def _emit(self, kind: str, data: dict) -> SessionEvent:
        self._seq += 1
        event = SessionEvent(seq=self._seq, kind=kind, data=data,
                             state=self.snapshot())
        for callback in list(self._listeners):
            callback(event)
        return event

    def _require_device(self) -> DeviceHandle:
        if self.device is None:
            raise DeviceUnavailable("no device attached to this session")
        return self.device

    def snapshot(self) -> dict:
        raise NotImplementedError

    def _snapshot_header(self) -> dict:
        return {"version": SNAPSHOT_VERSION, "experiment": self.experiment,
                "seq": self._seq}
