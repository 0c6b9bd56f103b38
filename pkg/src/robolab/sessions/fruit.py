"""Fruit-classification session: dataset editing, modes, live KNN.

The neighbor count is a user setting that may momentarily exceed the
dataset (a fresh session defaults to k=3 before any measurement exists);
classification therefore uses min(k, sample count), and deleting samples
clamps the setting down so it never silently exceeds the data again.
"""

from __future__ import annotations

from typing import Optional

from ..devices import protocol as wire
from ..devices.gateway import DeviceHandle
from ..devices.simulator import FruitKind
from ..errors import ConfigError, InvalidK, NoTrainingData, NotFound, WrongMode
from ..mlcore import decision_boundary, knn_classify
from ..mlcore.types import FeaturePoint, FruitLabel, Sample
from .base import (
    EV_MODE_CHANGED,
    EV_SAMPLE_ADDED,
    EV_SAMPLE_DELETED,
    EV_SAMPLE_EDITED,
    EV_STATUS_CHANGED,
    ExperimentSession,
    Mode,
    SessionEvent,
)

DEFAULT_K = 3


def _sample_dict(s: Sample) -> dict:
    return {"id": s.id, "color": s.point.color, "length": s.point.length,
            "label": s.label.value}


class FruitSession(ExperimentSession):
    experiment = "fruit"

    def __init__(self, device: Optional[DeviceHandle] = None, k: int = DEFAULT_K):
        super().__init__(device)
        self.mode = Mode.TRAINING
        self.samples: list[Sample] = []
        self.k = k
        self.boundary_visible = False
        self.last_classification: Optional[dict] = None
        self._next_id = 0

    # -- queries --------------------------------------------------------

    def snapshot(self) -> dict:
        return {
            **self._snapshot_header(),
            "mode": self.mode.value,
            "samples": [_sample_dict(s) for s in self.samples],
            "k": self.k,
            "boundary_visible": self.boundary_visible,
            "last_classification": self.last_classification,
            "next_id": self._next_id,
        }

    def effective_k(self) -> int:
        return min(self.k, len(self.samples)) if self.samples else self.k

    def boundary(self, resolution: int = 100) -> list[list[FruitLabel]]:
        """Decision-boundary grid for the current dataset and k."""
        if not self.samples:
            raise NoTrainingData("no samples collected yet")
        return decision_boundary(self.samples, self.effective_k(), resolution)

    # -- mutations ------------------------------------------------------

    def set_mode(self, mode: Mode | str) -> Optional[SessionEvent]:
        mode = Mode(mode)
        if mode == self.mode:
            return None
        self.mode = mode
        if mode == Mode.TRAINING:
            self.last_classification = None
        return self._emit(EV_MODE_CHANGED, {"mode": mode.value})

    def record(self, label: FruitLabel | str,
               reading: Optional[FeaturePoint] = None) -> Sample:
        """Measure the staged fruit (or take an explicit reading) and store it."""
        if self.mode != Mode.TRAINING:
            raise WrongMode("recording samples requires training mode")
        label = FruitLabel(label)
        if reading is None:
            reading = self._read_features()
        sample = Sample(id=self._next_id, point=reading, label=label)
        self._next_id += 1
        self.samples.append(sample)
        self._emit(EV_SAMPLE_ADDED, {"sample": _sample_dict(sample)})
        return sample

    def edit_label(self, sample_id: int, label: FruitLabel | str) -> Sample:
        label = FruitLabel(label)
        for i, s in enumerate(self.samples):
            if s.id == sample_id:
                updated = Sample(id=s.id, point=s.point, label=label)
                self.samples[i] = updated
                self._emit(EV_SAMPLE_EDITED, {"sample": _sample_dict(updated)})
                return updated
        raise NotFound(f"no sample with id {sample_id}")

    def delete(self, sample_id: int) -> None:
        for i, s in enumerate(self.samples):
            if s.id == sample_id:
                del self.samples[i]
                # keep the neighbor setting honest against the smaller dataset
                self.k = min(self.k, max(1, len(self.samples)))
                self._emit(EV_SAMPLE_DELETED, {"id": sample_id, "k": self.k})
                return
        raise NotFound(f"no sample with id {sample_id}")

    def set_k(self, k: int) -> SessionEvent:
        if not isinstance(k, int) or k < 1:
            raise InvalidK(f"k must be a positive integer, got {k!r}")
        if self.samples and k > len(self.samples):
            raise InvalidK(f"k={k} exceeds the {len(self.samples)} collected samples")
        self.k = k
        return self._emit(EV_STATUS_CHANGED, {"k": k})

    def set_boundary_visible(self, visible: bool) -> SessionEvent:
        self.boundary_visible = bool(visible)
        return self._emit(EV_STATUS_CHANGED, {"boundary_visible": self.boundary_visible})

    def classify(self, reading: Optional[FeaturePoint] = None) -> dict:
        """Measure an unknown fruit and vote among its nearest neighbors."""
        if self.mode != Mode.INFERENCE:
            raise WrongMode("classification requires inference mode")
        if not self.samples:
            raise NoTrainingData("no samples collected yet")
        if reading is None:
            reading = self._read_features()
        label, neighbor_ids = knn_classify(self.samples, reading, self.effective_k())
        self.last_classification = {
            "label": label.value,
            "neighbor_ids": neighbor_ids,
            "color": reading.color,
            "length": reading.length,
        }
        self._emit(EV_STATUS_CHANGED, {"classification": self.last_classification})
        return self.last_classification

    def place_fruit(self, kind: FruitKind | str) -> FeaturePoint:
        """Stage a fruit on the simulated rig (the experimenter's hand).

        Only simulator backends expose a controllable world; with a real
        robot you place the fruit yourself.
        """
        device = self._require_device()
        if device.world is None:
            raise ConfigError("this backend has no controllable world")
        return device.world.place_fruit(FruitKind(kind))

    # -- device access ----------------------------------------------------

    def _read_features(self) -> FeaturePoint:
        device = self._require_device()
        color = device.submit(wire.CMD_READ_COLOR).args["value"]
        length = device.submit(wire.CMD_READ_DISTANCE).args["value"]
        return FeaturePoint(color=float(color), length=float(length))

    # -- persistence ------------------------------------------------------

    @classmethod
    def restore(cls, state: dict,
                device: Optional[DeviceHandle] = None) -> "FruitSession":
        session = cls(device=device, k=int(state["k"]))
        session._seq = int(state["seq"])
        session.mode = Mode(state["mode"])
        session.samples = [
            Sample(id=int(s["id"]),
                   point=FeaturePoint(color=s["color"], length=s["length"]),
                   label=FruitLabel(s["label"]))
            for s in state["samples"]
        ]
        session.boundary_visible = bool(state["boundary_visible"])
        session.last_classification = state["last_classification"]
        session._next_id = int(state["next_id"])
        return session
