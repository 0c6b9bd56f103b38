"""Deterministic robot simulator used as the default device backend.

One RobotSimulator stands in for one assembled robot. The ``rig``
selects which build is on the desk, which fixes what the shared
distance sensor is pointed at:

* ``fruit``    caliper rig: distance = length of the staged fruit
* ``pitcher``  launcher rig: distance = landing point of the last shot
* ``crawler``  wheeled rig: distance = position relative to the wall
* ``bench``    loose parts: fruit-style distance, everything wired up

All numeric parameters are design-time constants, not measurements; each
is pinned by a test oracle (Monte Carlo means for the fruit Gaussians,
regression recovery for the launcher line, policy enumeration for the
crawler displacement table).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

import numpy as np

from ..errors import ConfigError
from ..mlcore.types import (
    COLOR_MAX,
    LENGTH_MAX,
    N_STATES,
    CrawlerAction,
    FeaturePoint,
    next_state,
)
from . import protocol as wire


class FruitKind(str, Enum):
    """What can be staged under the sensors; Orange is outside the trained classes."""

    APPLE = "apple"
    BANANA = "banana"
    ORANGE = "orange"


RIGS = ("fruit", "pitcher", "crawler", "bench")


@dataclass(frozen=True)
class FruitClassParams:
    """Per-class means and spreads for the two measured features."""

    color_mean: float
    color_sigma: float
    length_mean: float
    length_sigma: float

    def __post_init__(self):
        if self.color_sigma < 0 or self.length_sigma < 0:
            raise ConfigError("fruit sigmas must be >= 0")


REFERENCE_FRUIT_PARAMS: Mapping[FruitKind, FruitClassParams] = {
    FruitKind.APPLE: FruitClassParams(100.0, 15.0, 75.0, 8.0),
    FruitKind.BANANA: FruitClassParams(200.0, 20.0, 180.0, 15.0),
    FruitKind.ORANGE: FruitClassParams(130.0, 10.0, 70.0, 5.0),
}

# Displacement in mm indexed [state, action]. Backward entries are the
# exact negation of the reverse Forward transition, so any round trip
# nets zero. The lone profitable edge (s1 -> s2 -> s3) costs -1 before it
# pays +5: a myopic learner walks away from it, which is the whole point.
REFERENCE_DISPLACEMENTS: tuple[tuple[float, float], ...] = (
    (0.0, 0.0),    # s0: Forward s0->s1,  Backward s0->s3
    (-1.0, 0.0),   # s1: Forward s1->s2,  Backward s1->s0
    (5.0, 1.0),    # s2: Forward s2->s3,  Backward s2->s1
    (0.0, -5.0),   # s3: Forward s3->s0,  Backward s3->s2
)


@dataclass(frozen=True)
class SimulatorConfig:
    pitcher_slope: float = 2.0
    pitcher_intercept: float = -30.0
    pitcher_noise_sigma: float = 3.0
    fruit_params: Mapping[FruitKind, FruitClassParams] = field(
        default_factory=lambda: dict(REFERENCE_FRUIT_PARAMS)
    )
    displacement_table: tuple[tuple[float, float], ...] = REFERENCE_DISPLACEMENTS
    seed: int = 0

    def __post_init__(self):
        if self.pitcher_noise_sigma < 0:
            raise ConfigError("pitcher noise sigma must be >= 0")
        table = np.asarray(self.displacement_table, dtype=np.float64)
        if table.shape != (N_STATES, 2):
            raise ConfigError(f"displacement table must be 4x2, got {table.shape}")
        for s in range(N_STATES):
            fwd = table[s, CrawlerAction.FORWARD]
            back = table[(s + 1) % N_STATES, CrawlerAction.BACKWARD]
            if back != -fwd:
                raise ConfigError(
                    "displacement table must be antisymmetric: "
                    f"backward from s{(s + 1) % N_STATES} is {back}, "
                    f"expected {-fwd}"
                )
        for kind in FruitKind:
            if kind not in self.fruit_params:
                raise ConfigError(f"fruit params missing class {kind.value}")


def _clamp(value: float, low: float, high: float) -> float:
    return min(max(value, low), high)


def sim_read_fruit(
    kind: FruitKind, config: SimulatorConfig, rng: np.random.Generator
) -> FeaturePoint:
    """Draw one concrete fruit of the given kind.

    Color comes back as a whole number (it is a sensor channel reading);
    both features are clamped into the plot ranges.
    """
    p = config.fruit_params[kind]
    color = _clamp(round(rng.normal(p.color_mean, p.color_sigma)), 0.0, COLOR_MAX)
    length = _clamp(rng.normal(p.length_mean, p.length_sigma), 0.0, LENGTH_MAX)
    return FeaturePoint(color=float(color), length=float(length))


def sim_launch(
    speed: float, config: SimulatorConfig, rng: np.random.Generator
) -> float:
    """Landing distance in cm for a launch at ``speed`` percent.

    Linear in speed plus Gaussian noise, floored at zero (the ball cannot
    land behind the launcher). With sigma == 0 no randomness is consumed
    and the result is exact.
    """
    distance = config.pitcher_slope * speed + config.pitcher_intercept
    if config.pitcher_noise_sigma > 0:
        distance += rng.normal(0.0, config.pitcher_noise_sigma)
    return max(0.0, distance)


def sim_move_arm(
    current: int, action: CrawlerAction, config: SimulatorConfig
) -> tuple[int, float]:
    """(next position, displacement mm) for one adjacent arm move."""
    table = np.asarray(config.displacement_table, dtype=np.float64)
    nxt = next_state(current, action)
    return nxt, float(table[current, action])


def config_to_dict(config: SimulatorConfig) -> dict:
    """JSON-safe form of a SimulatorConfig (for persisted descriptors)."""
    return {
        "pitcher_slope": config.pitcher_slope,
        "pitcher_intercept": config.pitcher_intercept,
        "pitcher_noise_sigma": config.pitcher_noise_sigma,
        "fruit_params": {
            kind.value: {
                "color_mean": p.color_mean,
                "color_sigma": p.color_sigma,
                "length_mean": p.length_mean,
                "length_sigma": p.length_sigma,
            }
            for kind, p in config.fruit_params.items()
        },
        "displacement_table": [list(row) for row in config.displacement_table],
        "seed": config.seed,
    }


def config_from_dict(data: dict) -> SimulatorConfig:
    return SimulatorConfig(
        pitcher_slope=float(data["pitcher_slope"]),
        pitcher_intercept=float(data["pitcher_intercept"]),
        pitcher_noise_sigma=float(data["pitcher_noise_sigma"]),
        fruit_params={
            FruitKind(kind): FruitClassParams(**params)
            for kind, params in data["fruit_params"].items()
        },
        displacement_table=tuple(
            tuple(float(v) for v in row) for row in data["displacement_table"]
        ),
        seed=int(data["seed"]),
    )


class RobotSimulator:
    """World state of one simulated robot; handles decoded device commands.

    Identical (config, seed, command sequence) always produces the
    identical reply sequence. The full world state round-trips through
    ``state()`` / ``restore()`` so a service restart cannot desync the
    simulated hardware from its session.
    """

    def __init__(self, config: SimulatorConfig, rig: str = "bench"):
        if rig not in RIGS:
            raise ConfigError(f"unknown rig {rig!r}, expected one of {RIGS}")
        self.config = config
        self.rig = rig
        self._rng = np.random.default_rng(config.seed)
        self.staged_fruit = FruitKind.APPLE
        self.reading = sim_read_fruit(self.staged_fruit, config, self._rng)
        self.arm = 0
        self.last_launch_cm = 0.0
        self.wall_offset_mm = 500.0  # crawler's starting distance to the wall

    # -- out-of-band world controls (the "hands" of the experimenter) --

    def place_fruit(self, kind: FruitKind) -> FeaturePoint:
        """Put a new fruit of ``kind`` under the sensors and return it."""
        self.staged_fruit = kind
        self.reading = sim_read_fruit(kind, self.config, self._rng)
        return self.reading

    # -- command handling ----------------------------------------------

    def handle(self, cmd: wire.DeviceCommand) -> wire.DeviceReply:
        if cmd.kind == wire.CMD_PING:
            return wire.DeviceReply(cmd.id, wire.REPLY_PONG)
        if cmd.kind == wire.CMD_READ_COLOR:
            return wire.DeviceReply(
                cmd.id, wire.REPLY_GREEN, {"value": int(self.reading.color)}
            )
        if cmd.kind == wire.CMD_READ_DISTANCE:
            return wire.DeviceReply(
                cmd.id, wire.REPLY_DISTANCE_MM, {"value": self._distance_mm()}
            )
        if cmd.kind == wire.CMD_LAUNCH:
            self.last_launch_cm = sim_launch(
                float(cmd.args["speed"]), self.config, self._rng
            )
            return wire.DeviceReply(cmd.id, wire.REPLY_LAUNCH_DONE)
        if cmd.kind == wire.CMD_MOVE_ARM:
            return self._move_arm(cmd)
        return wire.DeviceReply(
            cmd.id, wire.REPLY_ERROR,
            {"code": "unsupported", "message": f"command {cmd.kind!r} not handled"},
        )

    def _distance_mm(self) -> float:
        if self.rig == "pitcher":
            return self.last_launch_cm * 10.0
        if self.rig == "crawler":
            return max(0.0, self.wall_offset_mm)
        return self.reading.length  # caliper measures the staged fruit

    def _move_arm(self, cmd: wire.DeviceCommand) -> wire.DeviceReply:
        target = int(cmd.args["target"])
        if target == self.arm:
            return wire.DeviceReply(
                cmd.id, wire.REPLY_ARM_MOVED,
                {"state": self.arm, "displacement_mm": 0.0},
            )
        if target == (self.arm + 1) % N_STATES:
            action = CrawlerAction.FORWARD
        elif target == (self.arm - 1) % N_STATES:
            action = CrawlerAction.BACKWARD
        else:
            return wire.DeviceReply(
                cmd.id, wire.REPLY_ERROR,
                {"code": "bad-target",
                 "message": f"arm at {self.arm} cannot jump to {target}"},
            )
        nxt, disp = sim_move_arm(self.arm, action, self.config)
        self.arm = nxt
        self.wall_offset_mm += disp
        return wire.DeviceReply(
            cmd.id, wire.REPLY_ARM_MOVED,
            {"state": nxt, "displacement_mm": disp},
        )

    # -- persistence -----------------------------------------------------

    def state(self) -> dict:
        """JSON-safe snapshot of the world, including the rng stream."""
        return {
            "rig": self.rig,
            "staged_fruit": self.staged_fruit.value,
            "reading": {"color": self.reading.color, "length": self.reading.length},
            "arm": self.arm,
            "last_launch_cm": self.last_launch_cm,
            "wall_offset_mm": self.wall_offset_mm,
            "rng": self._rng.bit_generator.state,
        }

    @classmethod
    def restore(cls, config: SimulatorConfig, state: dict) -> "RobotSimulator":
        sim = cls(config, rig=state["rig"])
        sim.staged_fruit = FruitKind(state["staged_fruit"])
        sim.reading = FeaturePoint(**state["reading"])
        sim.arm = int(state["arm"])
        sim.last_launch_cm = float(state["last_launch_cm"])
        sim.wall_offset_mm = float(state["wall_offset_mm"])
        sim._rng.bit_generator.state = state["rng"]
        return sim
