"""Framed wire protocol between sessions and a robot backend.

One message per line: a UTF-8 JSON object terminated by ``\\n`` with
exactly the fields {"id", "cmd"|"reply", "args"}. Commands carry their
issue timestamp as ``args["t"]``. The format is deliberately
human-debuggable: you can drive a backend with netcat.

``decode_frame(encode_frame(x)) == x`` for every well-formed message;
anything else raises ProtocolError with the byte offset of the fault.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Union

from ..errors import ProtocolError
from ..mlcore.types import N_STATES, SPEED_MAX

# Command kinds and the argument names each one carries.
CMD_PING = "ping"
CMD_READ_COLOR = "read_color"
CMD_READ_DISTANCE = "read_distance"
CMD_LAUNCH = "launch"
CMD_MOVE_ARM = "move_arm"

COMMAND_ARGS: dict[str, tuple[str, ...]] = {
    CMD_PING: (),
    CMD_READ_COLOR: (),
    CMD_READ_DISTANCE: (),
    CMD_LAUNCH: ("speed",),
    CMD_MOVE_ARM: ("target",),
}

# Reply kinds and their payload fields.
REPLY_PONG = "pong"
REPLY_GREEN = "green"
REPLY_DISTANCE_MM = "distance_mm"
REPLY_LAUNCH_DONE = "launch_done"
REPLY_ARM_MOVED = "arm_moved"
REPLY_ERROR = "error"

REPLY_ARGS: dict[str, tuple[str, ...]] = {
    REPLY_PONG: (),
    REPLY_GREEN: ("value",),
    REPLY_DISTANCE_MM: ("value",),
    REPLY_LAUNCH_DONE: (),
    REPLY_ARM_MOVED: ("state", "displacement_mm"),
    REPLY_ERROR: ("code", "message"),
}


@dataclass(frozen=True)
class DeviceCommand:
    id: int
    kind: str
    args: dict = field(default_factory=dict)
    issued_at: float = 0.0

    def __post_init__(self):
        _validate_command(self.id, self.kind, self.args)


@dataclass(frozen=True)
class DeviceReply:
    id: int
    kind: str
    args: dict = field(default_factory=dict)

    def __post_init__(self):
        _validate_reply(self.id, self.kind, self.args)


Message = Union[DeviceCommand, DeviceReply]


def _fail(msg: str, offset: int = 0) -> ProtocolError:
    return ProtocolError(msg, offset=offset)


def _require_finite_number(kind: str, name: str, value: Any) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool) \
            or not math.isfinite(value):
        raise _fail(f"{kind} {name} must be a finite number, got {value!r}")
    return float(value)


def _validate_command(msg_id: Any, kind: Any, args: Any) -> None:
    if not isinstance(msg_id, int) or isinstance(msg_id, bool):
        raise _fail(f"command id must be an integer, got {msg_id!r}")
    if kind not in COMMAND_ARGS:
        raise _fail(f"unknown command kind {kind!r}")
    if not isinstance(args, dict):
        raise _fail(f"command args must be an object, got {type(args).__name__}")
    expected = COMMAND_ARGS[kind]
    if set(args) != set(expected):
        raise _fail(f"command {kind!r} takes args {expected}, got {tuple(args)}")
    if kind == CMD_LAUNCH:
        speed = _require_finite_number("launch", "speed", args["speed"])
        if not 0.0 <= speed <= SPEED_MAX:
            raise _fail(f"launch speed out of range [0, {SPEED_MAX}]: {speed}")
    if kind == CMD_MOVE_ARM:
        target = args["target"]
        if not isinstance(target, int) or isinstance(target, bool) \
                or not 0 <= target < N_STATES:
            raise _fail(f"move_arm target must be in 0..{N_STATES - 1}: {target!r}")


def _validate_reply(msg_id: Any, kind: Any, args: Any) -> None:
    if not isinstance(msg_id, int) or isinstance(msg_id, bool):
        raise _fail(f"reply id must be an integer, got {msg_id!r}")
    if kind not in REPLY_ARGS:
        raise _fail(f"unknown reply kind {kind!r}")
    if not isinstance(args, dict):
        raise _fail(f"reply args must be an object, got {type(args).__name__}")
    expected = REPLY_ARGS[kind]
    if set(args) != set(expected):
        raise _fail(f"reply {kind!r} takes args {expected}, got {tuple(args)}")
    if kind in (REPLY_GREEN, REPLY_DISTANCE_MM):
        value = _require_finite_number(kind, "value", args["value"])
        if value < 0.0 or (kind == REPLY_GREEN and value > 255.0):
            raise _fail(f"{kind} value out of range: {value}")
    if kind == REPLY_ARM_MOVED:
        state = args["state"]
        if not isinstance(state, int) or isinstance(state, bool) \
                or not 0 <= state < N_STATES:
            raise _fail(f"arm_moved state must be in 0..{N_STATES - 1}: {state!r}")
        _require_finite_number(kind, "displacement_mm", args["displacement_mm"])
    if kind == REPLY_ERROR:
        if not isinstance(args["code"], str) or not isinstance(args["message"], str):
            raise _fail("error code and message must be strings")


def encode_frame(msg: Message) -> bytes:
    """Serialize one command or reply as a newline-terminated JSON line."""
    if isinstance(msg, DeviceCommand):
        obj = {"id": msg.id, "cmd": msg.kind,
               "args": {**msg.args, "t": msg.issued_at}}
    elif isinstance(msg, DeviceReply):
        obj = {"id": msg.id, "reply": msg.kind, "args": dict(msg.args)}
    else:
        raise TypeError(f"not a protocol message: {type(msg).__name__}")
    return json.dumps(obj, separators=(",", ":")).encode("utf-8") + b"\n"


def decode_frame(frame: bytes) -> Message:
    """Parse one frame back into a command or reply."""
    if not frame.endswith(b"\n"):
        raise _fail("truncated frame: missing newline terminator", offset=len(frame))
    body = frame[:-1]
    if b"\n" in body:
        raise _fail("frame contains more than one line", offset=body.index(b"\n"))
    try:
        obj = json.loads(body.decode("utf-8"))
    except UnicodeDecodeError as e:
        raise _fail(f"frame is not UTF-8: {e.reason}", offset=e.start) from e
    except json.JSONDecodeError as e:
        raise _fail(f"frame is not valid JSON: {e.msg}", offset=e.pos) from e
    if not isinstance(obj, dict):
        raise _fail("frame must be a JSON object")

    if "cmd" in obj:
        if set(obj) != {"id", "cmd", "args"}:
            raise _fail(f"command frame needs fields id/cmd/args, got {sorted(obj)}")
        args = obj["args"]
        if not isinstance(args, dict) or "t" not in args:
            raise _fail("command args must be an object carrying 't'")
        args = dict(args)
        issued_at = _require_finite_number("command", "timestamp", args.pop("t"))
        return DeviceCommand(id=obj["id"], kind=obj["cmd"], args=args,
                             issued_at=issued_at)
    if "reply" in obj:
        if set(obj) != {"id", "reply", "args"}:
            raise _fail(f"reply frame needs fields id/reply/args, got {sorted(obj)}")
        return DeviceReply(id=obj["id"], kind=obj["reply"], args=obj["args"])
    raise _fail("frame is neither a command nor a reply")
