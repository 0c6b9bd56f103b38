"""Device gateway: one serialized command channel per robot.

A DeviceHandle owns a transport (a bidirectional framed byte stream) and
guarantees at most one in-flight command at a time. Two transports exist:

* SimTransport  — loops frames through an in-process RobotSimulator, so
  even simulated traffic exercises the real codec;
* StreamTransport — wraps any socket-like object; this is the seam where
  a real hub adapter (e.g. a Bluetooth bridge) plugs in.

When a transport drops, the pending command fails with DeviceUnavailable
and the handle reports Reconnecting; the next submit (or an explicit
``reconnect()``) re-dials the transport factory. Session data lives above
this layer, so reconnects never lose it.
"""

from __future__ import annotations

import itertools
import threading
import time
from enum import Enum
from typing import Callable, Optional

from ..errors import ConfigError, DeviceError, DeviceUnavailable, ProtocolError
from . import protocol as wire
from .simulator import RobotSimulator, SimulatorConfig


class BackendStatus(str, Enum):
    CONNECTED = "connected"
    DISCONNECTED = "disconnected"
    RECONNECTING = "reconnecting"


class TransportClosed(Exception):
    """The byte stream under a transport is gone."""


class SimTransport:
    """In-process loopback transport backed by a RobotSimulator."""

    def __init__(self, simulator: RobotSimulator):
        self.simulator = simulator
        self._pending: list[bytes] = []
        self._dropped = False

    def send_frame(self, frame: bytes) -> None:
        if self._dropped:
            raise TransportClosed("simulated transport dropped")
        cmd = wire.decode_frame(frame)
        reply = self.simulator.handle(cmd)
        self._pending.append(wire.encode_frame(reply))

    def recv_frame(self) -> bytes:
        if self._dropped:
            raise TransportClosed("simulated transport dropped")
        if not self._pending:
            raise TransportClosed("no reply pending")
        return self._pending.pop(0)

    def close(self) -> None:
        self._dropped = True

    def drop(self) -> None:
        """Test hook: simulate losing the link mid-flight."""
        self._dropped = True
        self._pending.clear()


class StreamTransport:
    """Framed transport over any object with sendall()/recv() (e.g. a socket)."""

    def __init__(self, sock):
        self._sock = sock
        self._buffer = b""

    def send_frame(self, frame: bytes) -> None:
        try:
            self._sock.sendall(frame)
        except OSError as e:
            raise TransportClosed(str(e)) from e

    def recv_frame(self) -> bytes:
        while b"\n" not in self._buffer:
            try:
                chunk = self._sock.recv(4096)
            except OSError as e:
                raise TransportClosed(str(e)) from e
            if not chunk:
                raise TransportClosed("stream closed by peer")
            self._buffer += chunk
        line, self._buffer = self._buffer.split(b"\n", 1)
        return line + b"\n"

    def close(self) -> None:
        try:
            self._sock.close()
        except OSError:
            pass


class DeviceHandle:
    """Serialized command access to one robot backend."""

    def __init__(self, transport_factory: Callable[[], object],
                 world: Optional[RobotSimulator] = None):
        self._factory = transport_factory
        self._lock = threading.Lock()
        self._ids = itertools.count(1)
        self.world = world
        self._transport = None
        self._status = BackendStatus.DISCONNECTED
        self.reconnect()

    @property
    def status(self) -> BackendStatus:
        return self._status

    def reconnect(self) -> None:
        """(Re-)open the transport; raises DeviceUnavailable on failure."""
        with self._lock:
            self._reconnect_locked()

    def _reconnect_locked(self) -> None:
        try:
            self._transport = self._factory()
        except Exception as e:
            self._status = BackendStatus.RECONNECTING
            raise DeviceUnavailable(f"cannot open transport: {e}") from e
        self._status = BackendStatus.CONNECTED

    def submit(self, kind: str, **args) -> wire.DeviceReply:
        """Send one command and wait for its correlated reply.

        Error replies surface as DeviceError; transport loss as
        DeviceUnavailable (and the handle flips to Reconnecting).
        """
        with self._lock:
            if self._status == BackendStatus.DISCONNECTED:
                raise DeviceUnavailable("device is disconnected")
            if self._status == BackendStatus.RECONNECTING:
                self._reconnect_locked()
            cmd = wire.DeviceCommand(
                id=next(self._ids), kind=kind, args=args, issued_at=time.time()
            )
            try:
                self._transport.send_frame(wire.encode_frame(cmd))
                reply = wire.decode_frame(self._transport.recv_frame())
            except TransportClosed as e:
                self._status = BackendStatus.RECONNECTING
                raise DeviceUnavailable(f"transport lost: {e}") from e
            except ProtocolError:
                raise
        if not isinstance(reply, wire.DeviceReply):
            raise ProtocolError("backend sent a command, expected a reply")
        if reply.id != cmd.id:
            raise ProtocolError(
                f"reply id {reply.id} does not match command id {cmd.id}"
            )
        if reply.kind == wire.REPLY_ERROR:
            raise DeviceError(reply.args["code"], reply.args["message"])
        return reply

    def close(self) -> None:
        with self._lock:
            if self._transport is not None:
                self._transport.close()
            self._status = BackendStatus.DISCONNECTED

    # Test hook: reach the live transport (e.g. to drop a sim link).
    @property
    def transport(self):
        return self._transport


def backend_connect(
    descriptor: str,
    *,
    config: Optional[SimulatorConfig] = None,
    rig: str = "bench",
    endpoint=None,
) -> DeviceHandle:
    """Open a device session against a backend.

    descriptor "sim": runs an in-process simulator (``config`` and ``rig``
    select the robot). descriptor "external": ``endpoint`` must be a
    connected socket-like object or a zero-argument callable producing
    one; the wire format is the only contract.
    """
    if descriptor == "sim":
        simulator = RobotSimulator(config or SimulatorConfig(), rig=rig)
        return DeviceHandle(lambda: SimTransport(simulator), world=simulator)
    if descriptor == "external":
        if endpoint is None:
            raise ConfigError("external backend needs an endpoint")
        if callable(endpoint):
            return DeviceHandle(lambda: StreamTransport(endpoint()))
        # A single pre-connected stream cannot be re-dialed; reuse it once.
        first = [StreamTransport(endpoint)]

        def factory():
            if first:
                return first.pop()
            raise ConfigError("endpoint already consumed; pass a callable to re-dial")

        return DeviceHandle(factory)
    raise ConfigError(f"unknown backend descriptor {descriptor!r}")
