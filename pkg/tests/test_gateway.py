import socket
import threading

import pytest

from robolab.devices import protocol as wire
from robolab.devices.gateway import (
    BackendStatus,
    SimTransport,
    StreamTransport,
    backend_connect,
)
from robolab.devices.simulator import RobotSimulator, SimulatorConfig
from robolab.errors import ConfigError, DeviceError, DeviceUnavailable


class TestSimBackend:
    def test_connect_and_ping(self):
        handle = backend_connect("sim")
        assert handle.status == BackendStatus.CONNECTED
        assert handle.submit(wire.CMD_PING).kind == wire.REPLY_PONG

    def test_reply_ids_correlate(self):
        handle = backend_connect("sim")
        for _ in range(5):
            reply = handle.submit(wire.CMD_READ_COLOR)
            assert reply.kind == wire.REPLY_GREEN

    def test_drop_then_auto_reconnect(self):
        handle = backend_connect("sim", rig="fruit")
        handle.world.place_fruit("banana")
        before = handle.submit(wire.CMD_READ_COLOR).args["value"]

        handle.transport.drop()
        with pytest.raises(DeviceUnavailable):
            handle.submit(wire.CMD_READ_COLOR)
        assert handle.status == BackendStatus.RECONNECTING

        # next submit re-dials; the world (and the staged fruit) survives
        after = handle.submit(wire.CMD_READ_COLOR).args["value"]
        assert handle.status == BackendStatus.CONNECTED
        assert after == before

    def test_closed_handle_refuses_commands(self):
        handle = backend_connect("sim")
        handle.close()
        assert handle.status == BackendStatus.DISCONNECTED
        with pytest.raises(DeviceUnavailable):
            handle.submit(wire.CMD_PING)

    def test_device_error_reply_raises(self):
        handle = backend_connect("sim")
        with pytest.raises(DeviceError) as excinfo:
            handle.submit(wire.CMD_MOVE_ARM, target=2)
        assert excinfo.value.code == "bad-target"

    def test_one_command_in_flight_at_a_time(self):
        handle = backend_connect("sim")
        sim = handle.world
        active = 0
        overlap = []
        original = sim.handle

        def observing(cmd):
            nonlocal active
            active += 1
            overlap.append(active)
            try:
                return original(cmd)
            finally:
                active -= 1

        sim.handle = observing
        threads = [
            threading.Thread(
                target=lambda: [handle.submit(wire.CMD_PING) for _ in range(50)]
            )
            for _ in range(8)
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert len(overlap) == 400
        assert max(overlap) == 1


class TestExternalBackend:
    @staticmethod
    def serve_hub(sock, config=None):
        """Minimal 'real hub': a socket peer speaking the frame protocol."""
        sim = RobotSimulator(config or SimulatorConfig())
        transport = StreamTransport(sock)

        def run():
            while True:
                try:
                    cmd = wire.decode_frame(transport.recv_frame())
                    transport.send_frame(wire.encode_frame(sim.handle(cmd)))
                except Exception:
                    return

        thread = threading.Thread(target=run, daemon=True)
        thread.start()
        return thread

    def test_socket_endpoint(self):
        ours, theirs = socket.socketpair()
        self.serve_hub(theirs)
        handle = backend_connect("external", endpoint=ours)
        assert handle.submit(wire.CMD_PING).kind == wire.REPLY_PONG
        reply = handle.submit(wire.CMD_READ_COLOR)
        assert 0 <= reply.args["value"] <= 255
        handle.close()

    def test_peer_gone_means_unavailable(self):
        ours, theirs = socket.socketpair()
        self.serve_hub(theirs)
        handle = backend_connect("external", endpoint=ours)
        handle.submit(wire.CMD_PING)
        theirs.close()
        with pytest.raises(DeviceUnavailable):
            handle.submit(wire.CMD_PING)
        assert handle.status == BackendStatus.RECONNECTING

    def test_callable_endpoint_supports_redial(self):
        listener = socket.create_server(("127.0.0.1", 0))
        host, port = listener.getsockname()

        def accept_loop():
            while True:
                try:
                    peer, _ = listener.accept()
                except OSError:
                    return
                self.serve_hub(peer)

        threading.Thread(target=accept_loop, daemon=True).start()

        handle = backend_connect(
            "external",
            endpoint=lambda: socket.create_connection((host, port)),
        )
        assert handle.submit(wire.CMD_PING).kind == wire.REPLY_PONG
        handle.transport.close()
        with pytest.raises(DeviceUnavailable):
            handle.submit(wire.CMD_PING)
        # re-dial happens on the next submit
        assert handle.submit(wire.CMD_PING).kind == wire.REPLY_PONG
        listener.close()

    def test_missing_endpoint(self):
        with pytest.raises(ConfigError):
            backend_connect("external")


def test_unknown_descriptor():
    with pytest.raises(ConfigError):
        backend_connect("bluetooth")


def test_sim_transport_is_a_real_codec_path():
    sim = RobotSimulator(SimulatorConfig())
    transport = SimTransport(sim)
    transport.send_frame(b'{"id": 9, "cmd": "ping", "args": {"t": 0}}\n')
    frame = transport.recv_frame()
    assert frame == b'{"id":9,"reply":"pong","args":{}}\n'
