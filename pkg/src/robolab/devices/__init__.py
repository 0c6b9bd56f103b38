"""Device gateway: framed wire protocol, simulator, and transport seam."""

from .gateway import (
    BackendStatus,
    DeviceHandle,
    SimTransport,
    StreamTransport,
    TransportClosed,
    backend_connect,
)
from .protocol import DeviceCommand, DeviceReply, decode_frame, encode_frame
from .simulator import (
    REFERENCE_DISPLACEMENTS,
    REFERENCE_FRUIT_PARAMS,
    FruitClassParams,
    FruitKind,
    RobotSimulator,
    SimulatorConfig,
    config_from_dict,
    config_to_dict,
    sim_launch,
    sim_move_arm,
    sim_read_fruit,
)

__all__ = [
    "BackendStatus",
    "DeviceCommand",
    "DeviceHandle",
    "DeviceReply",
    "FruitClassParams",
    "FruitKind",
    "REFERENCE_DISPLACEMENTS",
    "REFERENCE_FRUIT_PARAMS",
    "RobotSimulator",
    "SimTransport",
    "SimulatorConfig",
    "StreamTransport",
    "TransportClosed",
    "backend_connect",
    "config_from_dict",
    "config_to_dict",
    "decode_frame",
    "encode_frame",
    "sim_launch",
    "sim_move_arm",
    "sim_read_fruit",
]
