"""Exception hierarchy shared across the whole package.

Every error that crosses a module boundary derives from RobolabError so
callers (service layer, CLI) can map them to status codes / exit codes in
one place.
"""


class RobolabError(Exception):
    """Base class for all domain errors."""


# --- mlcore -----------------------------------------------------------

class NoTrainingData(RobolabError):
    """Classification requested against an empty dataset."""


class InvalidK(RobolabError):
    """Neighbor count outside the valid range for the dataset."""


class InsufficientData(RobolabError):
    """Too few points for the requested computation."""


class DegenerateX(RobolabError):
    """All x values identical; the best-fit line is not unique."""


class UninvertibleLine(RobolabError):
    """Line slope too close to zero to solve for a speed."""


# --- devices ----------------------------------------------------------

class ProtocolError(RobolabError):
    """Malformed wire frame. ``offset`` is the byte position of the fault."""

    def __init__(self, message: str, offset: int = 0):
        super().__init__(message)
        self.offset = offset


class ConfigError(RobolabError):
    """Unusable backend descriptor or simulator configuration."""


class DeviceUnavailable(RobolabError):
    """No connected device, or the transport dropped mid-command."""


class DeviceError(RobolabError):
    """The device answered with an error reply."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


# --- sessions ---------------------------------------------------------

class WrongMode(RobolabError):
    """Operation not allowed in the session's current mode."""


class WrongRunState(RobolabError):
    """Illegal run-state transition or step outside Running."""


class NotFound(RobolabError):
    """Unknown id (sample, session, ...)."""
