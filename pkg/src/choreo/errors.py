"""Exception taxonomy for choreography execution and message transport.

Each class is a stable identity that tests and callers may dispatch on;
messages are human-readable detail, not part of the contract.
"""


class ChoreoError(Exception):
    """Base class for every error raised by this library."""


class ScopeViolationError(ChoreoError):
    """A located value was opened (or claimed) outside its owner's scope."""


class LocationSetViolationError(ChoreoError):
    """An operator named a location outside the active location set."""


class SelfCommunicationError(ChoreoError):
    """comm() was asked to move a value from a location to itself."""


class EnclaveScopeError(ChoreoError):
    """An enclave's location subset is inconsistent with its context."""


class ConfigurationError(ChoreoError):
    """Invalid wiring: projector target, transport peers, or input binding."""


class CommunicationError(ChoreoError):
    """Message transport failed or timed out.

    `peer` names the other side of the failed exchange (the awaited
    sender on a receive timeout, the destination on a send failure).
    """

    def __init__(self, message: str, *, peer: str | None = None):
        super().__init__(message)
        self.peer = peer


class WireFormatError(ChoreoError):
    """A payload could not be canonically encoded or decoded."""


class InternalInvariantError(ChoreoError):
    """A state the projection rules make unreachable was observed."""
