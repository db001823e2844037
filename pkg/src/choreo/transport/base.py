"""Transport contract: per-ordered-pair FIFO send and blocking receive."""

from __future__ import annotations

import abc
from dataclasses import dataclass

DEFAULT_RECEIVE_TIMEOUT = 30.0


@dataclass(frozen=True)
class Envelope:
    """One message: opaque payload bytes between two named locations."""

    sender: str
    receiver: str
    payload: bytes


class TransportEndpoint(abc.ABC):
    """One location's attachment to a message substrate.

    Implementations must deliver envelopes between a fixed ordered pair
    of locations in send order, and must tolerate concurrent use of
    `send` and `receive` from different projection runs.  Envelopes
    from distinct senders never block each other.
    """

    self_name: str
    peer_names: frozenset[str]
    default_timeout: float

    @abc.abstractmethod
    def send(self, to: str, payload: bytes) -> None:
        """Deliver payload so the peer's ``receive(self_name)`` yields it."""

    @abc.abstractmethod
    def receive(self, from_name: str, timeout: float | None = None) -> bytes:
        """Block until an envelope from `from_name` arrives; return its payload.

        `timeout` falls back to the endpoint default; expiry raises
        :class:`CommunicationError` naming the absent sender, which is
        how broken protocols surface instead of hanging.
        """

    def close(self) -> None:
        """Release any OS resources.  Safe to call more than once."""

    def __enter__(self) -> "TransportEndpoint":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()
