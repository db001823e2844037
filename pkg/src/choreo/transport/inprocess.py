"""In-process transport: one shared fabric of per-pair FIFO queues.

Models each location as a thread of the same process; endpoints share
one in-memory fabric and may be used concurrently, one thread per
location.
"""

from __future__ import annotations

import queue

from ..core import LocationSet, Location
from ..errors import CommunicationError, ConfigurationError
from .base import DEFAULT_RECEIVE_TIMEOUT, TransportEndpoint


class InProcessEndpoint(TransportEndpoint):
    def __init__(self, self_name: str, peer_names: frozenset[str], fabric: "InProcessFabric",
                 default_timeout: float):
        self.self_name = self_name
        self.peer_names = peer_names
        self.default_timeout = default_timeout
        self._fabric = fabric
        self._inboxes: dict[str, queue.SimpleQueue] = {
            name: queue.SimpleQueue() for name in peer_names
        }

    def send(self, to: str, payload: bytes) -> None:
        if to not in self.peer_names:
            raise ConfigurationError(f"{self.self_name} has no peer named {to!r}")
        self._fabric._deliver(self.self_name, to, payload)

    def receive(self, from_name: str, timeout: float | None = None) -> bytes:
        if from_name not in self.peer_names:
            raise ConfigurationError(f"{self.self_name} has no peer named {from_name!r}")
        bound = self.default_timeout if timeout is None else timeout
        try:
            return self._inboxes[from_name].get(timeout=bound)
        except queue.Empty:
            raise CommunicationError(
                f"{self.self_name} received nothing from {from_name} within {bound:g}s",
                peer=from_name,
            ) from None

    def _enqueue(self, sender: str, payload: bytes) -> None:
        self._inboxes[sender].put(payload)


class InProcessFabric:
    """Registry wiring one endpoint per location over shared queues."""

    def __init__(self, locations: LocationSet, *, default_timeout: float = DEFAULT_RECEIVE_TIMEOUT):
        if len(locations) == 0:
            raise ConfigurationError("an in-process fabric needs at least one location")
        names = set(locations.names)
        self._endpoints = {
            loc.name: InProcessEndpoint(
                loc.name, frozenset(names - {loc.name}), self, default_timeout
            )
            for loc in locations
        }

    def endpoint(self, location: Location) -> InProcessEndpoint:
        try:
            return self._endpoints[location.name]
        except KeyError:
            raise ConfigurationError(f"no endpoint for {location.name}") from None

    def _deliver(self, sender: str, receiver: str, payload: bytes) -> None:
        self._endpoints[receiver]._enqueue(sender, payload)
