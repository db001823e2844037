"""Message transports: in-process queues, loopback/remote HTTP, counting."""

from .base import DEFAULT_RECEIVE_TIMEOUT, Envelope, TransportEndpoint
from .counting import CountingEndpoint, TraceEntry, TraceRecord
from .http import HttpEndpoint, HttpTransportConfig, loopback_mesh
from .inprocess import InProcessEndpoint, InProcessFabric

__all__ = [
    "DEFAULT_RECEIVE_TIMEOUT",
    "Envelope",
    "TransportEndpoint",
    "CountingEndpoint",
    "TraceEntry",
    "TraceRecord",
    "HttpEndpoint",
    "HttpTransportConfig",
    "loopback_mesh",
    "InProcessEndpoint",
    "InProcessFabric",
]
