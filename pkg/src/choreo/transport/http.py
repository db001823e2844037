"""HTTP transport: one small listener per location, POST per envelope.

Wire protocol, bit-exact:

    POST /msg
    X-Sender: <location name>     (required)
    X-Receiver: <location name>   (optional sanity check)
    body = canonical serialization of one value, UTF-8

A 200-class response acknowledges that the envelope was enqueued into
the receiver's per-sender inbox; malformed requests are rejected with a
400-class status and leave the inbox unchanged.  There is no sender
authentication: a trusted network is assumed.
"""

from __future__ import annotations

import http.client
import json
import queue
import socket
import threading
import time
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from ..core import Location, LocationSet
from ..errors import CommunicationError, ConfigurationError
from .base import DEFAULT_RECEIVE_TIMEOUT, TransportEndpoint


@dataclass
class HttpTransportConfig:
    """Addresses and tuning for one location's HTTP endpoint.

    Every location in the choreography's set except `self_name` needs a
    peer address entry.  Addresses are ``host:port``.
    """

    self_name: str
    listen: str
    peers: dict[str, str] = field(default_factory=dict)
    connect_timeout: float = 10.0
    read_timeout: float = 10.0
    retries: int = 5
    backoff: float = 0.1
    receive_timeout: float = DEFAULT_RECEIVE_TIMEOUT

    @classmethod
    def from_file(cls, path: str | Path) -> "HttpTransportConfig":
        """Load from a JSON file with the same keys as the constructor."""
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot load transport config {path}: {exc}") from exc
        return cls.from_pairs(_flatten(raw))

    @classmethod
    def from_pairs(cls, pairs) -> "HttpTransportConfig":
        """Build from environment-style key=value pairs.

        Accepts a mapping or an iterable of ``key=value`` strings. Keys:
        ``self``, ``listen``, ``peer.<name>``, ``timeout.connect``,
        ``timeout.read``, ``timeout.receive``, ``retry.attempts``,
        ``retry.backoff``.
        """
        if not isinstance(pairs, dict):
            parsed = {}
            for item in pairs:
                key, sep, value = item.partition("=")
                if not sep:
                    raise ConfigurationError(f"malformed key=value pair: {item!r}")
                parsed[key.strip()] = value.strip()
            pairs = parsed
        self_name = pairs.get("self")
        listen = pairs.get("listen")
        if not self_name or not listen:
            raise ConfigurationError("transport config needs both 'self' and 'listen'")
        config = cls(self_name=self_name, listen=listen)
        for key, value in pairs.items():
            if key.startswith("peer."):
                config.peers[key[len("peer."):]] = value
            elif key == "timeout.connect":
                config.connect_timeout = float(value)
            elif key == "timeout.read":
                config.read_timeout = float(value)
            elif key == "timeout.receive":
                config.receive_timeout = float(value)
            elif key == "retry.attempts":
                config.retries = int(value)
            elif key == "retry.backoff":
                config.backoff = float(value)
            elif key not in ("self", "listen"):
                raise ConfigurationError(f"unknown transport config key {key!r}")
        return config


def _flatten(raw: dict) -> dict:
    flat = {}
    for key, value in raw.items():
        if key == "peers":
            for name, addr in value.items():
                flat[f"peer.{name}"] = addr
        elif isinstance(value, dict):
            for sub, item in value.items():
                flat[f"{key}.{sub}"] = str(item)
        else:
            flat[key] = str(value)
    return flat


def _split_address(address: str) -> tuple[str, int]:
    host, sep, port = address.rpartition(":")
    if not sep:
        raise ConfigurationError(f"address must be host:port, got {address!r}")
    return host, int(port)


class _InboundServer(ThreadingHTTPServer):
    daemon_threads = True


class _InboundHandler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    disable_nagle_algorithm = True  # small envelopes; latency beats batching

    def do_POST(self):  # noqa: N802 (stdlib handler name)
        endpoint: HttpEndpoint = self.server.endpoint  # type: ignore[attr-defined]
        length = int(self.headers.get("Content-Length", 0))
        body = self.rfile.read(length)
        if self.path != "/msg":
            self._respond(404, "unknown path")
            return
        sender = self.headers.get("X-Sender")
        receiver = self.headers.get("X-Receiver")
        if not sender:
            self._respond(400, "missing X-Sender header")
            return
        if sender not in endpoint.peer_names:
            self._respond(400, f"unknown sender {sender}")
            return
        if receiver is not None and receiver != endpoint.self_name:
            self._respond(400, f"misrouted envelope for {receiver}")
            return
        endpoint._enqueue(sender, body)
        self._respond(200, "enqueued")

    def _respond(self, status: int, text: str) -> None:
        data = text.encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, *args) -> None:
        pass  # keep test output clean


class HttpEndpoint(TransportEndpoint):
    """Message endpoint backed by a loopback-friendly HTTP listener."""

    def __init__(self, config: HttpTransportConfig):
        self.self_name = config.self_name
        self.peer_names = frozenset(config.peers)
        self.default_timeout = config.receive_timeout
        self._config = config
        self._peer_addresses = dict(config.peers)
        self._inboxes: dict[str, queue.SimpleQueue] = {
            name: queue.SimpleQueue() for name in config.peers
        }
        self._connections: dict[str, http.client.HTTPConnection] = {}
        self._connection_locks: dict[str, threading.Lock] = {
            name: threading.Lock() for name in config.peers
        }
        host, port = _split_address(config.listen)
        try:
            self._server = _InboundServer((host, port), _InboundHandler)
        except OSError as exc:
            raise ConfigurationError(f"cannot bind {config.listen}: {exc}") from exc
        self._server.endpoint = self  # type: ignore[attr-defined]
        self._serve_thread = threading.Thread(
            target=self._server.serve_forever, name=f"http-{self.self_name}", daemon=True
        )
        self._serve_thread.start()
        self._closed = False

    @property
    def listen_address(self) -> str:
        host, port = self._server.server_address[:2]
        return f"{host}:{port}"

    def _register_peers(self, peers: dict[str, str]) -> None:
        # Two-phase wiring for meshes whose ports are assigned at bind time.
        self._peer_addresses.update(peers)
        for name in peers:
            self._inboxes.setdefault(name, queue.SimpleQueue())
            self._connection_locks.setdefault(name, threading.Lock())
        self.peer_names = frozenset(self._peer_addresses)

    def send(self, to: str, payload: bytes) -> None:
        if to not in self.peer_names:
            raise ConfigurationError(f"{self.self_name} has no peer named {to!r}")
        headers = {
            "X-Sender": self.self_name,
            "X-Receiver": to,
            "Content-Type": "application/json; charset=utf-8",
        }
        config = self._config
        last_error: Exception | None = None
        with self._connection_locks[to]:
            for attempt in range(config.retries):
                if attempt:
                    time.sleep(config.backoff * (2 ** (attempt - 1)))
                try:
                    conn = self._connection(to)
                    conn.request("POST", "/msg", body=payload, headers=headers)
                    response = conn.getresponse()
                    body = response.read()  # drain so the connection can be reused
                except (OSError, http.client.HTTPException) as exc:
                    last_error = exc
                    self._drop_connection(to)
                    continue
                if 200 <= response.status < 300:
                    return
                if 400 <= response.status < 500:
                    raise CommunicationError(
                        f"{to} rejected envelope from {self.self_name}: "
                        f"{response.status} {body.decode('utf-8', 'replace')}",
                        peer=to,
                    )
                last_error = CommunicationError(
                    f"{to} answered {response.status}", peer=to
                )
                self._drop_connection(to)
        raise CommunicationError(
            f"send from {self.self_name} to {to} failed after "
            f"{config.retries} attempts: {last_error}",
            peer=to,
        )

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

    def close(self) -> None:
        if self._closed:
            return
        self._closed = True
        self._server.shutdown()
        self._server.server_close()
        for name in list(self._connections):
            self._drop_connection(name)

    def _enqueue(self, sender: str, payload: bytes) -> None:
        self._inboxes[sender].put(payload)

    def _connection(self, to: str) -> http.client.HTTPConnection:
        conn = self._connections.get(to)
        if conn is None:
            host, port = _split_address(self._peer_addresses[to])
            conn = http.client.HTTPConnection(host, port, timeout=self._config.read_timeout)
            conn.connect()
            conn.sock.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
            self._connections[to] = conn
        return conn

    def _drop_connection(self, to: str) -> None:
        conn = self._connections.pop(to, None)
        if conn is not None:
            try:
                conn.close()
            except OSError:
                pass


def loopback_mesh(
    locations: LocationSet,
    *,
    receive_timeout: float = DEFAULT_RECEIVE_TIMEOUT,
    retries: int = 5,
    backoff: float = 0.1,
) -> dict[Location, HttpEndpoint]:
    """Start one loopback endpoint per location on ephemeral ports.

    Ports are assigned by the OS, so the mesh is wired in two phases:
    bind all listeners, then hand every endpoint its peers' addresses.
    """
    endpoints: dict[Location, HttpEndpoint] = {}
    try:
        for loc in locations:
            config = HttpTransportConfig(
                self_name=loc.name,
                listen="127.0.0.1:0",
                receive_timeout=receive_timeout,
                retries=retries,
                backoff=backoff,
            )
            endpoints[loc] = HttpEndpoint(config)
        for loc, endpoint in endpoints.items():
            endpoint._register_peers(
                {
                    other.name: endpoints[other].listen_address
                    for other in locations
                    if other != loc
                }
            )
    except Exception:
        for endpoint in endpoints.values():
            endpoint.close()
        raise
    return endpoints
