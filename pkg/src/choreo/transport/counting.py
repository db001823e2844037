"""Counting decorator: records traffic for trace assertions in tests."""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass

from .base import TransportEndpoint


@dataclass(frozen=True)
class TraceEntry:
    sender: str
    receiver: str
    payload: bytes
    timestamp: float  # monotonic; excluded from equality-style assertions


class TraceRecord:
    """Append-only ledger of sends and deliveries.

    The send log is the authoritative trace (per-pair FIFO makes its
    per-pair order the delivery order); receives are kept alongside so
    duality can be asserted.  Entries from concurrent runs interleave
    under a lock, giving a total order consistent with each pair's
    FIFO order.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self.sends: list[TraceEntry] = []
        self.receives: list[TraceEntry] = []

    def record_send(self, sender: str, receiver: str, payload: bytes) -> None:
        entry = TraceEntry(sender, receiver, payload, time.monotonic())
        with self._lock:
            self.sends.append(entry)

    def record_receive(self, sender: str, receiver: str, payload: bytes) -> None:
        entry = TraceEntry(sender, receiver, payload, time.monotonic())
        with self._lock:
            self.receives.append(entry)

    def count(self, sender: str, receiver: str) -> int:
        return sum(1 for e in self.sends if e.sender == sender and e.receiver == receiver)

    def payloads(self, sender: str, receiver: str) -> list[bytes]:
        return [e.payload for e in self.sends if e.sender == sender and e.receiver == receiver]

    def pair_sequences(self) -> dict[tuple[str, str], list[bytes]]:
        out: dict[tuple[str, str], list[bytes]] = {}
        for e in self.sends:
            out.setdefault((e.sender, e.receiver), []).append(e.payload)
        return out

    def received_pair_sequences(self) -> dict[tuple[str, str], list[bytes]]:
        out: dict[tuple[str, str], list[bytes]] = {}
        for e in self.receives:
            out.setdefault((e.sender, e.receiver), []).append(e.payload)
        return out

    def after_send(self, sender: str, receiver: str) -> "TraceRecord":
        """Sub-trace of everything sent after the first (sender, receiver) envelope.

        Protocol steps themselves serve as window markers; e.g. "after
        the contribution was sent" is the window after that envelope.
        """
        window = TraceRecord()
        seen = False
        for e in self.sends:
            if seen:
                window.sends.append(e)
            elif e.sender == sender and e.receiver == receiver:
                seen = True
        return window

    def __len__(self) -> int:
        return len(self.sends)

    def to_portable(self) -> list[dict]:
        """Timestamp-free view of the send log for golden-trace tests."""
        return [
            {"sender": e.sender, "receiver": e.receiver, "payload": e.payload.decode("utf-8")}
            for e in self.sends
        ]


class CountingEndpoint(TransportEndpoint):
    """Forwards everything to an inner endpoint, recording traffic.

    Never alters payloads, results, or ordering; several endpoints may
    share one TraceRecord to build a whole-run ledger.
    """

    def __init__(self, inner: TransportEndpoint, trace: TraceRecord | None = None):
        self._inner = inner
        self.trace = trace if trace is not None else TraceRecord()
        self.self_name = inner.self_name
        self.peer_names = inner.peer_names
        self.default_timeout = inner.default_timeout

    def send(self, to: str, payload: bytes) -> None:
        self._inner.send(to, payload)
        self.trace.record_send(self.self_name, to, payload)

    def receive(self, from_name: str, timeout: float | None = None) -> bytes:
        payload = self._inner.receive(from_name, timeout)
        self.trace.record_receive(from_name, self.self_name, payload)
        return payload

    def close(self) -> None:
        self._inner.close()
