"""In-process fabric: FIFO delivery, sender isolation, counting decorator."""

from __future__ import annotations

import threading
import time

import pytest

from choreo import Location, LocationSet
from choreo.errors import CommunicationError, ConfigurationError
from choreo.transport import CountingEndpoint, InProcessFabric, TraceRecord


def make_pair(timeout=2.0):
    a, b = Location("a"), Location("b")
    fabric = InProcessFabric(LocationSet(a, b), default_timeout=timeout)
    return fabric.endpoint(a), fabric.endpoint(b)


def test_send_receive_round_trip():
    ea, eb = make_pair()
    ea.send("b", b"payload")
    assert eb.receive("a") == b"payload"


def test_per_pair_fifo():
    ea, eb = make_pair()
    ea.send("b", b"1")
    ea.send("b", b"2")
    assert eb.receive("a") == b"1"
    assert eb.receive("a") == b"2"


def test_interleaved_senders_do_not_block_each_other():
    a, b, c = Location("a"), Location("b"), Location("c")
    fabric = InProcessFabric(LocationSet(a, b, c), default_timeout=2.0)
    # c's message arrives first, but receive(a) must yield a's message
    fabric.endpoint(c).send("b", b"from c")
    fabric.endpoint(a).send("b", b"from a")
    eb = fabric.endpoint(b)
    assert eb.receive("a") == b"from a"
    assert eb.receive("c") == b"from c"


def test_full_mesh_round_trips():
    locations = [Location(name) for name in ("a", "b", "c")]
    fabric = InProcessFabric(LocationSet(*locations), default_timeout=2.0)
    for sender in locations:
        for receiver in locations:
            if sender == receiver:
                continue
            payload = f"{sender.name}->{receiver.name}".encode()
            fabric.endpoint(sender).send(receiver.name, payload)
            assert fabric.endpoint(receiver).receive(sender.name) == payload


def test_singleton_has_no_peers():
    alice = Location("alice")
    endpoint = InProcessFabric(LocationSet(alice)).endpoint(alice)
    assert endpoint.peer_names == frozenset()
    with pytest.raises(ConfigurationError):
        endpoint.send("bob", b"x")


def test_empty_fabric_is_rejected():
    with pytest.raises(ConfigurationError):
        InProcessFabric(LocationSet())


def test_unknown_peer_is_a_configuration_error():
    ea, _ = make_pair()
    with pytest.raises(ConfigurationError):
        ea.send("mallory", b"x")
    with pytest.raises(ConfigurationError):
        ea.receive("mallory")


def test_receive_timeout_names_the_absent_sender():
    _, eb = make_pair()
    started = time.monotonic()
    with pytest.raises(CommunicationError) as excinfo:
        eb.receive("a", timeout=0.2)
    assert time.monotonic() - started >= 0.2
    assert excinfo.value.peer == "a"
    assert "a" in str(excinfo.value)


def test_concurrent_send_receive():
    ea, eb = make_pair()
    payloads = [str(i).encode() for i in range(200)]

    def pump():
        for p in payloads:
            ea.send("b", p)

    thread = threading.Thread(target=pump)
    thread.start()
    received = [eb.receive("a") for _ in payloads]
    thread.join()
    assert received == payloads


class TestCountingDecorator:
    def test_records_sends_and_receives(self):
        ea, eb = make_pair()
        trace = TraceRecord()
        ca, cb = CountingEndpoint(ea, trace), CountingEndpoint(eb, trace)
        ca.send("b", b"x")
        assert cb.receive("a") == b"x"
        assert trace.count("a", "b") == 1
        assert trace.payloads("a", "b") == [b"x"]
        assert trace.received_pair_sequences() == {("a", "b"): [b"x"]}

    def test_empty_run_has_empty_trace(self):
        ea, _ = make_pair()
        counted = CountingEndpoint(ea)
        assert len(counted.trace) == 0

    def test_transparency(self):
        # Same exchanges with and without the decorator give the same bytes.
        def exchange(endpoint_a, endpoint_b):
            endpoint_a.send("b", b"one")
            endpoint_a.send("b", b"two")
            return [endpoint_b.receive("a"), endpoint_b.receive("a")]

        plain = exchange(*make_pair())
        ea, eb = make_pair()
        trace = TraceRecord()
        decorated = exchange(CountingEndpoint(ea, trace), CountingEndpoint(eb, trace))
        assert plain == decorated == [b"one", b"two"]

    def test_after_send_window(self):
        ea, eb = make_pair()
        trace = TraceRecord()
        ca, cb = CountingEndpoint(ea, trace), CountingEndpoint(eb, trace)
        ca.send("b", b"marker")
        ca.send("b", b"late-1")
        cb.send("a", b"late-2")
        window = trace.after_send("a", "b")
        assert [e.payload for e in window.sends] == [b"late-1", b"late-2"]
        assert window.count("b", "a") == 1

    def test_delegates_errors(self):
        ea, _ = make_pair()
        counted = CountingEndpoint(ea)
        with pytest.raises(ConfigurationError):
            counted.send("mallory", b"x")
        assert len(counted.trace) == 0  # failed send is not recorded
