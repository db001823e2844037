"""Benchmark runners: projection overhead in isolation and at system scale.

Three benchmarks, each pairing a choreographic implementation with a
handwritten twin over the same transport and wire format so the
difference between them is the projection layer alone:

* ``counter``: node-local loop; the choreographic variant wraps the
  initialization and every increment in `locally`.
* ``comm``: stream a payload between two in-process locations; the
  choreographic variant uses `comm`, the handwritten one calls the
  transport directly.
* ``kvs``: the replicated key-value store driven by a seeded random
  workload; responses of the two variants are verified equal in the
  same run before any timing is reported.

Wall-clock samples come from the monotonic clock; warm-up repetitions
are excluded.
"""

from __future__ import annotations

import hashlib
import statistics
import threading
import time
from dataclasses import dataclass
from typing import Any, Callable

from .. import wire
from ..core import Choreography, InputBinder, LocatedValue, Location, LocationSet, Projector
from ..errors import ConfigurationError
from ..protocols.kvs import (
    ReplicatedKv,
    random_requests,
    replay_reference,
    run_handwritten,
)
from ..transport.http import loopback_mesh
from ..transport.inprocess import InProcessFabric

DEFAULT_SEED = 1729
DEFAULT_WARMUP = 3

VARIANTS = ("handwritten", "choreographic")


@dataclass(frozen=True)
class BenchSample:
    bench: str
    variant: str
    iterations: int
    repetition: int
    duration_ns: int
    checksum: str

    def to_row(self) -> dict:
        return {
            "bench": self.bench,
            "variant": self.variant,
            "iterations": self.iterations,
            "repetition": self.repetition,
            "duration_ns": self.duration_ns,
            "checksum": self.checksum,
        }


def _digest(value: Any) -> str:
    return hashlib.sha256(wire.encode(value)).hexdigest()[:16]


def summarize(samples: list[BenchSample]) -> dict[str, dict[str, float]]:
    """Per-variant median and 10th/90th percentiles, in nanoseconds."""
    out: dict[str, dict[str, float]] = {}
    for variant in sorted({s.variant for s in samples}):
        durations = sorted(s.duration_ns for s in samples if s.variant == variant)
        quantiles = statistics.quantiles(durations, n=10, method="inclusive") if len(durations) > 1 else durations * 2
        out[variant] = {
            "runs": len(durations),
            "median_ns": statistics.median(durations),
            "p10_ns": quantiles[0],
            "p90_ns": quantiles[-1],
        }
    return out


# --- counter ----------------------------------------------------------------


class CounterChoreography(Choreography):
    """Single-location counter: `locally` for the init and each increment."""

    def __init__(self, at: Location, iterations: int):
        self.at = at
        self.location_set = LocationSet(at)
        self.result_owner = at
        self.iterations = iterations

    def run(self, op):
        count = op.locally(self.at, lambda un: 0)
        for _ in range(self.iterations):
            count = op.locally(self.at, lambda un, c=count: un.unwrap(c) + 1)
        return count


def run_handwritten_counter(iterations: int) -> int:
    count = 0
    for _ in range(iterations):
        count += 1
    return count


def bench_counter(
    iterations: int,
    variant: str,
    *,
    reps: int = 10,
    warmup: int = DEFAULT_WARMUP,
) -> list[BenchSample]:
    if iterations < 1:
        raise ConfigurationError("counter benchmark needs iterations >= 1")
    _check_variant(variant)
    alice = Location("alice")
    fabric = InProcessFabric(LocationSet(alice))
    endpoint = fabric.endpoint(alice)
    samples = []
    for rep in range(warmup + reps):
        if variant == "handwritten":
            started = time.perf_counter_ns()
            final = run_handwritten_counter(iterations)
            elapsed = time.perf_counter_ns() - started
        else:
            started = time.perf_counter_ns()
            projector = Projector(alice, LocationSet(alice), endpoint)
            final = projector.unwrap(
                projector.epp_and_run(CounterChoreography(alice, iterations))
            )
            elapsed = time.perf_counter_ns() - started
        if final != iterations:
            raise AssertionError(f"counter produced {final}, expected {iterations}")
        if rep >= warmup:
            samples.append(
                BenchSample("counter", variant, iterations, rep - warmup, elapsed, str(final))
            )
    return samples


# --- comm -------------------------------------------------------------------


class StreamChoreography(Choreography):
    """Moves one payload from source to sink `iterations` times."""

    def __init__(self, source: Location, sink: Location, payload: LocatedValue, iterations: int):
        self.source = source
        self.sink = sink
        self.location_set = LocationSet(source, sink)
        self.result_owner = sink
        self.payload = payload
        self.iterations = iterations

    def run(self, op):
        received = None
        for _ in range(self.iterations):
            received = op.comm(self.source, self.sink, self.payload)
        return received


def _run_pair(jobs: dict[Location, Callable[[], Any]]) -> dict[Location, Any]:
    """Run one callable per location concurrently; propagate the first failure."""
    results: dict[Location, Any] = {}
    failures: list[BaseException] = []

    def runner(loc: Location, job: Callable[[], Any]) -> None:
        try:
            results[loc] = job()
        except BaseException as exc:  # noqa: BLE001 (re-raised below)
            failures.append(exc)

    threads = [
        threading.Thread(target=runner, args=(loc, job), daemon=True)
        for loc, job in jobs.items()
    ]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()
    if failures:
        raise failures[0]
    return results


def bench_comm(
    iterations: int,
    *,
    reps: int = 10,
    warmup: int = DEFAULT_WARMUP,
    payload: str = "ping",
) -> list[BenchSample]:
    """Time both variants of the streaming exchange; returns all samples."""
    if iterations < 1:
        raise ConfigurationError("comm benchmark needs iterations >= 1")
    source, sink = Location("source"), Location("sink")
    pair = LocationSet(source, sink)
    fabric = InProcessFabric(pair)
    source_ep, sink_ep = fabric.endpoint(source), fabric.endpoint(sink)
    expected = wire.decode(wire.encode(payload))
    samples = []

    def handwritten() -> Any:
        def send_side():
            for _ in range(iterations):
                source_ep.send(sink.name, wire.encode(payload))

        def receive_side():
            received = None
            for _ in range(iterations):
                received = wire.decode(sink_ep.receive(source.name))
            return received

        return _run_pair({source: send_side, sink: receive_side})[sink]

    def choreographic() -> Any:
        def run_at(loc, endpoint):
            def job():
                projector = Projector(loc, pair, endpoint)
                binder = InputBinder(loc)
                choreography = StreamChoreography(
                    source, sink, binder.at(source, payload), iterations
                )
                return projector.epp_and_run(choreography)

            return job

        results = _run_pair({source: run_at(source, source_ep), sink: run_at(sink, sink_ep)})
        return Projector(sink, pair, sink_ep).unwrap(results[sink])

    runners = {"handwritten": handwritten, "choreographic": choreographic}
    for rep in range(warmup + reps):
        for variant in VARIANTS:
            started = time.perf_counter_ns()
            final = runners[variant]()
            elapsed = time.perf_counter_ns() - started
            if final != expected:
                raise AssertionError(f"{variant} delivered {final!r}, expected {expected!r}")
            if rep >= warmup:
                samples.append(
                    BenchSample(
                        "comm", variant, iterations, rep - warmup, elapsed, _digest(final)
                    )
                )
    return samples


# --- kvs --------------------------------------------------------------------


def _run_choreographic_kvs(endpoints, locations, requests):
    client, primary, backup = locations

    def run_at(loc):
        def job():
            projector = Projector(loc, LocationSet(*locations), endpoints[loc.name])
            binder = InputBinder(loc)
            choreography = ReplicatedKv(
                client, primary, backup, binder.at(client, requests), len(requests)
            )
            return projector.epp_and_run(choreography)

        return job

    results = _run_pair({loc: run_at(loc) for loc in locations})
    client_view = results[client]
    responses = Projector(
        client, LocationSet(*locations), endpoints[client.name]
    ).unwrap(client_view["responses"])
    return responses


def bench_kvs(
    request_count: int = 100,
    get_ratio: float = 0.5,
    transport: str = "http",
    *,
    reps: int = 100,
    seed: int = DEFAULT_SEED,
    warmup: int = DEFAULT_WARMUP,
) -> list[BenchSample]:
    """Drive both key-value store variants through one seeded workload.

    The two variants must answer identically (and match an independent
    replay) in every repetition; the first mismatch aborts with a
    differential report and no samples.
    """
    if transport not in ("in-process", "http"):
        raise ConfigurationError("kvs benchmark needs transport 'in-process' or 'http'")
    requests = random_requests(seed, request_count, get_ratio)
    expected_responses, _ = replay_reference(requests)
    locations = (Location("client"), Location("primary"), Location("backup"))
    location_set = LocationSet(*locations)

    if transport == "http":
        mesh = loopback_mesh(location_set)
        endpoints = {loc.name: mesh[loc] for loc in locations}
    else:
        fabric = InProcessFabric(location_set)
        endpoints = {loc.name: fabric.endpoint(loc) for loc in locations}

    samples = []
    try:
        for rep in range(warmup + reps):
            timings = {}
            outcomes = {}
            for variant in VARIANTS:
                started = time.perf_counter_ns()
                if variant == "handwritten":
                    responses, _, _ = run_handwritten(endpoints, requests)
                else:
                    responses = _run_choreographic_kvs(endpoints, locations, requests)
                timings[variant] = time.perf_counter_ns() - started
                outcomes[variant] = responses
            if outcomes["handwritten"] != outcomes["choreographic"]:
                raise AssertionError(
                    "kvs variants disagree:\n"
                    f"  handwritten:   {outcomes['handwritten']!r}\n"
                    f"  choreographic: {outcomes['choreographic']!r}"
                )
            if outcomes["choreographic"] != expected_responses:
                raise AssertionError(
                    "kvs responses diverge from the reference replay:\n"
                    f"  observed: {outcomes['choreographic']!r}\n"
                    f"  expected: {expected_responses!r}"
                )
            if rep >= warmup:
                for variant in VARIANTS:
                    samples.append(
                        BenchSample(
                            "kvs",
                            variant,
                            request_count,
                            rep - warmup,
                            timings[variant],
                            _digest(outcomes[variant]),
                        )
                    )
    finally:
        if transport == "http":
            for endpoint in endpoints.values():
                endpoint.close()
    return samples


def _check_variant(variant: str) -> None:
    if variant not in VARIANTS:
        raise ConfigurationError(f"unknown variant {variant!r}; pick one of {VARIANTS}")
