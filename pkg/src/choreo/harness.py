"""Deterministic multi-location test runner.

Spawns one projection per location over counting-decorated endpoints,
collects each location's result or error, and bounds every blocking
receive with a global timeout so a broken protocol fails loudly instead
of hanging.  Every send in a projected program has a matching receive
by construction; the timeout is the detector for implementations that
break that guarantee.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

from .core import Choreography, InputBinder, Location, LocationSet, Projector
from .errors import CommunicationError
from .transport.base import TransportEndpoint
from .transport.counting import CountingEndpoint, TraceRecord
from .transport.inprocess import InProcessFabric

ChoreographyFactory = Callable[[InputBinder], Choreography]


@dataclass
class RunReport:
    """Outcome of running one choreography at every location."""

    locations: LocationSet
    results: dict[Location, Any] = field(default_factory=dict)
    errors: dict[Location, BaseException] = field(default_factory=dict)
    completed: dict[Location, bool] = field(default_factory=dict)
    trace: TraceRecord = field(default_factory=TraceRecord)
    duration: float = 0.0

    @property
    def ok(self) -> bool:
        return all(self.completed.get(loc, False) for loc in self.locations)

    def result(self, location: Location) -> Any:
        if location in self.errors:
            raise self.errors[location]
        return self.results[location]

    def blocked(self) -> list[tuple[Location, str | None]]:
        """Locations that died waiting, with the sender each was awaiting."""
        out = []
        for loc, error in self.errors.items():
            if isinstance(error, CommunicationError):
                out.append((loc, error.peer))
        return out

    def to_portable(self) -> dict:
        """Timestamp-free summary for golden-trace tests."""
        return {
            "completed": {loc.name: done for loc, done in sorted(
                self.completed.items(), key=lambda item: item[0].name)},
            "trace": self.trace.to_portable(),
        }


def run_all(
    factory: ChoreographyFactory,
    locations: LocationSet,
    *,
    timeout: float = 30.0,
    endpoints: Mapping[Location, TransportEndpoint] | None = None,
) -> RunReport:
    """Run one projection per location concurrently and join them all.

    `factory` receives an :class:`InputBinder` for each target and must
    return that target's instance of the choreography (located inputs
    wrapped for that point of view).  By default the run happens over a
    fresh in-process fabric whose receives inherit `timeout`; pass
    `endpoints` to reuse existing ones (e.g. an HTTP mesh).  All
    endpoints are wrapped in counting decorators sharing the report's
    trace.
    """
    trace = TraceRecord()
    if endpoints is None:
        fabric = InProcessFabric(locations, default_timeout=timeout)
        endpoints = {loc: fabric.endpoint(loc) for loc in locations}
    counted = {loc: CountingEndpoint(endpoints[loc], trace) for loc in locations}

    report = RunReport(locations=locations, trace=trace)
    lock = threading.Lock()

    def run_one(loc: Location) -> None:
        try:
            projector = Projector(loc, locations, counted[loc])
            choreography = factory(InputBinder(loc))
            result = projector.epp_and_run(choreography)
        except BaseException as exc:  # noqa: BLE001 (reported, not swallowed)
            with lock:
                report.errors[loc] = exc
                report.completed[loc] = False
            return
        with lock:
            report.results[loc] = result
            report.completed[loc] = True

    threads = [
        threading.Thread(target=run_one, args=(loc,), name=f"run-{loc.name}", daemon=True)
        for loc in locations
    ]
    started = time.monotonic()
    for thread in threads:
        thread.start()
    deadline = started + timeout + 5.0  # receives time out first; small join grace
    for thread in threads:
        thread.join(max(0.0, deadline - time.monotonic()))
    report.duration = time.monotonic() - started

    for loc in locations:
        if loc not in report.completed:
            report.errors[loc] = CommunicationError(
                f"projection at {loc.name} did not finish within the harness timeout"
            )
            report.completed[loc] = False
    return report


def assert_trace(
    report: RunReport | TraceRecord,
    expectations: list[tuple[str, str, int | Callable[[list[bytes]], bool]]],
) -> None:
    """Check per-pair expectations against a run's send ledger.

    Each expectation is ``(sender, receiver, count)`` for an exact
    envelope count or ``(sender, receiver, predicate)`` where the
    predicate judges the pair's payload sequence.  Raises
    AssertionError listing every expected-vs-actual discrepancy.
    """
    trace = report.trace if isinstance(report, RunReport) else report
    problems = []
    for sender, receiver, expected in expectations:
        payloads = trace.payloads(sender, receiver)
        if callable(expected):
            if not expected(payloads):
                problems.append(
                    f"{sender}->{receiver}: payloads {payloads!r} fail {expected!r}"
                )
        elif len(payloads) != expected:
            problems.append(
                f"{sender}->{receiver}: expected {expected} envelopes, saw {len(payloads)}"
            )
    if problems:
        ledger = {pair: len(seq) for pair, seq in trace.pair_sequences().items()}
        raise AssertionError(
            "trace expectations failed:\n  "
            + "\n  ".join(problems)
            + f"\nactual ledger: {ledger}"
        )
