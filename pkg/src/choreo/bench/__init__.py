"""Benchmarks comparing choreographic and handwritten implementations."""

from .runners import (
    DEFAULT_SEED,
    BenchSample,
    CounterChoreography,
    StreamChoreography,
    bench_comm,
    bench_counter,
    bench_kvs,
    run_handwritten_counter,
    summarize,
)

__all__ = [
    "DEFAULT_SEED",
    "BenchSample",
    "CounterChoreography",
    "StreamChoreography",
    "bench_comm",
    "bench_counter",
    "bench_kvs",
    "run_handwritten_counter",
    "summarize",
]
