"""Benchmark command line.

    choreo-bench <counter|comm|kvs> [options]

Common options: --variant, --iterations, --requests, --get-ratio,
--transport, --reps, --seed, --warmup, --output {human,json,csv},
--out-file PATH, --config PATH.  A JSON config file may supply any of
the same keys (without dashes); explicit flags win.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from ..errors import ConfigurationError
from .runners import (
    DEFAULT_SEED,
    DEFAULT_WARMUP,
    BenchSample,
    bench_comm,
    bench_counter,
    bench_kvs,
    summarize,
)

_DEFAULTS = {
    "variant": "both",
    "iterations": 100_000,
    "requests": 100,
    "get_ratio": 0.5,
    "transport": None,
    "reps": 10,
    "seed": DEFAULT_SEED,
    "warmup": DEFAULT_WARMUP,
    "output": "human",
    "out_file": None,
}


@dataclass
class BenchSpec:
    """A fully resolved benchmark request."""

    name: str
    variant: str
    iterations: int
    requests: int
    get_ratio: float
    transport: str | None
    reps: int
    seed: int
    warmup: int
    output: str
    out_file: str | None

    def __post_init__(self):
        if self.name not in ("counter", "comm", "kvs"):
            raise ConfigurationError(f"unknown benchmark {self.name!r}")
        if self.variant not in ("handwritten", "choreographic", "both"):
            raise ConfigurationError(f"unknown variant {self.variant!r}")
        if self.output not in ("human", "json", "csv"):
            raise ConfigurationError(f"unknown output format {self.output!r}")
        if self.name == "kvs" and self.transport not in ("in-process", "http"):
            raise ConfigurationError(
                "the kvs benchmark needs an explicit --transport (in-process or http)"
            )


def build_spec(argv: list[str]) -> BenchSpec:
    parser = argparse.ArgumentParser(prog="choreo-bench", description=__doc__)
    parser.add_argument("name", choices=["counter", "comm", "kvs"])
    parser.add_argument("--variant", choices=["handwritten", "choreographic", "both"])
    parser.add_argument("--iterations", type=int, help="loop count for counter/comm")
    parser.add_argument("--requests", type=int, help="workload size for kvs")
    parser.add_argument("--get-ratio", type=float, dest="get_ratio")
    parser.add_argument("--transport", choices=["in-process", "http"])
    parser.add_argument("--reps", type=int, help="timed repetitions")
    parser.add_argument("--seed", type=int, help="workload seed (kvs)")
    parser.add_argument("--warmup", type=int, help="untimed warm-up repetitions")
    parser.add_argument("--output", choices=["human", "json", "csv"])
    parser.add_argument("--out-file", dest="out_file")
    parser.add_argument("--config", help="JSON file supplying any of the above keys")
    args = parser.parse_args(argv)

    resolved = dict(_DEFAULTS)
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot load config {args.config}: {exc}") from exc
        unknown = set(loaded) - set(_DEFAULTS)
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
        resolved.update(loaded)
    for key in _DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            resolved[key] = value
    return BenchSpec(name=args.name, **resolved)


def run_spec(spec: BenchSpec) -> list[BenchSample]:
    if spec.name == "counter":
        variants = ["handwritten", "choreographic"] if spec.variant == "both" else [spec.variant]
        samples = []
        for variant in variants:
            samples.extend(
                bench_counter(spec.iterations, variant, reps=spec.reps, warmup=spec.warmup)
            )
        return samples
    if spec.name == "comm":
        # Always a paired comparison; the variant flag does not apply.
        return bench_comm(spec.iterations, reps=spec.reps, warmup=spec.warmup)
    return bench_kvs(
        spec.requests,
        spec.get_ratio,
        spec.transport,
        reps=spec.reps,
        seed=spec.seed,
        warmup=spec.warmup,
    )


def render(samples: list[BenchSample], output: str) -> str:
    rows = [sample.to_row() for sample in samples]
    if output == "json":
        return json.dumps(rows, indent=2)
    if output == "csv":
        buffer = io.StringIO()
        writer = csv.DictWriter(
            buffer, fieldnames=["bench", "variant", "iterations", "repetition", "duration_ns", "checksum"]
        )
        writer.writeheader()
        writer.writerows(rows)
        return buffer.getvalue()
    lines = [
        f"{'variant':<14} {'iterations':>10} {'rep':>4} {'duration_ns':>14} checksum"
    ]
    for row in rows:
        lines.append(
            f"{row['variant']:<14} {row['iterations']:>10} {row['repetition']:>4} "
            f"{row['duration_ns']:>14} {row['checksum']}"
        )
    lines.append("")
    for variant, stats in summarize(samples).items():
        lines.append(
            f"{variant}: runs={stats['runs']} median={stats['median_ns'] / 1e6:.3f}ms "
            f"p10={stats['p10_ns'] / 1e6:.3f}ms p90={stats['p90_ns'] / 1e6:.3f}ms"
        )
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    try:
        spec = build_spec(sys.argv[1:] if argv is None else argv)
        samples = run_spec(spec)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = render(samples, spec.output)
    if spec.out_file:
        Path(spec.out_file).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
