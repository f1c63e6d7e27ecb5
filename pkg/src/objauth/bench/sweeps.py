"""Parameter sweeps: login latency vs object size, digest time vs content."""
from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from ..core import object_digest
from .runner import BenchConfig, run_load


@dataclass(frozen=True)
class SizePoint:
    size_bytes: int
    mean_latency_ms: float
    requests: int


@dataclass(frozen=True)
class TypeTiming:
    label: str
    mean_ms: float
    stdev_ms: float
    iterations: int


def sweep_object_size(
    sizes: Sequence[int],
    scheme: str,
    *,
    server_url: str = "http://127.0.0.1:8000",
    requests_per_size: int = 20,
    clients: int = 1,
    throttle_bps: int | None = None,
    seed: int = 0,
    out_path: str | Path | None = None,
) -> list[SizePoint]:
    """Mean login latency per object size; one account per size."""
    sizes = list(sizes)
    if not sizes:
        raise ValueError("sizes must be non-empty")
    if sizes != sorted(sizes):
        raise ValueError("sizes must be ascending")

    points: list[SizePoint] = []
    for size in sizes:
        config = BenchConfig(
            scheme=scheme,
            duration_s=math.inf,
            size_bytes=size,
            clients=clients,
            server_url=server_url,
            throttle_bps=throttle_bps,
            seed=seed,
            request_limit=requests_per_size,
        )
        report = run_load(config)
        completed = sum(1 for r in report.records if r.completed)
        if report.latency_mean_ms is None:
            raise RuntimeError(f"no completed requests at size {size}")
        points.append(SizePoint(size, report.latency_mean_ms, completed))

    if out_path is not None:
        out_path = Path(out_path)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        lines = ["size_bytes,mean_latency_ms,requests"]
        lines += [f"{p.size_bytes},{p.mean_latency_ms},{p.requests}" for p in points]
        out_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return points


def sweep_file_type(
    fixtures: Iterable[tuple[str, Path]],
    *,
    iterations: int = 100,
    warmup: int = 3,
) -> list[TypeTiming]:
    """Digest wall time per fixture file, measured locally over many runs."""
    if iterations < 2:
        raise ValueError("iterations must be >= 2")
    results: list[TypeTiming] = []
    for label, path in fixtures:
        data = Path(path).read_bytes()
        for _ in range(warmup):
            object_digest(data)
        samples: list[float] = []
        for _ in range(iterations):
            t0 = time.perf_counter()
            object_digest(data)
            samples.append((time.perf_counter() - t0) * 1000.0)
        results.append(
            TypeTiming(
                label=label,
                mean_ms=statistics.fmean(samples),
                stdev_ms=statistics.stdev(samples),
                iterations=iterations,
            )
        )
    return results
