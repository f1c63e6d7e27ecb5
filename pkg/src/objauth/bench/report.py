"""Per-request load records, aggregate statistics, and the report CSV.

Throughput follows the first-to-last definition: completed request count
divided by the span from the first send to the last completion. The mix of
a send endpoint and a completion endpoint is deliberate and kept verbatim.
"""
from __future__ import annotations

import csv
import math
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

# Outcomes that mean the server returned an auth verdict.
COMPLETED_STATUSES = ("ok", "rejected")

# More than this fraction of transport errors invalidates a run.
ERROR_FRACTION_LIMIT = 0.10


class UndefinedThroughputError(ValueError):
    """Raised when a record set is too small to define a throughput."""


@dataclass(frozen=True)
class RequestRecord:
    seq: int
    send_unix_ms: float
    done_unix_ms: float
    status: str          # "ok", "rejected", or "error:<kind>"
    latency_ms: float
    server_auth_ms: float  # 0.0 when the response carried no timing header

    @property
    def completed(self) -> bool:
        return self.status in COMPLETED_STATUSES


@dataclass(frozen=True)
class BenchReport:
    records: tuple[RequestRecord, ...]
    throughput_rps: float | None
    latency_mean_ms: float | None
    latency_median_ms: float | None
    latency_p95_ms: float | None
    error_count: int
    failed: bool


def compute_throughput(records: Sequence[RequestRecord]) -> float:
    """Completed requests per second: N / (last completion - first send)."""
    if len(records) < 2:
        raise UndefinedThroughputError(f"need at least 2 records, got {len(records)}")
    first_send_ms = min(r.send_unix_ms for r in records)
    last_done_ms = max(r.done_unix_ms for r in records)
    span_s = (last_done_ms - first_send_ms) / 1000.0
    if span_s <= 0:
        raise UndefinedThroughputError("record span is not positive")
    return len(records) / span_s


def percentile_nearest_rank(values: Sequence[float], fraction: float) -> float:
    ordered = sorted(values)
    rank = max(1, math.ceil(fraction * len(ordered)))
    return ordered[rank - 1]


def build_report(records: Iterable[RequestRecord]) -> BenchReport:
    records = tuple(sorted(records, key=lambda r: r.seq))
    completed = [r for r in records if r.completed]
    error_count = len(records) - len(completed)
    failed = bool(records) and error_count > ERROR_FRACTION_LIMIT * len(records)

    throughput = None
    if len(completed) >= 2:
        throughput = compute_throughput(completed)

    latencies = [r.latency_ms for r in completed]
    return BenchReport(
        records=records,
        throughput_rps=throughput,
        latency_mean_ms=statistics.fmean(latencies) if latencies else None,
        latency_median_ms=statistics.median(latencies) if latencies else None,
        latency_p95_ms=percentile_nearest_rank(latencies, 0.95) if latencies else None,
        error_count=error_count,
        failed=failed,
    )


_COLUMNS = ["seq", "send_unix_ms", "done_unix_ms", "status", "latency_ms", "server_auth_ms"]


def _fmt(value: float | None) -> str:
    # str() of a float round-trips exactly; None becomes an empty field.
    return "" if value is None else str(value)


def write_report(report: BenchReport, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(_COLUMNS)
        for r in report.records:
            writer.writerow(
                [r.seq, _fmt(r.send_unix_ms), _fmt(r.done_unix_ms), r.status,
                 _fmt(r.latency_ms), _fmt(r.server_auth_ms)]
            )
        f.write(f"# throughput_rps={_fmt(report.throughput_rps)}\n")
        f.write(f"# latency_mean_ms={_fmt(report.latency_mean_ms)}\n")
        f.write(f"# latency_median_ms={_fmt(report.latency_median_ms)}\n")
        f.write(f"# latency_p95_ms={_fmt(report.latency_p95_ms)}\n")
        f.write(f"# error_count={report.error_count}\n")
        f.write(f"# failed={'true' if report.failed else 'false'}\n")


def read_report(path: str | Path) -> tuple[list[RequestRecord], dict[str, str]]:
    """Parse a report CSV back into records plus the footer key/value pairs."""
    records: list[RequestRecord] = []
    footer: dict[str, str] = {}
    with open(path, newline="", encoding="utf-8") as f:
        header_seen = False
        for line in f:
            line = line.rstrip("\r\n")
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line.lstrip("# ").partition("=")
                footer[key] = value
                continue
            if not header_seen:
                if line.split(",") != _COLUMNS:
                    raise ValueError(f"unexpected report header: {line!r}")
                header_seen = True
                continue
            row = next(csv.reader([line]))
            records.append(
                RequestRecord(
                    seq=int(row[0]),
                    send_unix_ms=float(row[1]),
                    done_unix_ms=float(row[2]),
                    status=row[3],
                    latency_ms=float(row[4]),
                    server_auth_ms=float(row[5]),
                )
            )
    return records, footer
