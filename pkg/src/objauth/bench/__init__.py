from .objects import make_object
from .report import (
    BenchReport,
    RequestRecord,
    UndefinedThroughputError,
    build_report,
    compute_throughput,
    read_report,
    write_report,
)
from .runner import BenchConfig, ServerUnreachableError, run_load, run_load_async
from .sweeps import SizePoint, TypeTiming, sweep_file_type, sweep_object_size

__all__ = [
    "BenchConfig",
    "BenchReport",
    "RequestRecord",
    "ServerUnreachableError",
    "SizePoint",
    "TypeTiming",
    "UndefinedThroughputError",
    "build_report",
    "compute_throughput",
    "make_object",
    "read_report",
    "run_load",
    "run_load_async",
    "sweep_file_type",
    "sweep_object_size",
    "write_report",
]
