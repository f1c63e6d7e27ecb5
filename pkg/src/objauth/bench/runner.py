"""Login load generator.

Two issuance models:

* open loop: requests leave at fixed wall-clock offsets (i/rate) from the
  start, regardless of how fast the server answers;
* closed loop: a fixed set of clients each send back-to-back, one request
  in flight per client.

An optional shared upload throttle serializes all in-flight upload chunks
through one simulated uplink, so the aggregate send rate never exceeds the
configured bytes/sec no matter how many clients run.
"""
from __future__ import annotations

import asyncio
import itertools
import math
import time
import uuid
from dataclasses import dataclass
from typing import AsyncIterator

import httpx

from ..client import UPLOAD_CHUNK, multipart_frame
from ..core import digest_to_hex, object_digest
from .objects import make_object
from .report import BenchReport, RequestRecord, build_report

_BASE_TIMEOUT_S = 30.0


class ServerUnreachableError(RuntimeError):
    def __init__(self, server_url: str):
        super().__init__(f"server unreachable: {server_url}")
        self.server_url = server_url


@dataclass(frozen=True)
class BenchConfig:
    scheme: str                     # "hash" | "object"
    duration_s: float
    size_bytes: int
    rate_rps: float | None = None   # open loop
    clients: int | None = None      # closed loop
    server_url: str = "http://127.0.0.1:8000"
    throttle_bps: int | None = None
    user_id: str | None = None      # default derives from scheme/size/seed
    seed: int = 0
    request_limit: int | None = None  # stop after this many sends (sweeps)
    timeout_s: float | None = None    # None: sized from the throttle settings

    def __post_init__(self):
        if self.scheme not in ("hash", "object"):
            raise ValueError(f"scheme must be 'hash' or 'object', got {self.scheme!r}")
        if (self.rate_rps is None) == (self.clients is None):
            raise ValueError("exactly one of rate_rps and clients must be set")
        if self.rate_rps is not None and self.rate_rps <= 0:
            raise ValueError("rate_rps must be > 0")
        if self.clients is not None and self.clients < 1:
            raise ValueError("clients must be >= 1")
        if not self.duration_s > 0:
            raise ValueError("duration_s must be > 0")
        if math.isinf(self.duration_s) and self.request_limit is None:
            raise ValueError("unbounded duration requires a request_limit")
        if self.size_bytes < 1:
            raise ValueError("size_bytes must be >= 1")
        if self.throttle_bps is not None and self.throttle_bps <= 0:
            raise ValueError("throttle_bps must be > 0 when set")
        if self.request_limit is not None and self.request_limit < 1:
            raise ValueError("request_limit must be >= 1")

    @property
    def bench_user(self) -> str:
        if self.user_id is not None:
            return self.user_id
        return f"bench-{self.scheme}-{self.size_bytes}-{self.seed}"


class SharedThrottle:
    """One simulated uplink: each chunk reserves pipe time under a lock, so
    concurrent uploads interleave but their aggregate rate stays at bps."""

    def __init__(self, bps: int):
        self.bps = bps
        self._next_free: float | None = None
        self._lock = asyncio.Lock()

    async def transmit(self, nbytes: int) -> None:
        loop = asyncio.get_running_loop()
        async with self._lock:
            now = loop.time()
            if self._next_free is None or self._next_free < now:
                self._next_free = now
            self._next_free += nbytes / self.bps
            due = self._next_free
        delay = due - loop.time()
        if delay > 0:
            await asyncio.sleep(delay)


async def _paced_body(body: bytes, throttle: SharedThrottle | None) -> AsyncIterator[bytes]:
    view = memoryview(body)
    for off in range(0, len(view), UPLOAD_CHUNK):
        chunk = view[off:off + UPLOAD_CHUNK]
        if throttle is not None:
            await throttle.transmit(len(chunk))
        yield bytes(chunk)


def run_load(config: BenchConfig) -> BenchReport:
    return asyncio.run(run_load_async(config))


async def run_load_async(config: BenchConfig) -> BenchReport:
    obj = make_object(config.size_bytes, config.seed)
    password = digest_to_hex(object_digest(obj))
    boundary = uuid.uuid4().hex
    prologue, epilogue = multipart_frame(config.bench_user, boundary)
    upload_body = prologue + obj + epilogue
    upload_headers = {
        "Content-Type": f"multipart/form-data; boundary={boundary}",
        "Content-Length": str(len(upload_body)),
    }

    timeout = config.timeout_s
    if timeout is None:
        timeout = _BASE_TIMEOUT_S
        if config.throttle_bps is not None:
            # On a shared pipe an upload can wait behind every other client.
            in_flight = config.clients or 1
            timeout += 1.5 * in_flight * len(upload_body) / config.throttle_bps

    loop = asyncio.get_running_loop()
    throttle = SharedThrottle(config.throttle_bps) if config.throttle_bps else None
    records: list[RequestRecord] = []

    limits = httpx.Limits(max_connections=max(100, (config.clients or 0) + 10))
    async with httpx.AsyncClient(base_url=config.server_url, timeout=timeout, limits=limits) as http:
        try:
            health = await http.get("/api/health")
        except httpx.HTTPError:
            raise ServerUnreachableError(config.server_url) from None
        if health.status_code != 200:
            raise ServerUnreachableError(config.server_url)

        # The bench account: created on first use, already-exists is fine
        # (the object, and so the password, is deterministic).
        signup = await http.post("/api/signup", content=upload_body, headers=upload_headers)
        if signup.status_code not in (200, 409):
            raise RuntimeError(f"bench account signup failed: HTTP {signup.status_code}")

        unix_anchor_ms = time.time() * 1000.0
        mono_anchor = loop.time()

        def unix_ms(mono: float) -> float:
            return unix_anchor_ms + (mono - mono_anchor) * 1000.0

        async def one_request(seq: int) -> None:
            send = loop.time()
            try:
                if config.scheme == "hash":
                    response = await http.post(
                        "/api/login/hash",
                        json={"user_id": config.bench_user, "password": password},
                    )
                else:
                    response = await http.post(
                        "/api/login/object",
                        content=_paced_body(upload_body, throttle),
                        headers=upload_headers,
                    )
                if response.status_code == 200:
                    status = "ok"
                elif response.status_code == 401:
                    status = "rejected"
                else:
                    status = f"error:http_{response.status_code}"
                server_ms = float(response.headers.get("x-auth-time-ms", 0.0))
            except httpx.HTTPError as exc:
                status = f"error:{type(exc).__name__}"
                server_ms = 0.0
            done = loop.time()
            records.append(
                RequestRecord(
                    seq=seq,
                    send_unix_ms=unix_ms(send),
                    done_unix_ms=unix_ms(done),
                    status=status,
                    latency_ms=(done - send) * 1000.0,
                    server_auth_ms=server_ms,
                )
            )

        if config.rate_rps is not None:
            await _open_loop(config, loop, one_request)
        else:
            await _closed_loop(config, loop, one_request)

    return build_report(records)


async def _open_loop(config: BenchConfig, loop, one_request) -> None:
    tasks = []
    start = loop.time()
    seq = 0
    while True:
        offset = seq / config.rate_rps
        if offset >= config.duration_s:
            break
        if config.request_limit is not None and seq >= config.request_limit:
            break
        delay = (start + offset) - loop.time()
        if delay > 0:
            await asyncio.sleep(delay)
        tasks.append(asyncio.create_task(one_request(seq)))
        seq += 1
    if tasks:
        await asyncio.gather(*tasks)


async def _closed_loop(config: BenchConfig, loop, one_request) -> None:
    sequence = itertools.count()
    deadline = loop.time() + config.duration_s

    async def worker() -> None:
        # A request that starts before the deadline runs to completion.
        while loop.time() < deadline:
            seq = next(sequence)
            if config.request_limit is not None and seq >= config.request_limit:
                break
            await one_request(seq)

    await asyncio.gather(*(worker() for _ in range(config.clients)))
