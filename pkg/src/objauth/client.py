"""Synchronous HTTP client for the authentication service.

Multipart bodies are framed by hand so uploads can be paced: with a
bandwidth cap configured, body chunks are released against a schedule that
guarantees the whole request takes at least size/cap seconds of wall time,
reproducing a slow uplink on loopback.
"""
from __future__ import annotations

import time
import uuid
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

import httpx

UPLOAD_CHUNK = 64 * 1024


@dataclass(frozen=True)
class ClientConfig:
    server_url: str = "http://127.0.0.1:8000"
    timeout_s: float = 30.0
    throttle_bps: int | None = None

    def __post_init__(self):
        if self.timeout_s <= 0:
            raise ValueError("timeout_s must be > 0")
        if self.throttle_bps is not None and self.throttle_bps <= 0:
            raise ValueError("throttle_bps must be > 0 when set")


@dataclass(frozen=True)
class AuthResult:
    status_code: int
    accepted: bool
    wall_ms: float
    auth_time_ms: float | None  # X-Auth-Time-Ms header, when present
    error_code: str | None      # "duplicate_user", "too_large", ... when status is error


def multipart_frame(user_id: str, boundary: str) -> tuple[bytes, bytes]:
    """Prologue and epilogue wrapping the raw object bytes of an upload."""
    prologue = (
        f"--{boundary}\r\n"
        f'Content-Disposition: form-data; name="user_id"\r\n'
        f"\r\n"
        f"{user_id}\r\n"
        f"--{boundary}\r\n"
        f'Content-Disposition: form-data; name="object"; filename="object.bin"\r\n'
        f"Content-Type: application/octet-stream\r\n"
        f"\r\n"
    ).encode()
    epilogue = f"\r\n--{boundary}--\r\n".encode()
    return prologue, epilogue


def paced_chunks(pieces: Iterable[bytes], bps: int | None) -> Iterator[bytes]:
    """Yield UPLOAD_CHUNK-sized slices, sleeping so that after n bytes have
    been released at least n/bps seconds have elapsed. bps=None passes
    everything through unpaced."""
    start = time.monotonic()
    released = 0
    for piece in pieces:
        view = memoryview(piece)
        for off in range(0, len(view), UPLOAD_CHUNK):
            chunk = view[off:off + UPLOAD_CHUNK]
            if bps is not None:
                released += len(chunk)
                due = start + released / bps
                delay = due - time.monotonic()
                if delay > 0:
                    time.sleep(delay)
            yield bytes(chunk)


def _iter_file(path: Path) -> Iterator[bytes]:
    with open(path, "rb") as f:
        while chunk := f.read(UPLOAD_CHUNK):
            yield chunk


class AuthClient:
    def __init__(self, config: ClientConfig | None = None):
        self.config = config or ClientConfig()
        self._http = httpx.Client(base_url=self.config.server_url, timeout=self.config.timeout_s)

    def close(self) -> None:
        self._http.close()

    def __enter__(self) -> "AuthClient":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def health(self) -> bool:
        try:
            return self._http.get("/api/health").status_code == 200
        except httpx.HTTPError:
            return False

    def signup(self, user_id: str, object_path: Path) -> AuthResult:
        return self._upload("/api/signup", user_id, object_path)

    def login_object(self, user_id: str, object_path: Path) -> AuthResult:
        return self._upload("/api/login/object", user_id, object_path)

    def login_hash(self, user_id: str, password: str) -> AuthResult:
        t0 = time.monotonic()
        response = self._http.post(
            "/api/login/hash", json={"user_id": user_id, "password": password}
        )
        return self._result(response, t0)

    def _upload(self, api_path: str, user_id: str, object_path: Path) -> AuthResult:
        size = object_path.stat().st_size
        boundary = uuid.uuid4().hex
        prologue, epilogue = multipart_frame(user_id, boundary)
        total = len(prologue) + size + len(epilogue)

        def pieces() -> Iterator[bytes]:
            yield prologue
            yield from _iter_file(object_path)
            yield epilogue

        headers = {
            "Content-Type": f"multipart/form-data; boundary={boundary}",
            "Content-Length": str(total),
        }
        # A paced upload lasts at least total/bps seconds on top of the
        # ordinary budget; stretch the timeout accordingly.
        timeout = self.config.timeout_s
        if self.config.throttle_bps is not None:
            timeout += total / self.config.throttle_bps
        t0 = time.monotonic()
        response = self._http.post(
            api_path,
            content=paced_chunks(pieces(), self.config.throttle_bps),
            headers=headers,
            timeout=timeout,
        )
        return self._result(response, t0)

    def _result(self, response: httpx.Response, t0: float) -> AuthResult:
        wall_ms = (time.monotonic() - t0) * 1000.0
        header = response.headers.get("x-auth-time-ms")
        body_code = None
        if response.status_code not in (200, 401):
            try:
                body_code = response.json().get("code")
            except ValueError:
                body_code = None
        return AuthResult(
            status_code=response.status_code,
            accepted=response.status_code == 200,
            wall_ms=wall_ms,
            auth_time_ms=float(header) if header is not None else None,
            error_code=body_code,
        )
