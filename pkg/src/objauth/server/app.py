"""HTTP authentication service.

Exposes sign-up and both login schemes:

* ``POST /api/signup``        multipart ``user_id`` + ``object`` file
* ``POST /api/login/hash``    JSON ``{"user_id": ..., "password": ...}``
* ``POST /api/login/object``  multipart, digest computed server-side
* ``GET  /api/health``

Every auth endpoint reports the server-side elapsed time (first byte of
request processing through verification) in an ``X-Auth-Time-Ms`` header.
Accepted responses carry the same value in the body; rejected logins return
one fixed byte sequence so that unknown-user and wrong-password are
indistinguishable from the response alone.
"""
from __future__ import annotations

import os
import time
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, File, Form, Request, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from ..core import (
    digest_stream,
    digest_to_hex,
    make_account,
    validate_user_id,
    verify_credentials,
)
from ..store import AccountStore, DuplicateUserError, UnknownUserError
from .models import LoginHashRequest, TextSignupRequest

# Fixed 401 payload: a real measurement here would differ between the
# unknown-user and wrong-password paths and leak which one occurred. The
# genuine timing is still available in the X-Auth-Time-Ms header.
REJECTED_BODY = b'{"status":"rejected","auth_time_ms":0.0}'

# Multipart framing (boundaries, part headers, the user_id field) makes the
# request body somewhat larger than the object itself; the early
# Content-Length check must not reject uploads that are under the cap once
# unwrapped.
_MULTIPART_SLACK = 8192

_UPLOAD_PATHS = frozenset({"/api/signup", "/api/login/object"})


@dataclass(frozen=True)
class ServerConfig:
    """Service settings; listen host/port are consumed by the process runner."""

    store_path: Path
    listen_host: str = "127.0.0.1"
    listen_port: int = 8000
    max_upload_bytes: int = 64 * 1024 * 1024
    artificial_delay_ms: float = 0.0
    allow_text_signup: bool = False
    static_dir: Path | None = None

    def __post_init__(self):
        if self.max_upload_bytes < 1:
            raise ValueError("max_upload_bytes must be >= 1")
        if self.artificial_delay_ms < 0:
            raise ValueError("artificial_delay_ms must be >= 0")


class RequestGate:
    """ASGI wrapper around the auth endpoints. It stamps the processing start
    time into the scope, guarantees an X-Auth-Time-Ms header on every
    response, and rejects uploads whose declared Content-Length already
    exceeds the cap, before any body bytes are pulled."""

    def __init__(self, app, max_upload_bytes: int):
        self.app = app
        self.max_upload_bytes = max_upload_bytes

    async def __call__(self, scope, receive, send):
        if scope["type"] != "http":
            await self.app(scope, receive, send)
            return
        t0 = time.monotonic()
        scope.setdefault("state", {})["auth_t0"] = t0
        path = scope["path"]

        if path.startswith("/api/") and path != "/api/health":
            send = _stamping_send(send, t0)

        if path in _UPLOAD_PATHS:
            declared = _content_length(scope)
            if declared is not None and declared > self.max_upload_bytes + _MULTIPART_SLACK:
                await send(
                    {
                        "type": "http.response.start",
                        "status": 413,
                        "headers": [(b"content-type", b"application/json")],
                    }
                )
                await send(
                    {
                        "type": "http.response.body",
                        "body": b'{"status":"error","code":"too_large"}',
                    }
                )
                return
        await self.app(scope, receive, send)


def _stamping_send(send, t0: float):
    """Adds X-Auth-Time-Ms to the response unless a handler already set a
    more precise value (measured at verification completion)."""

    async def wrapped(message):
        if message["type"] == "http.response.start":
            headers = message.setdefault("headers", [])
            if not any(name.lower() == b"x-auth-time-ms" for name, _ in headers):
                elapsed_ms = (time.monotonic() - t0) * 1000.0
                headers.append((b"x-auth-time-ms", f"{elapsed_ms:.3f}".encode()))
        await send(message)

    return wrapped


def _content_length(scope) -> int | None:
    for name, value in scope["headers"]:
        if name == b"content-length":
            try:
                return int(value)
            except ValueError:
                return None
    return None


def _error(status_code: int, code: str) -> JSONResponse:
    return JSONResponse({"status": "error", "code": code}, status_code=status_code)


def create_app(config: ServerConfig) -> RequestGate:
    store = AccountStore(config.store_path)
    # Verified against when the user id does not exist, so both rejection
    # paths do comparable work.
    decoy = make_account("decoy", os.urandom(16).hex())

    app = FastAPI(title="objauth", docs_url=None, redoc_url=None)

    @app.exception_handler(RequestValidationError)
    async def malformed_request(request: Request, exc: RequestValidationError):
        return _error(400, "bad_request")

    def start_time(request: Request) -> float:
        t0 = request.scope.get("state", {}).get("auth_t0")
        return time.monotonic() if t0 is None else t0

    def apply_delay():
        if config.artificial_delay_ms > 0:
            time.sleep(config.artificial_delay_ms / 1000.0)

    def elapsed_ms(t0: float) -> float:
        return (time.monotonic() - t0) * 1000.0

    def ok_response(auth_ms: float) -> JSONResponse:
        response = JSONResponse({"status": "ok", "auth_time_ms": round(auth_ms, 3)})
        response.headers["X-Auth-Time-Ms"] = f"{auth_ms:.3f}"
        return response

    def rejected_response(auth_ms: float) -> Response:
        response = Response(content=REJECTED_BODY, status_code=401, media_type="application/json")
        response.headers["X-Auth-Time-Ms"] = f"{auth_ms:.3f}"
        return response

    def read_upload(upload: UploadFile):
        """Returns (digest, None) or (None, error response)."""
        f = upload.file
        f.seek(0, os.SEEK_END)
        size = f.tell()
        f.seek(0)
        if size > config.max_upload_bytes:
            return None, _error(413, "too_large")
        if size == 0:
            return None, _error(422, "empty_object")
        return digest_stream(f), None

    def verify_login(t0: float, user_id: str, password: str) -> Response:
        try:
            validate_user_id(user_id)
        except ValueError:
            return _error(400, "bad_request")
        if not password:
            return _error(400, "bad_request")
        try:
            record = store.get_account(user_id)
            accepted = verify_credentials(password, record)
        except UnknownUserError:
            verify_credentials(password, decoy)
            accepted = False
        auth_ms = elapsed_ms(t0)
        return ok_response(auth_ms) if accepted else rejected_response(auth_ms)

    # Handlers are plain functions: FastAPI runs them on worker threads, so
    # hashing a large upload never stalls the event loop.

    @app.post("/api/signup")
    def signup(
        request: Request,
        user_id: str = Form(...),
        upload: UploadFile = File(..., alias="object"),
    ):
        t0 = start_time(request)
        apply_delay()
        try:
            validate_user_id(user_id)
        except ValueError:
            return _error(400, "bad_request")
        digest, failure = read_upload(upload)
        if failure is not None:
            return failure
        try:
            store.create_account(make_account(user_id, digest_to_hex(digest)))
        except DuplicateUserError:
            return _error(409, "duplicate_user")
        return ok_response(elapsed_ms(t0))

    @app.post("/api/login/hash")
    def login_hash(request: Request, body: LoginHashRequest):
        t0 = start_time(request)
        apply_delay()
        return verify_login(t0, body.user_id, body.password)

    @app.post("/api/login/object")
    def login_object(
        request: Request,
        user_id: str = Form(...),
        upload: UploadFile = File(..., alias="object"),
    ):
        t0 = start_time(request)
        apply_delay()
        digest, failure = read_upload(upload)
        if failure is not None:
            return failure
        return verify_login(t0, user_id, digest_to_hex(digest))

    if config.allow_text_signup:
        # Extension beyond the object flows: create an account directly from
        # a text password, for parity with the text scheme on the login side.
        @app.post("/api/signup/text")
        def signup_text(request: Request, body: TextSignupRequest):
            t0 = start_time(request)
            apply_delay()
            try:
                validate_user_id(body.user_id)
            except ValueError:
                return _error(400, "bad_request")
            if not body.password:
                return _error(400, "bad_request")
            try:
                store.create_account(make_account(body.user_id, body.password))
            except DuplicateUserError:
                return _error(409, "duplicate_user")
            return ok_response(elapsed_ms(t0))

    @app.get("/api/health")
    def health():
        return {"status": "ok"}

    if config.static_dir is not None:
        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="static")

    app.state.config = config
    app.state.store = store

    return RequestGate(app, config.max_upload_bytes)
