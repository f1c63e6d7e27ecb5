"""Shared fixtures: a real uvicorn server on an ephemeral port."""
from __future__ import annotations

import threading
import time

import pytest
import uvicorn

from objauth.server import ServerConfig, create_app

_acceptance_lines: list[str] = []


def record_acceptance(line: str) -> None:
    """Collect a verdict line for the end-of-run summary."""
    _acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    # Verdicts must stay visible even though passing tests capture stdout.
    if _acceptance_lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


class LiveServer:
    """Runs the service in a daemon thread; port is assigned by the OS."""

    def __init__(self, config: ServerConfig):
        self.config = config
        self._server: uvicorn.Server | None = None
        self._thread: threading.Thread | None = None
        self.port: int | None = None

    def start(self) -> "LiveServer":
        app = create_app(self.config)
        uv_config = uvicorn.Config(
            app, host="127.0.0.1", port=0, log_level="warning", access_log=False
        )
        self._server = uvicorn.Server(uv_config)
        self._thread = threading.Thread(target=self._server.run, daemon=True)
        self._thread.start()
        deadline = time.monotonic() + 15
        while not self._server.started:
            if time.monotonic() > deadline:
                raise RuntimeError("test server did not start within 15 s")
            if not self._thread.is_alive():
                raise RuntimeError("test server thread died during startup")
            time.sleep(0.005)
        self.port = self._server.servers[0].sockets[0].getsockname()[1]
        return self

    @property
    def url(self) -> str:
        return f"http://127.0.0.1:{self.port}"

    def stop(self) -> None:
        if self._server is not None:
            self._server.should_exit = True
        if self._thread is not None:
            self._thread.join(timeout=10)


@pytest.fixture
def server_factory(tmp_path):
    """Start servers with overridable settings; all stopped at teardown."""
    servers: list[LiveServer] = []

    def start(**overrides) -> LiveServer:
        settings = {"store_path": tmp_path / f"accounts{len(servers)}.jsonl"}
        settings.update(overrides)
        server = LiveServer(ServerConfig(**settings)).start()
        servers.append(server)
        return server

    yield start
    for server in servers:
        server.stop()


@pytest.fixture
def live_server(server_factory) -> LiveServer:
    return server_factory()
