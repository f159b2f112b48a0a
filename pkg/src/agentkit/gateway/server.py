"""Running the gateway under uvicorn, blocking or on a background thread."""

from __future__ import annotations

import threading
import time

import uvicorn

from agentkit.gateway.app import create_app
from agentkit.gateway.state import GatewayState


def make_server(state: GatewayState, host: str = "127.0.0.1", port: int = 8000) -> uvicorn.Server:
    config = uvicorn.Config(
        create_app(state), host=host, port=port, log_level="warning", lifespan="on"
    )
    return uvicorn.Server(config)


def serve_blocking(state: GatewayState, host: str = "127.0.0.1", port: int = 8000) -> None:
    make_server(state, host, port).run()


class GatewayThread:
    """In-process gateway for tests: real sockets, background thread."""

    def __init__(self, state: GatewayState, host: str = "127.0.0.1", port: int = 0):
        self.state = state
        self.server = make_server(state, host, port)
        self.thread = threading.Thread(target=self.server.run, daemon=True)
        self.host = host
        self.port: int | None = None

    def start(self, timeout: float = 10.0) -> "GatewayThread":
        self.thread.start()
        deadline = time.monotonic() + timeout
        while not self.server.started:
            if time.monotonic() > deadline:
                raise RuntimeError("gateway did not start in time")
            if not self.thread.is_alive():
                raise RuntimeError("gateway thread died during startup")
            time.sleep(0.01)
        self.port = self.server.servers[0].sockets[0].getsockname()[1]
        return self

    @property
    def base_url(self) -> str:
        return f"http://{self.host}:{self.port}"

    def stop(self, timeout: float = 10.0) -> None:
        self.server.should_exit = True
        self.thread.join(timeout)
