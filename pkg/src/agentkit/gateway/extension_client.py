"""Client side of the extension wire protocol.

An ExtensionServer connects to a gateway, registers its tools, and then
answers invoke messages until the connection closes. Handlers execute on a
single worker thread (invocations are served FIFO) while the receive loop
stays responsive to pings.
"""

from __future__ import annotations

import json
import logging
import queue
import threading
from urllib.parse import urlsplit, urlunsplit

from websockets.sync.client import connect as ws_connect

from agentkit.toolreg import ToolDescriptor

logger = logging.getLogger(__name__)


def extension_ws_url(gateway_url: str) -> str:
    parts = urlsplit(gateway_url)
    scheme = {"http": "ws", "https": "wss", "ws": "ws", "wss": "wss"}.get(
        parts.scheme, "ws"
    )
    path = parts.path.rstrip("/") + "/ws/extension"
    return urlunsplit((scheme, parts.netloc, path, "", ""))


class RegistrationRejected(RuntimeError):
    def __init__(self, kind: str, message: str):
        super().__init__(f"{kind}: {message}")
        self.kind = kind


class ExtensionServer:
    def __init__(
        self,
        gateway_url: str,
        service_id: str,
        descriptors: list[ToolDescriptor],
        handlers: dict,
        *,
        token: str | None = None,
        connect_timeout: float = 10.0,
    ):
        self.gateway_url = gateway_url
        self.service_id = service_id
        self.descriptors = descriptors
        self.handlers = handlers
        self.token = token
        self.connect_timeout = connect_timeout
        self._ws = None
        self._send_lock = threading.Lock()
        self._jobs: queue.Queue = queue.Queue()
        self.registered_tools: list[str] = []

    def _send(self, message: dict) -> None:
        with self._send_lock:
            self._ws.send(json.dumps(message))

    def connect(self) -> list[str]:
        """Open the socket and register; returns the accepted tool names."""
        headers = {}
        if self.token:
            headers["Authorization"] = f"Bearer {self.token}"
        self._ws = ws_connect(
            extension_ws_url(self.gateway_url),
            additional_headers=headers or None,
            open_timeout=self.connect_timeout,
        )
        self._send(
            {
                "type": "register",
                "service_id": self.service_id,
                "tools": [d.to_dict() for d in self.descriptors],
            }
        )
        reply = json.loads(self._ws.recv(timeout=self.connect_timeout))
        if reply.get("type") != "registered":
            error = reply.get("error") or {}
            raise RegistrationRejected(
                error.get("kind", "Unknown"), error.get("message", str(reply))
            )
        self.registered_tools = reply.get("tools", [])
        return self.registered_tools

    def _worker(self) -> None:
        while True:
            job = self._jobs.get()
            if job is None:
                return
            call_id, tool, args = job
            handler = self.handlers.get(tool)
            try:
                if handler is None:
                    raise LookupError(f"no handler for tool {tool!r}")
                value = handler(args)
                result = {"type": "result", "call_id": call_id, "ok": True, "value": value}
            except Exception as exc:
                result = {
                    "type": "result",
                    "call_id": call_id,
                    "ok": False,
                    "error": {"kind": type(exc).__name__, "message": str(exc)},
                }
            try:
                self._send(result)
            except Exception:
                logger.warning("could not deliver result for call %s", call_id)
                return

    def serve_forever(self) -> None:
        """Answer invokes until the gateway closes the connection."""
        if self._ws is None:
            self.connect()
        worker = threading.Thread(target=self._worker, daemon=True)
        worker.start()
        try:
            while True:
                try:
                    raw = self._ws.recv()
                except Exception:
                    return
                try:
                    message = json.loads(raw)
                except ValueError:
                    continue
                kind = message.get("type")
                if kind == "invoke":
                    self._jobs.put(
                        (
                            message.get("call_id"),
                            message.get("tool"),
                            message.get("args") or {},
                        )
                    )
                elif kind == "ping":
                    self._send({"type": "pong"})
                elif kind == "pong":
                    pass
                elif kind == "error":
                    logger.warning("gateway error: %s", message.get("error"))
        finally:
            self._jobs.put(None)

    def close(self) -> None:
        if self._ws is not None:
            try:
                self._ws.close()
            except Exception:
                pass
