"""The tool registry: registration, validated dispatch, audit trail.

invoke() is total: every failure mode — unknown tool, schema rejection,
handler exception, deadline overrun — comes back as an error observation,
never as a raised exception.
"""

from __future__ import annotations

import json
import threading
from concurrent.futures import ThreadPoolExecutor
from concurrent.futures import TimeoutError as FutureTimeout
from typing import Any, Callable

from agentkit.errors import AgentKitError, SchemaViolation, UnknownTool
from agentkit.toolreg.types import Observation, ToolCall, ToolDescriptor
from agentkit.toolreg.validation import validate_args

Handler = Callable[[dict], Any]

DEFAULT_DEADLINE_S = 60.0


class ToolRegistry:
    def __init__(self):
        self._lock = threading.Lock()
        self._tools: dict[str, tuple[ToolDescriptor, Handler]] = {}
        self.audit: list[dict] = []

    def register(self, descriptor: ToolDescriptor, handler: Handler) -> None:
        """Register or replace a tool. Replacement is recorded in the audit log."""
        descriptor.validate()
        with self._lock:
            event = "replaced" if descriptor.name in self._tools else "registered"
            self._tools[descriptor.name] = (descriptor, handler)
            self.audit.append(
                {"event": event, "tool": descriptor.name, "origin": descriptor.origin}
            )

    def deregister(self, name: str) -> bool:
        with self._lock:
            if name not in self._tools:
                return False
            del self._tools[name]
            self.audit.append({"event": "deregistered", "tool": name})
            return True

    def deregister_service(self, service_id: str) -> list[str]:
        """Remove every tool registered by a remote service."""
        with self._lock:
            names = [
                name
                for name, (desc, _) in self._tools.items()
                if desc.origin == "remote" and desc.service_id == service_id
            ]
            for name in names:
                del self._tools[name]
                self.audit.append(
                    {"event": "deregistered", "tool": name, "service_id": service_id}
                )
        return names

    def get(self, name: str) -> ToolDescriptor:
        with self._lock:
            if name not in self._tools:
                raise UnknownTool(f"no tool named {name!r}")
            return self._tools[name][0]

    def __contains__(self, name: str) -> bool:
        with self._lock:
            return name in self._tools

    def list_tools(self) -> list[ToolDescriptor]:
        with self._lock:
            return [desc for desc, _ in self._tools.values()]

    def descriptors_for(self, names: list[str]) -> list[ToolDescriptor]:
        with self._lock:
            return [self._tools[n][0] for n in names if n in self._tools]

    def invoke(
        self, call: ToolCall, deadline: float = DEFAULT_DEADLINE_S
    ) -> Observation:
        """Validate and dispatch a tool call, returning an observation.

        On deadline overrun the worker is abandoned and a Timeout
        observation returned; the handler is never reached when validation
        rejects the arguments.
        """
        with self._lock:
            entry = self._tools.get(call.tool)
        if entry is None:
            return Observation.failure(
                call.call_id, "UnknownTool", f"no tool named {call.tool!r}"
            )
        descriptor, handler = entry
        try:
            validate_args(descriptor, call.args)
        except SchemaViolation as exc:
            return Observation.failure(
                call.call_id, "SchemaViolation", f"{exc} (at {exc.path or '/'})"
            )

        pool = ThreadPoolExecutor(max_workers=1)
        future = pool.submit(handler, call.args)
        try:
            value = future.result(timeout=deadline)
        except FutureTimeout:
            pool.shutdown(wait=False)
            return Observation.failure(
                call.call_id,
                "Timeout",
                f"tool {call.tool!r} exceeded its {deadline:g}s deadline",
            )
        except AgentKitError as exc:
            # Domain failures keep their class name as the observation kind
            # (OutOfRange, ExtensionGone, ...), so callers can react precisely.
            pool.shutdown(wait=False)
            kind = getattr(exc, "observation_kind", type(exc).__name__)
            return Observation.failure(call.call_id, kind, str(exc))
        except Exception as exc:
            pool.shutdown(wait=False)
            return Observation.failure(
                call.call_id, "HandlerError", f"{type(exc).__name__}: {exc}"
            )
        pool.shutdown(wait=False)

        try:
            json.dumps(value)
        except (TypeError, ValueError):
            return Observation.failure(
                call.call_id,
                "HandlerError",
                f"tool {call.tool!r} returned a non-JSON value",
            )
        return Observation.success(call.call_id, value)


def register_tool(
    registry: ToolRegistry, descriptor: ToolDescriptor, handler: Handler
) -> None:
    registry.register(descriptor, handler)


def invoke(
    registry: ToolRegistry, call: ToolCall, deadline: float = DEFAULT_DEADLINE_S
) -> Observation:
    return registry.invoke(call, deadline)
