"""Gateway runtime state: sessions, event buffers, and remote-extension routing.

Turns execute in worker threads while the HTTP/WS surface runs on the
asyncio loop; everything that crosses that boundary goes through
call_soon_threadsafe / run_coroutine_threadsafe. Remote tool calls are
correlated by call_id: each in-flight invoke holds a concurrent Future that
the extension's receive loop resolves.
"""

from __future__ import annotations

import asyncio
import copy
import json
import logging
import threading
import uuid
from collections import deque
from concurrent.futures import Future
from concurrent.futures import TimeoutError as FutureTimeout
from dataclasses import dataclass, field

from agentkit.errors import AgentKitError, ExtensionGone
from agentkit.agent import (
    AgentEvent,
    AssistantConfig,
    RemoteChatProvider,
    ScriptedProvider,
    Session,
    run_turn,
)
from agentkit.toolreg import ToolRegistry

logger = logging.getLogger(__name__)

DEFAULT_BUFFER_LIMIT = 1000
DEFAULT_LIVENESS_S = 30.0
REMOTE_CALL_DEADLINE_S = 60.0


class RemoteToolError(AgentKitError):
    """Remote tool failure with the extension's own error kind preserved."""

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.observation_kind = kind


@dataclass
class AssistantSpec:
    name: str
    instructions: str = "You are a helpful assistant with access to tools."
    tools: list[str] | None = None  # None: every registered tool
    max_iterations: int = 10
    context_char_budget: int = 12000
    script: list | None = None
    llm_summary: bool = False

    @classmethod
    def from_dict(cls, data: dict) -> "AssistantSpec":
        tools = data.get("tools")
        if tools == ["*"] or tools == "*":
            tools = None
        return cls(
            name=data.get("name", "default"),
            instructions=data.get(
                "instructions", "You are a helpful assistant with access to tools."
            ),
            tools=tools,
            max_iterations=data.get("max_iterations", 10),
            context_char_budget=data.get("context_char_budget", 12000),
            script=data.get("script"),
            llm_summary=data.get("llm_summary", False),
        )

    def make_provider(self):
        if self.script is not None:
            return ScriptedProvider(copy.deepcopy(self.script))
        return RemoteChatProvider.from_env()


class SessionRuntime:
    def __init__(self, session: Session, provider, spec: AssistantSpec, buffer_limit: int):
        self.session = session
        self.provider = provider
        self.spec = spec
        self.buffer: deque[dict] = deque(maxlen=buffer_limit)
        self.subscribers: set[asyncio.Queue] = set()
        self.seq = 0
        self.lock = threading.Lock()
        self.running = False


@dataclass
class ExtensionSession:
    service_id: str
    websocket: object
    tool_names: list[str] = field(default_factory=list)
    send_lock: asyncio.Lock = field(default_factory=asyncio.Lock)
    last_seen: float = 0.0

    async def send(self, message: dict) -> None:
        async with self.send_lock:
            await self.websocket.send_text(json.dumps(message))


class GatewayState:
    def __init__(
        self,
        registry: ToolRegistry | None = None,
        assistants: dict[str, AssistantSpec] | None = None,
        *,
        token: str | None = None,
        buffer_limit: int = DEFAULT_BUFFER_LIMIT,
        liveness_s: float = DEFAULT_LIVENESS_S,
        service_meta: dict | None = None,
    ):
        self.registry = registry or ToolRegistry()
        self.assistants = assistants or {"default": AssistantSpec(name="default")}
        self.token = token
        self.buffer_limit = buffer_limit
        self.liveness_s = liveness_s
        self.service_meta = service_meta or {}
        self.sessions: dict[str, SessionRuntime] = {}
        self.extensions: dict[str, ExtensionSession] = {}
        self.pending: dict[str, tuple[Future, str]] = {}
        self.loop: asyncio.AbstractEventLoop | None = None
        self._lock = threading.Lock()

    # -- sessions -----------------------------------------------------------

    def create_session(self, assistant_name: str, profile: str | None) -> SessionRuntime:
        spec = self.assistants.get(assistant_name)
        if spec is None:
            raise KeyError(assistant_name)
        provider = spec.make_provider()
        config = AssistantConfig(
            name=spec.name,
            instructions=spec.instructions,
            tool_names=self._resolve_tools(spec),
            max_iterations=spec.max_iterations,
            context_char_budget=spec.context_char_budget,
        )
        session = Session(uuid.uuid4().hex, config, profile=profile)
        runtime = SessionRuntime(session, provider, spec, self.buffer_limit)
        with self._lock:
            self.sessions[session.session_id] = runtime
        return runtime

    def _resolve_tools(self, spec: AssistantSpec) -> list[str]:
        if spec.tools is not None:
            return list(spec.tools)
        return sorted(d.name for d in self.registry.list_tools())

    def get_runtime(self, session_id: str) -> SessionRuntime | None:
        with self._lock:
            return self.sessions.get(session_id)

    def publish(self, runtime: SessionRuntime, event: AgentEvent) -> None:
        """Append an event to the session buffer and wake live subscribers."""
        with runtime.lock:
            item = {"seq": runtime.seq, "event": event.to_dict()}
            runtime.seq += 1
            runtime.buffer.append(item)
            subscribers = list(runtime.subscribers)
        if self.loop is not None:
            for queue in subscribers:
                self.loop.call_soon_threadsafe(queue.put_nowait, item)

    def run_turn_in_thread(self, runtime: SessionRuntime, text: str) -> None:
        def job():
            try:
                if runtime.spec.tools is None:
                    # Wildcard assistants see the registry as it is now.
                    runtime.session.assistant.tool_names = self._resolve_tools(
                        runtime.spec
                    )
                run_turn(
                    runtime.session,
                    text,
                    runtime.provider,
                    self.registry,
                    lambda event: self.publish(runtime, event),
                    llm_summary=runtime.spec.llm_summary,
                )
            except Exception as exc:  # defensive: a turn must never vanish silently
                logger.exception("turn crashed for session %s", runtime.session.session_id)
                self.publish(
                    runtime, AgentEvent.turn_failed("InternalError", str(exc))
                )
            finally:
                runtime.running = False

        threading.Thread(target=job, daemon=True).start()

    # -- remote extensions ----------------------------------------------------

    def make_remote_handler(self, service_id: str, tool_name: str):
        def handler(args: dict):
            return self.call_remote(service_id, tool_name, args)

        return handler

    def call_remote(
        self,
        service_id: str,
        tool_name: str,
        args: dict,
        deadline: float = REMOTE_CALL_DEADLINE_S,
    ):
        """Blocking remote invoke; runs on a tool worker thread."""
        ext = self.extensions.get(service_id)
        if ext is None or self.loop is None:
            raise ExtensionGone(f"extension {service_id!r} is not connected")
        call_id = uuid.uuid4().hex
        future: Future = Future()
        with self._lock:
            self.pending[call_id] = (future, service_id)
        message = {"type": "invoke", "call_id": call_id, "tool": tool_name, "args": args}
        try:
            asyncio.run_coroutine_threadsafe(ext.send(message), self.loop).result(10)
        except Exception as exc:
            with self._lock:
                self.pending.pop(call_id, None)
            raise ExtensionGone(
                f"could not reach extension {service_id!r}: {exc}"
            ) from exc
        try:
            # The registry's own deadline fires first; this is the backstop.
            return future.result(timeout=deadline + 5)
        except FutureTimeout:
            raise ExtensionGone(
                f"extension {service_id!r} never answered call {call_id}"
            )
        finally:
            with self._lock:
                self.pending.pop(call_id, None)

    def resolve_remote_result(self, payload: dict) -> None:
        call_id = payload.get("call_id")
        with self._lock:
            entry = self.pending.pop(call_id, None)
        if entry is None:
            logger.warning("dropping result for unknown call_id %r", call_id)
            return
        future, _ = entry
        if payload.get("ok"):
            future.set_result(payload.get("value"))
        else:
            error = payload.get("error") or {}
            future.set_exception(
                RemoteToolError(
                    error.get("kind", "HandlerError"), error.get("message", "")
                )
            )

    def drop_extension(self, service_id: str) -> None:
        """Deregister a disconnected extension and fail its in-flight calls."""
        with self._lock:
            self.extensions.pop(service_id, None)
            orphaned = [
                (call_id, future)
                for call_id, (future, sid) in self.pending.items()
                if sid == service_id
            ]
            for call_id, _ in orphaned:
                del self.pending[call_id]
        for _, future in orphaned:
            if not future.done():
                future.set_exception(
                    ExtensionGone(f"extension {service_id!r} disconnected mid-call")
                )
        self.registry.deregister_service(service_id)
