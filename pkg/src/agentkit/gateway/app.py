"""The gateway HTTP/WS surface.

HTTP: session creation, message posting, SSE event streaming with
Last-Event-ID replay, the OpenAPI tool export, and direct tool invocation.
WS: the extension federation endpoint speaking framed JSON wire messages
(register / registered / invoke / result / error / ping / pong).
"""

from __future__ import annotations

import asyncio
import json
import logging
import time
import uuid
from contextlib import asynccontextmanager

from fastapi import FastAPI, Request, Response, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse, StreamingResponse

from agentkit.errors import InvalidDescriptor
from agentkit.toolreg import ToolCall, ToolDescriptor, openapi_json
from agentkit.gateway.state import ExtensionSession, GatewayState

logger = logging.getLogger(__name__)

_STATUS_BY_KIND = {
    "SchemaViolation": 400,
    "UnknownTool": 404,
    "Timeout": 504,
    "ExtensionGone": 502,
}

SSE_HEARTBEAT_S = 15.0


def _error_json(status: int, kind: str, message: str) -> JSONResponse:
    return JSONResponse(
        status_code=status, content={"error": {"kind": kind, "message": message}}
    )


def create_app(state: GatewayState) -> FastAPI:
    @asynccontextmanager
    async def lifespan(app: FastAPI):
        state.loop = asyncio.get_running_loop()
        yield

    app = FastAPI(openapi_url=None, docs_url=None, redoc_url=None, lifespan=lifespan)
    app.state.gateway = state

    def authorized(request: Request) -> bool:
        if not state.token:
            return True
        header = request.headers.get("authorization", "")
        return header == f"Bearer {state.token}"

    # -- health and tool surface -------------------------------------------

    @app.get("/healthz")
    async def healthz():
        return {"status": "ok"}

    @app.get("/openapi.json")
    async def openapi_document():
        return Response(
            content=openapi_json(state.registry, state.service_meta),
            media_type="application/json",
        )

    @app.post("/tools/{tool_name}")
    async def invoke_tool(tool_name: str, request: Request):
        try:
            args = await request.json()
        except Exception:
            return _error_json(400, "SchemaViolation", "request body must be JSON")
        if not isinstance(args, dict):
            return _error_json(400, "SchemaViolation", "request body must be a JSON object")
        call = ToolCall(call_id=uuid.uuid4().hex, tool=tool_name, args=args)
        observation = await asyncio.to_thread(state.registry.invoke, call)
        if observation.ok:
            return {"ok": True, "value": observation.value}
        status = _STATUS_BY_KIND.get(observation.error_kind, 500)
        return _error_json(status, observation.error_kind, observation.error_message)

    # -- sessions -------------------------------------------------------------

    @app.post("/sessions")
    async def create_session(request: Request):
        if not authorized(request):
            return _error_json(401, "Unauthorized", "missing or bad bearer token")
        try:
            body = await request.json()
        except Exception:
            body = {}
        assistant = body.get("assistant", "default")
        profile = body.get("profile")
        try:
            runtime = state.create_session(assistant, profile)
        except KeyError:
            return _error_json(400, "UnknownAssistant", f"no assistant named {assistant!r}")
        except Exception as exc:
            return _error_json(400, "ProviderUnavailable", str(exc))
        return {"session_id": runtime.session.session_id}

    @app.post("/sessions/{session_id}/messages")
    async def post_message(session_id: str, request: Request):
        if not authorized(request):
            return _error_json(401, "Unauthorized", "missing or bad bearer token")
        runtime = state.get_runtime(session_id)
        if runtime is None:
            return _error_json(404, "UnknownSession", f"no session {session_id!r}")
        try:
            body = await request.json()
        except Exception:
            return _error_json(400, "BadRequest", "request body must be JSON")
        text = body.get("text")
        if not isinstance(text, str) or not text:
            return _error_json(400, "BadRequest", "'text' must be a non-empty string")
        with runtime.lock:
            if runtime.running:
                return _error_json(409, "SessionBusy", "a turn is already running")
            runtime.running = True
        state.run_turn_in_thread(runtime, text)
        return JSONResponse(status_code=202, content={"status": "accepted"})

    @app.get("/sessions/{session_id}/events")
    async def stream_events(session_id: str, request: Request):
        if not authorized(request):
            return _error_json(401, "Unauthorized", "missing or bad bearer token")
        runtime = state.get_runtime(session_id)
        if runtime is None:
            return _error_json(404, "UnknownSession", f"no session {session_id!r}")
        raw_last = request.headers.get("last-event-id") or request.query_params.get(
            "last_event_id", ""
        )
        try:
            last_seq = int(raw_last)
        except ValueError:
            last_seq = -1

        async def stream():
            queue: asyncio.Queue = asyncio.Queue()
            with runtime.lock:
                backlog = [item for item in runtime.buffer if item["seq"] > last_seq]
                runtime.subscribers.add(queue)
            sent = last_seq
            try:
                yield ": connected\n\n"
                for item in backlog:
                    yield _sse_frame(item)
                    sent = item["seq"]
                while True:
                    try:
                        item = await asyncio.wait_for(queue.get(), SSE_HEARTBEAT_S)
                    except asyncio.TimeoutError:
                        yield ": ping\n\n"
                        continue
                    if item["seq"] <= sent:
                        continue
                    yield _sse_frame(item)
                    sent = item["seq"]
            finally:
                with runtime.lock:
                    runtime.subscribers.discard(queue)

        return StreamingResponse(
            stream(),
            media_type="text/event-stream",
            headers={"Cache-Control": "no-cache", "X-Accel-Buffering": "no"},
        )

    # -- extension federation ---------------------------------------------

    @app.websocket("/ws/extension")
    async def extension_socket(websocket: WebSocket):
        if state.token:
            header = websocket.headers.get("authorization", "")
            if header != f"Bearer {state.token}":
                await websocket.close(code=4401)
                return
        await websocket.accept()

        async def send_error(kind: str, message: str, **extra):
            payload = {"type": "error", "error": {"kind": kind, "message": message}}
            payload.update(extra)
            await websocket.send_text(json.dumps(payload))

        try:
            raw = await asyncio.wait_for(websocket.receive_text(), timeout=15)
            register = json.loads(raw)
        except asyncio.TimeoutError:
            await websocket.close(code=4400)
            return
        except (WebSocketDisconnect, RuntimeError):
            return
        except ValueError:
            await send_error("MalformedRegister", "first message must be JSON")
            await websocket.close(code=4400)
            return

        error = None
        service_id = None
        descriptors: list[ToolDescriptor] = []
        if not isinstance(register, dict) or register.get("type") != "register":
            error = ("MalformedRegister", "first message must be a register message")
        else:
            service_id = register.get("service_id")
            tools = register.get("tools")
            if not service_id or not isinstance(service_id, str):
                error = ("MalformedRegister", "register needs a string service_id")
            elif not isinstance(tools, list) or not tools:
                error = ("MalformedRegister", "register needs a non-empty tools list")
            else:
                try:
                    descriptors = [
                        ToolDescriptor.from_dict(
                            t, origin="remote", service_id=service_id
                        )
                        for t in tools
                    ]
                    for d in descriptors:
                        d.validate()
                except InvalidDescriptor as exc:
                    error = ("MalformedRegister", str(exc))
        if error is None:
            if service_id in state.extensions:
                error = ("DuplicateServiceId", f"service {service_id!r} is already connected")
            else:
                collisions = [d.name for d in descriptors if d.name in state.registry]
                if collisions:
                    error = (
                        "ToolNameCollision",
                        f"tool names already registered: {', '.join(sorted(collisions))}",
                    )
        if error is not None:
            await send_error(*error)
            await websocket.close(code=4409)
            return

        ext = ExtensionSession(
            service_id=service_id,
            websocket=websocket,
            tool_names=[d.name for d in descriptors],
            last_seen=time.monotonic(),
        )
        # Registration is atomic: names were checked free above, under the
        # single-threaded event loop, and registered together here.
        for descriptor in descriptors:
            state.registry.register(
                descriptor, state.make_remote_handler(service_id, descriptor.name)
            )
        state.extensions[service_id] = ext
        await ext.send(
            {"type": "registered", "service_id": service_id, "tools": ext.tool_names}
        )
        logger.info("extension %s registered tools %s", service_id, ext.tool_names)

        async def pinger():
            interval = state.liveness_s / 2
            while True:
                await asyncio.sleep(interval)
                if time.monotonic() - ext.last_seen > 2 * state.liveness_s:
                    await websocket.close(code=4408)
                    return
                try:
                    await ext.send({"type": "ping"})
                except Exception:
                    return

        ping_task = asyncio.create_task(pinger())
        try:
            while True:
                raw = await websocket.receive_text()
                ext.last_seen = time.monotonic()
                try:
                    message = json.loads(raw)
                    if not isinstance(message, dict):
                        raise ValueError("not an object")
                except ValueError:
                    await send_error("MalformedMessage", "messages must be JSON objects")
                    continue
                kind = message.get("type")
                if kind == "result":
                    state.resolve_remote_result(message)
                elif kind == "ping":
                    await ext.send({"type": "pong"})
                elif kind == "pong":
                    pass
                else:
                    await send_error(
                        "UnknownType", f"unsupported message type {kind!r}"
                    )
        except WebSocketDisconnect:
            pass
        except RuntimeError:
            pass
        finally:
            ping_task.cancel()
            state.drop_extension(service_id)
            logger.info("extension %s disconnected", service_id)

    return app


def _sse_frame(item: dict) -> str:
    return f"id: {item['seq']}\ndata: {json.dumps(item['event'], ensure_ascii=False)}\n\n"
