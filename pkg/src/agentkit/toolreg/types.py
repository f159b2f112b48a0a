"""Tool descriptors, calls, and observations — the federation currency."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any

from agentkit.errors import InvalidDescriptor

_NAME_RE = re.compile(r"^[a-zA-Z0-9_]+$")

_ALLOWED_TYPES = {"string", "number", "integer", "boolean", "array", "object"}


@dataclass(frozen=True)
class ToolDescriptor:
    name: str
    description: str
    input_schema: dict
    origin: str = "local"  # "local" or "remote"
    service_id: str | None = None

    def validate(self) -> None:
        if not _NAME_RE.match(self.name or ""):
            raise InvalidDescriptor(
                f"tool name {self.name!r} must match [a-zA-Z0-9_]+"
            )
        if not self.description or not self.description.strip():
            raise InvalidDescriptor(f"tool {self.name!r} needs a description")
        _check_schema(self.input_schema, self.name, root=True)
        if self.origin not in ("local", "remote"):
            raise InvalidDescriptor(f"unknown origin {self.origin!r}")
        if self.origin == "remote" and not self.service_id:
            raise InvalidDescriptor("remote tools need a service_id")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "input_schema": self.input_schema,
        }

    @classmethod
    def from_dict(
        cls, data: dict, *, origin: str = "local", service_id: str | None = None
    ) -> "ToolDescriptor":
        if not isinstance(data, dict):
            raise InvalidDescriptor("tool descriptor must be an object")
        return cls(
            name=data.get("name", ""),
            description=data.get("description", ""),
            input_schema=data.get("input_schema", {}),
            origin=origin,
            service_id=service_id,
        )


def _check_schema(schema, tool_name: str, *, root: bool = False) -> None:
    if not isinstance(schema, dict):
        raise InvalidDescriptor(f"tool {tool_name!r}: schema must be an object")
    stype = schema.get("type")
    if root and stype != "object":
        raise InvalidDescriptor(
            f"tool {tool_name!r}: schema root must have type 'object', got {stype!r}"
        )
    if stype is not None and stype not in _ALLOWED_TYPES:
        raise InvalidDescriptor(
            f"tool {tool_name!r}: unsupported schema type {stype!r}"
        )
    properties = schema.get("properties", {})
    if not isinstance(properties, dict):
        raise InvalidDescriptor(f"tool {tool_name!r}: 'properties' must be an object")
    for prop_schema in properties.values():
        _check_schema(prop_schema, tool_name)
    required = schema.get("required", [])
    if not isinstance(required, list) or not all(isinstance(r, str) for r in required):
        raise InvalidDescriptor(f"tool {tool_name!r}: 'required' must be a string list")
    if "items" in schema:
        _check_schema(schema["items"], tool_name)
    if "enum" in schema and not isinstance(schema["enum"], list):
        raise InvalidDescriptor(f"tool {tool_name!r}: 'enum' must be a list")


@dataclass(frozen=True)
class ToolCall:
    call_id: str
    tool: str
    args: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"call_id": self.call_id, "tool": self.tool, "args": self.args}


@dataclass(frozen=True)
class Observation:
    call_id: str
    ok: bool
    value: Any = None
    error_kind: str | None = None
    error_message: str | None = None

    @classmethod
    def success(cls, call_id: str, value: Any) -> "Observation":
        return cls(call_id=call_id, ok=True, value=value)

    @classmethod
    def failure(cls, call_id: str, kind: str, message: str) -> "Observation":
        return cls(call_id=call_id, ok=False, error_kind=kind, error_message=message)

    @property
    def outcome_kind(self) -> str:
        return "ok" if self.ok else f"error({self.error_kind})"

    def to_dict(self) -> dict:
        if self.ok:
            return {"call_id": self.call_id, "ok": True, "value": self.value}
        return {
            "call_id": self.call_id,
            "ok": False,
            "error": {"kind": self.error_kind, "message": self.error_message},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Observation":
        if data.get("ok"):
            return cls.success(data["call_id"], data.get("value"))
        error = data.get("error") or {}
        return cls.failure(
            data.get("call_id", ""),
            error.get("kind", "HandlerError"),
            error.get("message", ""),
        )
