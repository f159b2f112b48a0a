"""Schema-described tool registry with validation, dispatch, and OpenAPI export."""

from agentkit.toolreg.types import Observation, ToolCall, ToolDescriptor
from agentkit.toolreg.validation import validate_args
from agentkit.toolreg.registry import (
    DEFAULT_DEADLINE_S,
    ToolRegistry,
    invoke,
    register_tool,
)
from agentkit.toolreg.openapi import export_openapi, openapi_json

__all__ = [
    "Observation",
    "ToolCall",
    "ToolDescriptor",
    "validate_args",
    "ToolRegistry",
    "register_tool",
    "invoke",
    "DEFAULT_DEADLINE_S",
    "export_openapi",
    "openapi_json",
]
