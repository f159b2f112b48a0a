"""Network service: chat sessions, SSE event streams, federated extensions."""

from agentkit.gateway.state import (
    AssistantSpec,
    ExtensionSession,
    GatewayState,
    RemoteToolError,
    SessionRuntime,
)
from agentkit.gateway.app import create_app
from agentkit.gateway.server import GatewayThread, make_server, serve_blocking
from agentkit.gateway.extension_client import (
    ExtensionServer,
    RegistrationRejected,
    extension_ws_url,
)

__all__ = [
    "AssistantSpec",
    "ExtensionSession",
    "GatewayState",
    "RemoteToolError",
    "SessionRuntime",
    "create_app",
    "GatewayThread",
    "make_server",
    "serve_blocking",
    "ExtensionServer",
    "RegistrationRejected",
    "extension_ws_url",
]
