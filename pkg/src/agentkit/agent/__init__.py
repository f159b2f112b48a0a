"""ReAct agent: sessions, actions, events, providers, and the turn loop."""

from agentkit.agent.types import (
    Action,
    AgentEvent,
    AssistantConfig,
    FinalAnswer,
    Message,
    PromptBundle,
    Session,
    ToolCallRequest,
    ToolCalls,
    EVENT_ACTION_SUMMARY,
    EVENT_FINAL_ANSWER,
    EVENT_OBSERVATION,
    EVENT_REASONING,
    EVENT_TOOL_CALL,
    EVENT_TURN_FAILED,
    EVENT_TURN_STARTED,
)
from agentkit.agent.providers import (
    LoopingProvider,
    RemoteChatProvider,
    ScriptedProvider,
    parse_action,
)
from agentkit.agent.loop import (
    CORRECTIVE_FEEDBACK,
    NO_TOOLS_SUMMARY,
    build_context,
    run_turn,
    summarize_actions,
)

__all__ = [
    "Action",
    "AgentEvent",
    "AssistantConfig",
    "FinalAnswer",
    "Message",
    "PromptBundle",
    "Session",
    "ToolCallRequest",
    "ToolCalls",
    "ScriptedProvider",
    "LoopingProvider",
    "RemoteChatProvider",
    "parse_action",
    "build_context",
    "run_turn",
    "summarize_actions",
    "CORRECTIVE_FEEDBACK",
    "NO_TOOLS_SUMMARY",
    "EVENT_TURN_STARTED",
    "EVENT_REASONING",
    "EVENT_TOOL_CALL",
    "EVENT_OBSERVATION",
    "EVENT_FINAL_ANSWER",
    "EVENT_ACTION_SUMMARY",
    "EVENT_TURN_FAILED",
]
