"""Conversation state and the event vocabulary of a ReAct turn."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Any

EVENT_TURN_STARTED = "turn_started"
EVENT_REASONING = "reasoning"
EVENT_TOOL_CALL = "tool_call_issued"
EVENT_OBSERVATION = "observation_received"
EVENT_FINAL_ANSWER = "final_answer"
EVENT_ACTION_SUMMARY = "action_summary"
EVENT_TURN_FAILED = "turn_failed"


@dataclass
class AssistantConfig:
    name: str
    instructions: str
    tool_names: list[str] = field(default_factory=list)
    max_iterations: int = 10
    context_char_budget: int = 12000

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass(frozen=True)
class Message:
    role: str  # user | assistant | tool
    content: str
    call_id: str | None = None

    def to_dict(self) -> dict:
        data: dict = {"role": self.role, "content": self.content}
        if self.call_id is not None:
            data["call_id"] = self.call_id
        return data


class Session:
    """Assistant configuration plus an append-only message history."""

    def __init__(
        self,
        session_id: str,
        assistant: AssistantConfig,
        profile: str | None = None,
    ):
        self.session_id = session_id
        self.assistant = assistant
        self.profile = profile
        self.history: list[Message] = []
        self.turn_lock = threading.Lock()
        self.turn_count = 0
        self.current_turn_start: int | None = None
        self._issued_call_ids: set[str] = set()

    def append(self, role: str, content: str, call_id: str | None = None) -> Message:
        if role not in ("user", "assistant", "tool"):
            raise ValueError(f"unknown role {role!r}")
        if role == "tool":
            if call_id is None or call_id not in self._issued_call_ids:
                raise ValueError("tool messages must reference an issued call_id")
        msg = Message(role=role, content=content, call_id=call_id)
        self.history.append(msg)
        return msg

    def note_call_issued(self, call_id: str) -> None:
        self._issued_call_ids.add(call_id)


@dataclass(frozen=True)
class FinalAnswer:
    text: str


@dataclass(frozen=True)
class ToolCallRequest:
    tool: str
    args: dict


@dataclass(frozen=True)
class ToolCalls:
    calls: tuple[ToolCallRequest, ...]
    reasoning: str | None = None


Action = FinalAnswer | ToolCalls


@dataclass(frozen=True)
class AgentEvent:
    type: str
    data: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"type": self.type, **self.data}

    @classmethod
    def turn_started(cls) -> "AgentEvent":
        return cls(EVENT_TURN_STARTED)

    @classmethod
    def reasoning(cls, text: str) -> "AgentEvent":
        return cls(EVENT_REASONING, {"text": text})

    @classmethod
    def tool_call(cls, call) -> "AgentEvent":
        return cls(EVENT_TOOL_CALL, {"call": call.to_dict()})

    @classmethod
    def observation(cls, obs) -> "AgentEvent":
        return cls(EVENT_OBSERVATION, {"observation": obs.to_dict()})

    @classmethod
    def final_answer(cls, text: str) -> "AgentEvent":
        return cls(EVENT_FINAL_ANSWER, {"text": text})

    @classmethod
    def action_summary(cls, text: str) -> "AgentEvent":
        return cls(EVENT_ACTION_SUMMARY, {"text": text})

    @classmethod
    def turn_failed(cls, reason: str, message: str, trace: list | None = None) -> "AgentEvent":
        data: dict[str, Any] = {"reason": reason, "message": message}
        if trace is not None:
            data["trace"] = trace
        return cls(EVENT_TURN_FAILED, data)


@dataclass
class PromptBundle:
    system: str
    messages: list[dict]
    tools: list = field(default_factory=list)
