"""LLM providers: the scripted test double and the remote chat client."""

from __future__ import annotations

import json
import os

from agentkit.errors import ParseFailure, ProviderUnavailable
from agentkit.agent.types import (
    Action,
    FinalAnswer,
    PromptBundle,
    ToolCallRequest,
    ToolCalls,
)

ENV_BASE_URL = "AGENTKIT_LLM_BASE_URL"
ENV_API_KEY = "AGENTKIT_LLM_API_KEY"
ENV_MODEL = "AGENTKIT_LLM_MODEL"


def parse_action(payload) -> Action:
    """Map a provider's structured response to an Action.

    Accepted shapes:
        {"type": "final", "text": str}
        {"type": "tool_calls", "reasoning"?: str,
         "calls": [{"tool": str, "args": object}, ...]}   (calls non-empty)
    """
    if not isinstance(payload, dict):
        raise ParseFailure(f"action payload must be an object, got {type(payload).__name__}")
    kind = payload.get("type")
    if kind == "final":
        text = payload.get("text")
        if not isinstance(text, str):
            raise ParseFailure("final action needs a string 'text'")
        return FinalAnswer(text=text)
    if kind == "tool_calls":
        calls = payload.get("calls")
        if not isinstance(calls, list) or not calls:
            raise ParseFailure("tool_calls action needs a non-empty 'calls' list")
        requests = []
        for i, call in enumerate(calls):
            if not isinstance(call, dict) or not isinstance(call.get("tool"), str):
                raise ParseFailure(f"calls[{i}] needs a string 'tool'")
            args = call.get("args", {})
            if not isinstance(args, dict):
                raise ParseFailure(f"calls[{i}].args must be an object")
            requests.append(ToolCallRequest(tool=call["tool"], args=args))
        reasoning = payload.get("reasoning")
        if reasoning is not None and not isinstance(reasoning, str):
            raise ParseFailure("'reasoning' must be a string when present")
        return ToolCalls(calls=tuple(requests), reasoning=reasoning)
    raise ParseFailure(f"unknown action type {kind!r}")


class ScriptedProvider:
    """Replays a fixed sequence of actions and records every request.

    Script items may be Action instances, raw payload dicts (run through
    parse_action, so malformed payloads exercise the corrective path), or
    exceptions to raise. An exhausted script raises ProviderUnavailable.
    """

    def __init__(self, script: list):
        self.script = list(script)
        self.requests: list[PromptBundle] = []
        self.calls_made = 0

    def complete(self, bundle: PromptBundle) -> Action:
        self.requests.append(bundle)
        self.calls_made += 1
        if not self.script:
            raise ProviderUnavailable("scripted provider: script exhausted")
        item = self.script.pop(0)
        if isinstance(item, Exception):
            raise item
        if isinstance(item, (FinalAnswer, ToolCalls)):
            return item
        return parse_action(item)


class LoopingProvider:
    """Returns the same action forever; useful for iteration-limit tests."""

    def __init__(self, action: Action):
        self.action = action
        self.calls_made = 0

    def complete(self, bundle: PromptBundle) -> Action:
        self.calls_made += 1
        return self.action


class RemoteChatProvider:
    """Chat-completions HTTP provider with function-calling support."""

    def __init__(
        self,
        base_url: str,
        model: str,
        api_key: str = "",
        *,
        timeout: float = 120.0,
    ):
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.api_key = api_key
        self.timeout = timeout

    @classmethod
    def from_env(cls, **kwargs) -> "RemoteChatProvider":
        base_url = os.environ.get(ENV_BASE_URL)
        model = os.environ.get(ENV_MODEL)
        if not base_url or not model:
            raise ProviderUnavailable(
                f"remote LLM needs {ENV_BASE_URL} and {ENV_MODEL} set"
            )
        return cls(base_url, model, os.environ.get(ENV_API_KEY, ""), **kwargs)

    def complete(self, bundle: PromptBundle) -> Action:
        import requests

        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        messages = [{"role": "system", "content": bundle.system}]
        for msg in bundle.messages:
            role = msg["role"]
            # Chat-completion APIs expect tool results under role "tool".
            messages.append({"role": role, "content": msg["content"]})
        body: dict = {"model": self.model, "messages": messages}
        if bundle.tools:
            body["tools"] = [
                {
                    "type": "function",
                    "function": {
                        "name": t.name,
                        "description": t.description,
                        "parameters": t.input_schema,
                    },
                }
                for t in bundle.tools
            ]
        try:
            resp = requests.post(
                f"{self.base_url}/chat/completions",
                json=body,
                headers=headers,
                timeout=self.timeout,
            )
        except requests.RequestException as exc:
            raise ProviderUnavailable(f"LLM request failed: {exc}") from exc
        if resp.status_code != 200:
            raise ProviderUnavailable(
                f"LLM server returned HTTP {resp.status_code}"
            )
        try:
            message = resp.json()["choices"][0]["message"]
        except (KeyError, IndexError, ValueError) as exc:
            raise ParseFailure(f"malformed chat-completion response: {exc}") from exc

        tool_calls = message.get("tool_calls")
        if tool_calls:
            calls = []
            for tc in tool_calls:
                fn = tc.get("function", {})
                try:
                    args = json.loads(fn.get("arguments") or "{}")
                except ValueError as exc:
                    raise ParseFailure(
                        f"tool call arguments are not valid JSON: {exc}"
                    ) from exc
                calls.append({"tool": fn.get("name"), "args": args})
            return parse_action(
                {
                    "type": "tool_calls",
                    "calls": calls,
                    "reasoning": message.get("content") or None,
                }
            )
        return parse_action({"type": "final", "text": message.get("content") or ""})
