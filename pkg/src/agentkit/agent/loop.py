"""The ReAct loop: context assembly, action execution, observation feedback.

A turn alternates provider calls and tool executions until the provider
answers, the iteration limit trips, or the provider goes away. Tool errors
never abort the loop; they come back as observations so the model can refine
its next action.
"""

from __future__ import annotations

import json

from agentkit.errors import ParseFailure, ProviderUnavailable, SessionBusy
from agentkit.agent.types import (
    AgentEvent,
    FinalAnswer,
    PromptBundle,
    Session,
    ToolCalls,
)
from agentkit.toolreg import DEFAULT_DEADLINE_S, ToolCall, ToolRegistry

CORRECTIVE_FEEDBACK = (
    "Your last response was not a valid action. Reply with either a final "
    "answer or a non-empty list of tool calls."
)

SUMMARY_INSTRUCTION = (
    "Summarize the actions taken in this turn: name each tool used, what it "
    "was asked, and whether it succeeded. Reply with the summary text only."
)

NO_TOOLS_SUMMARY = "No tools were used."


def build_context(session: Session, registry: ToolRegistry) -> PromptBundle:
    """Assemble the provider request: instructions, profile, trimmed history.

    History is truncated oldest-first to the assistant's character budget by
    dropping whole messages; the current turn (the latest user message and
    every observation after it) is never dropped.
    """
    assistant = session.assistant
    system = assistant.instructions
    if session.profile:
        system = f"{system}\n\nUser profile:\n{session.profile}"

    protect_from = session.current_turn_start
    if protect_from is None:
        protect_from = 0
        for i in range(len(session.history) - 1, -1, -1):
            if session.history[i].role == "user":
                protect_from = i
                break

    messages = [m.to_dict() for m in session.history]
    total = sum(len(m.content) for m in session.history)
    drop = 0
    while total > assistant.context_char_budget and drop < protect_from:
        total -= len(session.history[drop].content)
        drop += 1
    return PromptBundle(
        system=system,
        messages=messages[drop:],
        tools=registry.descriptors_for(assistant.tool_names),
    )


def summarize_actions(trace: list, llm=None) -> str:
    """One line per tool call, or an LLM-written summary when one is given."""
    if llm is not None:
        rendered = "\n".join(
            f"{call.tool}({json.dumps(call.args, ensure_ascii=False)}) -> {obs.outcome_kind}"
            for call, obs in trace
        )
        try:
            action = llm.complete(
                PromptBundle(
                    system=SUMMARY_INSTRUCTION,
                    messages=[{"role": "user", "content": rendered or "(no tool calls)"}],
                )
            )
            if isinstance(action, FinalAnswer):
                return action.text
        except Exception:
            pass
    if not trace:
        return NO_TOOLS_SUMMARY
    return "\n".join(f"{call.tool}: {obs.outcome_kind}" for call, obs in trace)


def run_turn(
    session: Session,
    user_message: str,
    llm,
    registry: ToolRegistry,
    sink,
    *,
    tool_deadline: float = DEFAULT_DEADLINE_S,
    llm_summary: bool = False,
) -> AgentEvent:
    """Run one ReAct turn; returns the terminal event (final or failed).

    Events are delivered to ``sink`` in order. A second concurrent turn on
    the same session raises SessionBusy before any event is emitted.
    """
    if not session.turn_lock.acquire(blocking=False):
        raise SessionBusy(f"session {session.session_id} already has a turn running")
    try:
        assistant = session.assistant
        turn_index = session.turn_count
        session.turn_count += 1
        session.current_turn_start = len(session.history)
        session.append("user", user_message)

        def emit(event: AgentEvent) -> AgentEvent:
            sink(event)
            return event

        emit(AgentEvent.turn_started())
        trace: list = []
        call_ordinal = 0

        for _ in range(assistant.max_iterations):
            bundle = build_context(session, registry)
            try:
                action = llm.complete(bundle)
            except ParseFailure:
                # Malformed output consumes an iteration; feed the failure
                # back so the provider can correct itself.
                session.append("user", CORRECTIVE_FEEDBACK)
                continue
            except ProviderUnavailable as exc:
                return emit(
                    AgentEvent.turn_failed(
                        "ProviderUnavailable", str(exc), _trace_dump(trace)
                    )
                )

            if isinstance(action, FinalAnswer):
                session.append("assistant", action.text)
                final = emit(AgentEvent.final_answer(action.text))
                summary = summarize_actions(trace, llm if llm_summary else None)
                emit(AgentEvent.action_summary(summary))
                return final

            if not isinstance(action, ToolCalls):
                session.append("user", CORRECTIVE_FEEDBACK)
                continue

            if action.reasoning:
                emit(AgentEvent.reasoning(action.reasoning))
            # One assistant message per issued call, reasoning on the first:
            # the history is then reconstructible from the event log alone.
            for position, request in enumerate(action.calls):
                call = ToolCall(
                    call_id=f"call-{turn_index}-{call_ordinal}",
                    tool=request.tool,
                    args=request.args,
                )
                call_ordinal += 1
                session.note_call_issued(call.call_id)
                session.append(
                    "assistant",
                    json.dumps(
                        {
                            "reasoning": action.reasoning
                            if (position == 0 and action.reasoning)
                            else None,
                            "call": call.to_dict(),
                        },
                        ensure_ascii=False,
                    ),
                )
                emit(AgentEvent.tool_call(call))
                observation = registry.invoke(call, deadline=tool_deadline)
                emit(AgentEvent.observation(observation))
                trace.append((call, observation))
                session.append(
                    "tool",
                    json.dumps(observation.to_dict(), ensure_ascii=False),
                    call_id=call.call_id,
                )

        return emit(
            AgentEvent.turn_failed(
                "IterationLimit",
                f"no final answer after {assistant.max_iterations} iterations",
                _trace_dump(trace),
            )
        )
    finally:
        session.current_turn_start = None
        session.turn_lock.release()


def _trace_dump(trace: list) -> list:
    return [
        {"tool": call.tool, "call_id": call.call_id, "outcome": obs.outcome_kind}
        for call, obs in trace
    ]
