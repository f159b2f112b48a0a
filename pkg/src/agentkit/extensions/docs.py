"""Knowledge-base retrieval tool: query reformulation and context assembly."""

from __future__ import annotations

from dataclasses import dataclass, field

from agentkit.errors import EmptyKnowledgeBase
from agentkit.agent.types import FinalAnswer, PromptBundle
from agentkit.toolreg import ToolDescriptor
from agentkit.vexidx.flat import FlatIndex, search_flat
from agentkit.vexidx.kb import KnowledgeBase

REFORMULATION_INSTRUCTION = (
    "Rewrite the user's question as a short keyword search query for a "
    "documentation corpus. Reply with the query text only."
)

DEFAULT_TOP_K = 5
DEFAULT_CHAR_BUDGET = 4000


@dataclass
class ContextBlock:
    entries: list[dict] = field(default_factory=list)
    total_chars: int = 0

    def to_dict(self) -> dict:
        return {"entries": self.entries, "total_chars": self.total_chars}


def reformulate_query(llm, raw_query: str, recent_history: list[str] | None = None) -> str:
    """Ask the LLM for a search query; fall back to the raw query."""
    if not raw_query or llm is None:
        return raw_query
    lines = list(recent_history or [])
    lines.append(raw_query)
    try:
        action = llm.complete(
            PromptBundle(
                system=REFORMULATION_INSTRUCTION,
                messages=[{"role": "user", "content": "\n".join(lines)}],
            )
        )
    except Exception:
        return raw_query
    if isinstance(action, FinalAnswer) and action.text.strip():
        return action.text.strip()
    return raw_query


def retrieve_context(
    kb: KnowledgeBase,
    query: str,
    k: int = DEFAULT_TOP_K,
    char_budget: int = DEFAULT_CHAR_BUDGET,
    *,
    embedder=None,
    source_id: str | None = None,
) -> ContextBlock:
    """Top-k chunks for a query, greedily packed whole into a char budget.

    Entries keep their rank order; packing stops at the first entry that
    would push total_chars past the budget, so every included chunk is
    complete and its citation verifiable.
    """
    if len(kb) == 0:
        raise EmptyKnowledgeBase("knowledge base holds no chunks")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    embedder = embedder or kb.embedder
    if embedder is None:
        raise ValueError("no embedder attached to this knowledge base")

    if source_id is None:
        index = kb.flat_index
        lookup = {c.chunk_id: c for c in kb.chunks}
    else:
        rows = [i for i, c in enumerate(kb.chunks) if c.source_id == source_id]
        if not rows:
            raise EmptyKnowledgeBase(f"no chunks for source {source_id!r}")
        index = FlatIndex([kb.chunks[i].chunk_id for i in rows], kb.vectors[rows])
        lookup = {kb.chunks[i].chunk_id: kb.chunks[i] for i in rows}

    query_vec = embedder.embed_one(query)
    hits = search_flat(index, query_vec, k)

    block = ContextBlock()
    for hit in hits:
        chunk = lookup[hit.chunk_id]
        if block.total_chars + len(chunk.text) > char_budget:
            break
        block.entries.append(
            {
                "chunk_id": chunk.chunk_id,
                "source": kb.source_name(chunk.source_id),
                "source_id": chunk.source_id,
                "url": chunk.url,
                "text": chunk.text,
                "score": hit.score,
            }
        )
        block.total_chars += len(chunk.text)
    return block


def docs_tool_name(source_id: str) -> str:
    # Source slugs allow hyphens; tool names do not.
    return f"search_{source_id.replace('-', '_')}"


def make_docs_tool(
    kb: KnowledgeBase,
    *,
    source_id: str | None = None,
    llm=None,
    char_budget: int = DEFAULT_CHAR_BUDGET,
):
    """Build the (descriptor, handler) pair for a retrieval tool.

    With a source_id the tool searches only that collection and is named
    after it; otherwise it searches the whole knowledge base.
    """
    if source_id is not None:
        name = docs_tool_name(source_id)
        target = kb.source_name(source_id)
    else:
        name = "search_docs"
        target = "the documentation corpus"
    descriptor = ToolDescriptor(
        name=name,
        description=f"Search {target} and return the most relevant text segments.",
        input_schema={
            "type": "object",
            "properties": {
                "query": {"type": "string", "description": "What to look for"},
                "top_k": {
                    "type": "integer",
                    "description": "How many segments to return",
                    "default": DEFAULT_TOP_K,
                },
            },
            "required": ["query"],
        },
    )

    def handler(args: dict) -> dict:
        query = reformulate_query(llm, args["query"])
        block = retrieve_context(
            kb,
            query,
            k=args.get("top_k", DEFAULT_TOP_K),
            char_budget=char_budget,
            source_id=source_id,
        )
        return {"query": query, **block.to_dict()}

    return descriptor, handler
