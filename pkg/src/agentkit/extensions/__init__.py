"""Bundled agent tools: docs retrieval, web search, code execution, microscope."""

from agentkit.extensions.docs import (
    ContextBlock,
    REFORMULATION_INSTRUCTION,
    docs_tool_name,
    make_docs_tool,
    reformulate_query,
    retrieve_context,
)
from agentkit.extensions.websearch import (
    DictFetcher,
    DuckDuckGoProvider,
    SearchResult,
    StaticSearchProvider,
    make_websearch_tool,
    search_and_summarize,
)
from agentkit.extensions.coderun import (
    ExecutionResult,
    MockRunner,
    ProcessRunner,
    RunArtifact,
    format_error_observation,
    make_coderun_tool,
    run_code,
    source_digest,
)
from agentkit.extensions.microscope import ImageDescriptor, MicroscopeSimulator

__all__ = [
    "ContextBlock",
    "REFORMULATION_INSTRUCTION",
    "docs_tool_name",
    "make_docs_tool",
    "reformulate_query",
    "retrieve_context",
    "DictFetcher",
    "DuckDuckGoProvider",
    "SearchResult",
    "StaticSearchProvider",
    "make_websearch_tool",
    "search_and_summarize",
    "ExecutionResult",
    "MockRunner",
    "ProcessRunner",
    "RunArtifact",
    "format_error_observation",
    "make_coderun_tool",
    "run_code",
    "source_digest",
    "ImageDescriptor",
    "MicroscopeSimulator",
]
