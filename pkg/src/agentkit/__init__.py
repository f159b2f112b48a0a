"""agentkit: a retrieval-augmented agent engine.

Manifest-driven knowledge bases with cosine-similarity search, a ReAct
tool-calling loop over pluggable LLM providers, and a federation layer where
schema-described tools register locally or over a wire protocol and are
exported as an OpenAPI surface.
"""

__version__ = "0.1.0"
