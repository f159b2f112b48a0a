"""Embedding providers and vector math."""

from __future__ import annotations

import numpy as np

from agentkit.errors import ProviderRejectedInput
from agentkit.embed.vectors import cosine_similarity, normalize
from agentkit.embed.hashing import HashEmbedder, hash_embed
from agentkit.embed.remote import RemoteEmbedder


def embed_batch(provider, texts: list[str]) -> np.ndarray:
    """Embed texts through a provider, preserving order.

    Every text must be a non-empty string; offenders are reported with their
    index. The result is an (n, dim) float32 array of unit vectors.
    """
    for i, text in enumerate(texts):
        if not isinstance(text, str) or not text:
            raise ProviderRejectedInput(
                f"text at index {i} is not a non-empty string", index=i
            )
    return provider.embed_batch(list(texts))


__all__ = [
    "cosine_similarity",
    "normalize",
    "hash_embed",
    "HashEmbedder",
    "RemoteEmbedder",
    "embed_batch",
]
