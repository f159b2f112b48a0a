"""Deterministic offline embedder: feature-hashed character trigrams.

Each trigram of the lowercased text is packed into 63 bits (three Unicode
codepoints, 21 bits each — an injective packing since codepoints stay below
2^21), avalanched through splitmix64, and scattered into `dim` buckets with
the bucket index taken modulo dim and the sign from hash bit 63. The result
is L2-normalized. Everything is fixed-width integer arithmetic on uint64,
so vectors are bitwise identical across platforms and interpreter runs.
"""

from __future__ import annotations

import numpy as np

from agentkit.embed.vectors import normalize

_U = np.uint64


def _splitmix64(x: np.ndarray) -> np.ndarray:
    z = x + _U(0x9E3779B97F4A7C15)
    z = (z ^ (z >> _U(30))) * _U(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> _U(27))) * _U(0x94D049BB133111EB)
    return z ^ (z >> _U(31))


def hash_embed(text: str, dim: int) -> np.ndarray:
    """Embed text into a unit-normalized float32 vector of length dim."""
    if dim < 8:
        raise ValueError(f"dim must be >= 8, got {dim}")
    codepoints = np.frombuffer(
        text.lower().encode("utf-32-le"), dtype=np.uint32
    ).astype(np.uint64)
    if codepoints.size < 3:
        return normalize(np.zeros(dim, dtype=np.float32))
    packed = (
        (codepoints[:-2] << _U(42))
        ^ (codepoints[1:-1] << _U(21))
        ^ codepoints[2:]
    )
    hashes = _splitmix64(packed)
    buckets = (hashes % _U(dim)).astype(np.int64)
    signs = np.where((hashes >> _U(63)) == 0, 1.0, -1.0)
    vec = np.bincount(buckets, weights=signs, minlength=dim)
    return normalize(vec)


class HashEmbedder:
    """EmbeddingProvider backed by hash_embed; the provider used offline."""

    def __init__(self, dim: int = 256):
        if dim < 8:
            raise ValueError(f"dim must be >= 8, got {dim}")
        self.dim = dim

    @property
    def name(self) -> str:
        return f"hash-{self.dim}"

    def embed_batch(self, texts: list[str]) -> np.ndarray:
        if not texts:
            return np.zeros((0, self.dim), dtype=np.float32)
        return np.stack([hash_embed(t, self.dim) for t in texts])

    def embed_one(self, text: str) -> np.ndarray:
        return hash_embed(text, self.dim)
