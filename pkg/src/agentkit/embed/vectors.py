"""Unit-normalized embedding vectors and cosine similarity.

Embeddings are 1-D float32 arrays, always L2-normalized, so cosine
similarity reduces to a dot product. Accumulation happens in float64 with a
fixed summation order, which keeps cosine_similarity exactly symmetric.
"""

from __future__ import annotations

import numpy as np

from agentkit.errors import DimensionMismatch


def normalize(values) -> np.ndarray:
    """L2-normalize to float32. A zero vector maps to the unit basis e0."""
    v = np.asarray(values, dtype=np.float32).ravel()
    norm = float(np.linalg.norm(v.astype(np.float64)))
    if norm == 0.0:
        out = np.zeros_like(v)
        if out.size:
            out[0] = 1.0
        return out
    return (v.astype(np.float64) / norm).astype(np.float32)


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    """Dot product of two pre-normalized vectors, accumulated in float64."""
    a = np.asarray(a, dtype=np.float32)
    b = np.asarray(b, dtype=np.float32)
    if a.shape != b.shape:
        raise DimensionMismatch(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.dot(a.astype(np.float64), b.astype(np.float64)))
