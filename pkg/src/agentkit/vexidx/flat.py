"""Exact flat index: brute-force cosine search with a total result order.

Hits are ordered by descending score with ties broken by ascending chunk_id,
so searches are exactly reproducible and testable against an independent
scan.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from agentkit.errors import DimensionMismatch
from agentkit.vexidx._kernels import score_all


@dataclass(frozen=True)
class SearchHit:
    chunk_id: str
    score: float
    rank: int


class FlatIndex:
    def __init__(self, ids: list[str], matrix: np.ndarray):
        matrix = np.ascontiguousarray(matrix, dtype=np.float32)
        if matrix.ndim != 2:
            raise ValueError("matrix must be 2-D (n_entries, dim)")
        if len(ids) != matrix.shape[0]:
            raise ValueError(
                f"got {len(ids)} ids for {matrix.shape[0]} vectors"
            )
        if len(set(ids)) != len(ids):
            raise ValueError("chunk ids must be unique")
        self.ids = list(ids)
        self.matrix = matrix

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]


def rank_hits(ids: np.ndarray, scores: np.ndarray, k: int) -> list[SearchHit]:
    """Top-k by (score desc, chunk_id asc). Scores must be float32."""
    # lexsort uses its last key as the primary one; float32 negation is exact.
    order = np.lexsort((ids, -scores))
    top = order[: min(k, len(order))]
    return [
        SearchHit(chunk_id=str(ids[i]), score=float(scores[i]), rank=rank)
        for rank, i in enumerate(top)
    ]


def search_flat(index: FlatIndex, query: np.ndarray, k: int) -> list[SearchHit]:
    """Exact search: scan every entry, return min(k, n) ranked hits."""
    query = np.asarray(query, dtype=np.float32).ravel()
    if query.shape[0] != index.dim:
        raise DimensionMismatch(
            f"query dim {query.shape[0]} != index dim {index.dim}"
        )
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if len(index) == 0:
        return []
    scores = score_all(index.matrix, query)
    return rank_hits(np.asarray(index.ids), scores, k)
