"""The knowledge base: chunks plus their embedding matrix."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from agentkit.ingest.chunking import Chunk
from agentkit.vexidx.flat import FlatIndex, SearchHit, search_flat


@dataclass
class KnowledgeBase:
    chunks: list[Chunk]
    vectors: np.ndarray
    embedder_name: str = ""
    source_names: dict[str, str] = field(default_factory=dict)
    manifest_digest: str | None = None
    build_warnings: list[str] = field(default_factory=list)
    # Live provider for query embedding; not persisted in the artifact.
    embedder: object | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.vectors = np.ascontiguousarray(self.vectors, dtype=np.float32)
        if self.vectors.ndim != 2:
            raise ValueError("vectors must be a 2-D array")
        if len(self.chunks) != self.vectors.shape[0]:
            raise ValueError(
                f"{len(self.chunks)} chunks but {self.vectors.shape[0]} vectors"
            )

    def __len__(self) -> int:
        return len(self.chunks)

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    @property
    def per_source_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for chunk in self.chunks:
            counts[chunk.source_id] = counts.get(chunk.source_id, 0) + 1
        return counts

    @cached_property
    def flat_index(self) -> FlatIndex:
        return FlatIndex([c.chunk_id for c in self.chunks], self.vectors)

    def search(self, query: np.ndarray, k: int) -> list[SearchHit]:
        return search_flat(self.flat_index, query, k)

    def chunk_by_id(self, chunk_id: str) -> Chunk:
        for chunk in self.chunks:
            if chunk.chunk_id == chunk_id:
                return chunk
        raise KeyError(chunk_id)

    def source_name(self, source_id: str) -> str:
        return self.source_names.get(source_id, source_id)
