"""Fixed-window character chunking of normalized documents.

Chunk k covers [k * (chunk_size - overlap), min(start + chunk_size, len)).
Emission stops at the first chunk whose end reaches the document end, so the
final chunk may be short but every chunk before it has exactly `chunk_size`
characters and consecutive chunks overlap by exactly `overlap` characters.
"""

from __future__ import annotations

from dataclasses import dataclass

from agentkit.ingest.normalize import PlainDocument


@dataclass(frozen=True)
class ChunkPolicy:
    chunk_size: int = 1000
    overlap: int = 200

    def __post_init__(self):
        if self.chunk_size <= 0:
            raise ValueError(f"chunk_size must be positive, got {self.chunk_size}")
        if not 0 <= self.overlap < self.chunk_size:
            raise ValueError(
                f"overlap must satisfy 0 <= overlap < chunk_size, "
                f"got overlap={self.overlap}, chunk_size={self.chunk_size}"
            )

    @property
    def step(self) -> int:
        return self.chunk_size - self.overlap


@dataclass(frozen=True)
class Chunk:
    chunk_id: str
    source_id: str
    url: str
    offset: int
    text: str


def chunk_document(
    doc: PlainDocument, policy: ChunkPolicy = ChunkPolicy(), url_index: int = 0
) -> list[Chunk]:
    """Split a document into overlapping fixed-size chunks.

    Chunk ids follow the pattern ``{source_id}:{url_index}:{ordinal}`` with
    0-based dense ordinals. An empty document yields no chunks.
    """
    text = doc.text
    n = len(text)
    if n == 0:
        return []
    chunks: list[Chunk] = []
    k = 0
    while True:
        start = k * policy.step
        end = min(start + policy.chunk_size, n)
        chunks.append(
            Chunk(
                chunk_id=f"{doc.source_id}:{url_index}:{k}",
                source_id=doc.source_id,
                url=doc.url,
                offset=start,
                text=text[start:end],
            )
        )
        if end == n:
            break
        k += 1
    return chunks
