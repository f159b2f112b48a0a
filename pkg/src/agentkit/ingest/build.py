"""Build a knowledge base from manifest sources: fetch, normalize, chunk, embed."""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from agentkit.errors import AgentKitError, EmbeddingError, FetchError
from agentkit.ingest.chunking import Chunk, ChunkPolicy, chunk_document
from agentkit.ingest.manifest import DocumentSource
from agentkit.ingest.normalize import PdfExtractor, normalize_document


def _sources_digest(sources: list[DocumentSource]) -> str:
    canonical = json.dumps(
        [
            {
                "id": s.id,
                "name": s.name,
                "description": s.description,
                "links": list(s.links),
                "format": s.format,
            }
            for s in sources
        ],
        sort_keys=True,
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def build_knowledge_base(
    sources: list[DocumentSource],
    fetcher,
    embedder,
    policy: ChunkPolicy = ChunkPolicy(),
    *,
    pdf_extractor: PdfExtractor | None = None,
    manifest_digest: str | None = None,
    max_workers: int = 4,
) -> KnowledgeBase:
    """Fetch every source link, chunk the documents, and embed the chunks.

    Per-link failures are collected as warnings; a source whose links all
    fail raises FetchError. The result is deterministic for a deterministic
    fetcher and embedder.
    """
    # Imported here: vexidx depends on the chunk type from this package.
    from agentkit.vexidx.kb import KnowledgeBase

    warnings: list[str] = []
    chunks: list[Chunk] = []

    def fetch_one(source: DocumentSource, url_index: int, link: str):
        raw = fetcher.fetch(link)
        return normalize_document(
            raw,
            source.format,
            source_id=source.id,
            url=link,
            pdf_extractor=pdf_extractor,
        )

    jobs = [
        (source, url_index, link)
        for source in sources
        for url_index, link in enumerate(source.links)
    ]
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        futures = [pool.submit(fetch_one, *job) for job in jobs]
        results = []
        for (source, url_index, link), future in zip(jobs, futures):
            try:
                results.append((source, url_index, future.result()))
            except AgentKitError as exc:
                warnings.append(f"{source.id}: {link}: {exc}")
                results.append((source, url_index, None))

    docs_per_source = {s.id: 0 for s in sources}
    for source, url_index, doc in results:
        if doc is None:
            continue
        docs_per_source[source.id] += 1
        chunks.extend(chunk_document(doc, policy, url_index=url_index))

    for source in sources:
        if source.links and docs_per_source[source.id] == 0:
            raise FetchError(
                f"source {source.id!r}: every link failed "
                f"({'; '.join(w for w in warnings if w.startswith(source.id + ':'))})"
            )

    if chunks:
        try:
            vectors = embedder.embed_batch([c.text for c in chunks])
        except AgentKitError:
            raise
        except Exception as exc:
            raise EmbeddingError(f"embedding failed: {exc}") from exc
        vectors = np.ascontiguousarray(vectors, dtype=np.float32)
    else:
        vectors = np.zeros((0, embedder.dim), dtype=np.float32)

    return KnowledgeBase(
        chunks=chunks,
        vectors=vectors,
        embedder_name=getattr(embedder, "name", ""),
        source_names={s.id: s.name for s in sources},
        manifest_digest=manifest_digest or _sources_digest(sources),
        build_warnings=warnings,
        embedder=embedder,
    )
