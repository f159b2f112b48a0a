"""Manifest parsing, document normalization, chunking, and knowledge-base builds."""

from agentkit.ingest.chunking import Chunk, ChunkPolicy, chunk_document
from agentkit.ingest.manifest import DocumentSource, parse_manifest
from agentkit.ingest.normalize import PlainDocument, normalize_document
from agentkit.ingest.fetch import FileFetcher, HttpFetcher
from agentkit.ingest.build import build_knowledge_base

__all__ = [
    "Chunk",
    "ChunkPolicy",
    "chunk_document",
    "DocumentSource",
    "parse_manifest",
    "PlainDocument",
    "normalize_document",
    "FileFetcher",
    "HttpFetcher",
    "build_knowledge_base",
]
