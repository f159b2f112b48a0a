"""Portable binary knowledge-base artifact.

Layout, all integers little-endian:

    magic "BIKB" (4 bytes)
    u32 version (currently 1)
    u32 dim
    u64 n_chunks
    u64 metadata_len
    metadata: n_chunks JSON lines {chunk_id, source_id, url, offset, text}, UTF-8
    vectors: n_chunks * dim float32
    sha256 of all preceding bytes (32 bytes)

The JSON lines use a fixed key order and compact separators so identical
knowledge bases serialize to identical bytes; the trailing SHA-256 doubles
as the artifact's content digest.
"""

from __future__ import annotations

import hashlib
import json
import struct

import numpy as np

from agentkit.errors import BadMagic, DigestMismatch, TruncatedFile, UnsupportedVersion
from agentkit.ingest.chunking import Chunk
from agentkit.vexidx.kb import KnowledgeBase

MAGIC = b"BIKB"
VERSION = 1
_HEADER = struct.Struct("<II Q Q")  # version, dim, n_chunks, metadata_len


def dumps(kb: KnowledgeBase) -> bytes:
    lines = []
    for chunk in kb.chunks:
        record = {
            "chunk_id": chunk.chunk_id,
            "source_id": chunk.source_id,
            "url": chunk.url,
            "offset": chunk.offset,
            "text": chunk.text,
        }
        lines.append(
            json.dumps(record, ensure_ascii=False, separators=(",", ":")).encode("utf-8")
        )
    metadata = b"".join(line + b"\n" for line in lines)
    body = (
        MAGIC
        + _HEADER.pack(VERSION, kb.dim, len(kb.chunks), len(metadata))
        + metadata
        + np.ascontiguousarray(kb.vectors, dtype="<f4").tobytes(order="C")
    )
    return body + hashlib.sha256(body).digest()


def content_digest(kb: KnowledgeBase) -> str:
    """Hex digest identifying the artifact's exact content."""
    return hashlib.sha256(dumps(kb)[:-32]).hexdigest()


def loads(data: bytes, *, embedder_name: str = "") -> KnowledgeBase:
    if len(data) < 4:
        raise TruncatedFile(f"file is {len(data)} bytes, shorter than the magic")
    if data[:4] != MAGIC:
        raise BadMagic(f"bad magic {data[:4]!r}, expected {MAGIC!r}")
    if len(data) < 4 + _HEADER.size:
        raise TruncatedFile("file ends inside the header")
    version, dim, n_chunks, metadata_len = _HEADER.unpack_from(data, 4)
    if version != VERSION:
        raise UnsupportedVersion(f"artifact version {version}, expected {VERSION}")

    meta_start = 4 + _HEADER.size
    vec_len = n_chunks * dim * 4
    expected = meta_start + metadata_len + vec_len + 32
    if len(data) < expected:
        raise TruncatedFile(f"expected {expected} bytes, found {len(data)}")
    if len(data) > expected:
        raise TruncatedFile(
            f"expected {expected} bytes, found {len(data)} (trailing bytes)"
        )

    digest = hashlib.sha256(data[:-32]).digest()
    if digest != data[-32:]:
        raise DigestMismatch("stored SHA-256 does not match file contents")

    metadata = data[meta_start : meta_start + metadata_len]
    lines = metadata.decode("utf-8").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) != n_chunks:
        raise TruncatedFile(
            f"metadata holds {len(lines)} records, header says {n_chunks}"
        )
    chunks = []
    for line in lines:
        record = json.loads(line)
        chunks.append(
            Chunk(
                chunk_id=record["chunk_id"],
                source_id=record["source_id"],
                url=record["url"],
                offset=record["offset"],
                text=record["text"],
            )
        )

    vec_bytes = data[meta_start + metadata_len : meta_start + metadata_len + vec_len]
    vectors = np.frombuffer(vec_bytes, dtype="<f4").reshape(n_chunks, dim).copy()
    return KnowledgeBase(chunks=chunks, vectors=vectors, embedder_name=embedder_name)


def save_artifact(kb: KnowledgeBase, path) -> str:
    """Write the artifact and return its content digest (hex)."""
    data = dumps(kb)
    with open(path, "wb") as fh:
        fh.write(data)
    return hashlib.sha256(data[:-32]).hexdigest()


def load_artifact(path, *, embedder_name: str = "") -> KnowledgeBase:
    with open(path, "rb") as fh:
        data = fh.read()
    return loads(data, embedder_name=embedder_name)
