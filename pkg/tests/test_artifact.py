import hashlib

import numpy as np
import pytest

from agentkit.errors import BadMagic, DigestMismatch, TruncatedFile, UnsupportedVersion
from agentkit.ingest.chunking import Chunk
from agentkit.vexidx import (
    KnowledgeBase,
    content_digest,
    dumps,
    load_artifact,
    loads,
    save_artifact,
)


def make_kb(n=5, dim=8, seed=0):
    rng = np.random.default_rng(seed)
    chunks = [
        Chunk(
            chunk_id=f"src:0:{i}",
            source_id="src",
            url="file:///doc.md",
            offset=i * 80,
            text=f"chunk {i} text with unicode åé— and \"quotes\"\nnewline",
        )
        for i in range(n)
    ]
    vectors = rng.standard_normal((n, dim)).astype(np.float32)
    return KnowledgeBase(chunks=chunks, vectors=vectors)


def test_round_trip_bit_exact(tmp_path):
    kb = make_kb()
    path = tmp_path / "kb.bikb"
    digest = save_artifact(kb, path)
    loaded = load_artifact(path)
    assert [c.__dict__ for c in loaded.chunks] == [c.__dict__ for c in kb.chunks]
    assert loaded.vectors.tobytes() == kb.vectors.tobytes()
    assert content_digest(loaded) == digest


def test_digest_stable_across_saves(tmp_path):
    kb = make_kb()
    d1 = save_artifact(kb, tmp_path / "a.bikb")
    d2 = save_artifact(kb, tmp_path / "b.bikb")
    assert d1 == d2
    assert (tmp_path / "a.bikb").read_bytes() == (tmp_path / "b.bikb").read_bytes()


def test_empty_kb_round_trip(tmp_path):
    kb = KnowledgeBase(chunks=[], vectors=np.zeros((0, 16), dtype=np.float32))
    path = tmp_path / "empty.bikb"
    save_artifact(kb, path)
    loaded = load_artifact(path)
    assert len(loaded) == 0
    assert loaded.dim == 16


def test_bad_magic():
    data = dumps(make_kb())
    with pytest.raises(BadMagic):
        loads(b"XXXX" + data[4:])


def test_unsupported_version():
    data = bytearray(dumps(make_kb()))
    data[4:8] = (99).to_bytes(4, "little")
    # digest no longer matters: version is checked before the digest
    with pytest.raises(UnsupportedVersion):
        loads(bytes(data))


def test_truncated_mid_vectors():
    data = dumps(make_kb())
    with pytest.raises(TruncatedFile):
        loads(data[: len(data) - 40])


def test_truncated_header():
    data = dumps(make_kb())
    with pytest.raises(TruncatedFile):
        loads(data[:10])


def test_trailing_garbage():
    data = dumps(make_kb())
    with pytest.raises(TruncatedFile):
        loads(data + b"extra")


def test_digest_mismatch_on_corruption():
    data = bytearray(dumps(make_kb()))
    # flip one byte inside the metadata section
    data[40] ^= 0xFF
    with pytest.raises(DigestMismatch):
        loads(bytes(data))


def test_layout_fields():
    kb = make_kb(n=3, dim=4)
    data = dumps(kb)
    assert data[:4] == b"BIKB"
    assert int.from_bytes(data[4:8], "little") == 1
    assert int.from_bytes(data[8:12], "little") == 4
    assert int.from_bytes(data[12:20], "little") == 3
    metadata_len = int.from_bytes(data[20:28], "little")
    vec_bytes = 3 * 4 * 4
    assert len(data) == 28 + metadata_len + vec_bytes + 32
    assert hashlib.sha256(data[:-32]).digest() == data[-32:]


def test_vectors_little_endian_float32():
    kb = make_kb(n=2, dim=3, seed=5)
    data = dumps(kb)
    metadata_len = int.from_bytes(data[20:28], "little")
    start = 28 + metadata_len
    raw = data[start : start + 2 * 3 * 4]
    assert raw == kb.vectors.astype("<f4").tobytes()
