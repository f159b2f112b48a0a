import pytest

from agentkit.errors import FetchError
from agentkit.embed import HashEmbedder
from agentkit.ingest import FileFetcher, parse_manifest
from agentkit.ingest.build import build_knowledge_base
from agentkit.ingest.chunking import ChunkPolicy
from agentkit.ingest.manifest import DocumentSource
from agentkit.vexidx import content_digest


def test_build_from_corpus(small_kb):
    assert set(small_kb.per_source_counts) == {"deepimagej", "cellpose", "stardist"}
    assert len(small_kb) == small_kb.vectors.shape[0]
    assert small_kb.vectors.shape[1] == 64
    assert small_kb.embedder_name == "hash-64"
    assert small_kb.source_names["cellpose"] == "Cellpose"
    assert small_kb.manifest_digest


def test_single_doc_2500_chars_three_chunks(tmp_path):
    (tmp_path / "doc.md").write_text("x" * 2500)
    source = DocumentSource(id="one", name="One", links=("doc.md",))
    kb = build_knowledge_base(
        [source], FileFetcher(base_dir=str(tmp_path)), HashEmbedder(32), ChunkPolicy()
    )
    assert len(kb) == 3
    assert kb.vectors.shape == (3, 32)
    assert kb.per_source_counts == {"one": 3}


def test_empty_source_list():
    kb = build_knowledge_base([], FileFetcher(), HashEmbedder(16))
    assert len(kb) == 0
    assert kb.dim == 16


def test_all_links_failing_names_source(tmp_path):
    source = DocumentSource(id="gone", name="Gone", links=("missing.md",))
    with pytest.raises(FetchError) as excinfo:
        build_knowledge_base(
            [source], FileFetcher(base_dir=str(tmp_path)), HashEmbedder(16)
        )
    assert "gone" in str(excinfo.value)


def test_partial_link_failure_collected(tmp_path):
    (tmp_path / "ok.md").write_text("fine content here")
    source = DocumentSource(id="mixed", name="Mixed", links=("ok.md", "missing.md"))
    kb = build_knowledge_base(
        [source], FileFetcher(base_dir=str(tmp_path)), HashEmbedder(16)
    )
    assert len(kb) >= 1
    assert any("missing.md" in w for w in kb.build_warnings)


def test_deterministic_content_digest(corpus_dir):
    from tests.conftest import MANIFEST

    def build():
        sources = parse_manifest(MANIFEST, base_dir=str(corpus_dir))
        return build_knowledge_base(
            sources,
            FileFetcher(base_dir=str(corpus_dir)),
            HashEmbedder(64),
            ChunkPolicy(chunk_size=200, overlap=40),
        )

    assert content_digest(build()) == content_digest(build())


def test_chunk_ids_carry_url_index(tmp_path):
    (tmp_path / "a.md").write_text("alpha " * 50)
    (tmp_path / "b.md").write_text("beta " * 50)
    source = DocumentSource(id="two", name="Two", links=("a.md", "b.md"))
    kb = build_knowledge_base(
        [source], FileFetcher(base_dir=str(tmp_path)), HashEmbedder(16)
    )
    url_indexes = {c.chunk_id.split(":")[1] for c in kb.chunks}
    assert url_indexes == {"0", "1"}
