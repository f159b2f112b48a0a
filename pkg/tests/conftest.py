"""Shared fixtures: a small on-disk corpus and its manifest."""

from __future__ import annotations

import textwrap

import pytest

from agentkit.embed import HashEmbedder
from agentkit.ingest import FileFetcher, parse_manifest
from agentkit.ingest.build import build_knowledge_base
from agentkit.ingest.chunking import ChunkPolicy

CORPUS = {
    "deepimagej.md": textwrap.dedent(
        """\
        # deepImageJ

        deepImageJ runs pre-trained deep learning models inside ImageJ.
        Models are downloaded from the model zoo and executed locally on
        the user's own images without writing any code.
        """
    ),
    "cellpose.md": textwrap.dedent(
        """\
        # Cellpose

        Cellpose is a generalist algorithm for cell and nucleus
        segmentation. It works on many microscopy modalities out of the
        box and can be fine-tuned on user data for better masks.
        """
    ),
    "stardist.md": textwrap.dedent(
        """\
        # StarDist

        StarDist detects star-convex objects, most prominently cell
        nuclei, in fluorescence microscopy images. It provides both 2D
        and 3D models and integrates with napari and Fiji.
        """
    ),
}

MANIFEST = """\
collections:
  - id: deepimagej
    name: deepImageJ
    description: Running deep learning models in ImageJ
    links:
      - deepimagej.md
    format: markdown
  - id: cellpose
    name: Cellpose
    description: Generalist cell segmentation
    links:
      - cellpose.md
    format: markdown
  - id: stardist
    name: StarDist
    description: Star-convex nucleus detection
    links:
      - stardist.md
    format: markdown
"""


@pytest.fixture
def corpus_dir(tmp_path):
    for name, text in CORPUS.items():
        (tmp_path / name).write_text(text, encoding="utf-8")
    (tmp_path / "manifest.yaml").write_text(MANIFEST, encoding="utf-8")
    return tmp_path


@pytest.fixture
def small_kb(corpus_dir):
    sources = parse_manifest(MANIFEST, base_dir=str(corpus_dir))
    return build_knowledge_base(
        sources,
        FileFetcher(base_dir=str(corpus_dir)),
        HashEmbedder(64),
        ChunkPolicy(chunk_size=200, overlap=40),
    )
