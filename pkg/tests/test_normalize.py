import pytest

from agentkit.errors import DecodeError, PdfExtractorUnavailable, UnsupportedFormat
from agentkit.ingest.normalize import normalize_document


def test_markdown_passthrough():
    doc = normalize_document(b"## Title\nBody", "markdown")
    assert doc.text == "## Title\nBody"


def test_markdown_front_matter_stripped():
    raw = b"---\ntitle: x\ntags: [a]\n---\n# Real\ncontent"
    assert normalize_document(raw, "markdown").text == "# Real\ncontent"


def test_markdown_unclosed_front_matter_kept():
    raw = b"---\ntitle: x\nno closing fence"
    assert normalize_document(raw, "markdown").text == raw.decode()


def test_html_stripped():
    doc = normalize_document(b"<p>Hello <b>world</b></p>", "html")
    assert doc.text == "Hello world"


def test_crlf_normalized():
    assert normalize_document(b"a\r\nb\rc", "plaintext").text == "a\nb\nc"


def test_nul_bytes_removed():
    assert normalize_document(b"a\x00b", "plaintext").text == "ab"


def test_pdf_without_extractor():
    with pytest.raises(PdfExtractorUnavailable):
        normalize_document(b"%PDF-1.4 ...", "pdf")


def test_pdf_with_extractor():
    doc = normalize_document(
        b"%PDF", "pdf", pdf_extractor=lambda raw: "extracted\r\ntext"
    )
    assert doc.text == "extracted\ntext"


def test_unknown_format():
    with pytest.raises(UnsupportedFormat):
        normalize_document(b"x", "docx")


def test_invalid_utf8_markdown():
    with pytest.raises(DecodeError):
        normalize_document(b"\xff\xfe\x9c", "markdown")


def test_metadata_fields():
    doc = normalize_document(b"t", "plaintext", source_id="s", url="u")
    assert doc.source_id == "s"
    assert doc.url == "u"
    assert doc.fetched_at.tzinfo is not None
