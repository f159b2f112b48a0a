"""Raw fetched bytes to normalized plain-text documents."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable

from agentkit.errors import DecodeError, PdfExtractorUnavailable, UnsupportedFormat
from agentkit.htmltext import html_to_text

FORMATS = ("markdown", "html", "pdf", "plaintext")

# Optional hook: callable mapping PDF bytes to extracted text.
PdfExtractor = Callable[[bytes], str]

_FRONT_MATTER = re.compile(r"\A---\n.*?\n---\n", re.DOTALL)


def _utcnow() -> datetime:
    return datetime.now(timezone.utc)


@dataclass(frozen=True)
class PlainDocument:
    source_id: str
    url: str
    text: str
    fetched_at: datetime = field(default_factory=_utcnow)


def _clean(text: str) -> str:
    return text.replace("\r\n", "\n").replace("\r", "\n").replace("\x00", "")


def normalize_document(
    raw_bytes: bytes,
    format: str,
    *,
    source_id: str = "",
    url: str = "",
    pdf_extractor: PdfExtractor | None = None,
    fetched_at: datetime | None = None,
) -> PlainDocument:
    """Convert fetched bytes into a PlainDocument for the given format.

    Markdown passes through verbatim minus a leading YAML front-matter
    block; HTML is stripped with the shared html_to_text routine; PDF is
    routed to the configured extractor. All outputs have LF line endings
    and no NUL bytes.
    """
    if format not in FORMATS:
        raise UnsupportedFormat(f"unsupported document format: {format!r}")

    if format == "pdf":
        if pdf_extractor is None:
            raise PdfExtractorUnavailable(
                "PDF source encountered but no PDF extractor is configured"
            )
        text = _clean(pdf_extractor(raw_bytes))
    elif format == "html":
        text = html_to_text(raw_bytes)
    else:
        try:
            text = raw_bytes.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DecodeError(f"document is not valid UTF-8: {exc}") from exc
        text = _clean(text)
        if format == "markdown":
            text = _FRONT_MATTER.sub("", text, count=1)

    return PlainDocument(
        source_id=source_id,
        url=url,
        text=text,
        fetched_at=fetched_at if fetched_at is not None else _utcnow(),
    )
