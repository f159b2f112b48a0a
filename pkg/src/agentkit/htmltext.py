"""Markup stripping: HTML bytes or text to plain text.

One routine shared by document normalization and the web-search pipeline so
both produce identical text for identical input.
"""

from __future__ import annotations

import re
from html.parser import HTMLParser

# Content of these elements is dropped entirely, including nested markup.
_SKIP_TAGS = {"script", "style", "head"}

# Elements that terminate a line of text when they open or close.
_BLOCK_TAGS = {
    "address", "article", "aside", "blockquote", "body", "br", "caption",
    "dd", "details", "dialog", "div", "dl", "dt", "fieldset", "figcaption",
    "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5", "h6", "header",
    "hr", "html", "li", "main", "nav", "ol", "p", "pre", "section", "summary",
    "table", "tbody", "td", "tfoot", "th", "thead", "tr", "ul",
}

_INLINE_WS = re.compile(r"[^\S\n]+")
_WS_AROUND_NL = re.compile(r" *\n *")
_NL_RUNS = re.compile(r"\n+")


class _TextExtractor(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.parts: list[str] = []
        self._skip_depth = 0

    def handle_starttag(self, tag, attrs):
        if tag in _SKIP_TAGS:
            self._skip_depth += 1
            return
        if self._skip_depth == 0 and tag in _BLOCK_TAGS:
            self.parts.append("\n")

    def handle_endtag(self, tag):
        if tag in _SKIP_TAGS:
            self._skip_depth = max(0, self._skip_depth - 1)
            return
        if self._skip_depth == 0 and tag in _BLOCK_TAGS:
            self.parts.append("\n")

    def handle_startendtag(self, tag, attrs):
        if self._skip_depth == 0 and tag in _BLOCK_TAGS:
            self.parts.append("\n")

    def handle_data(self, data):
        if self._skip_depth == 0:
            self.parts.append(data)


def html_to_text(html: str | bytes) -> str:
    """Strip markup from HTML and normalize whitespace.

    Script, style, and head contents are dropped entirely; block-level
    elements break lines; character entities are decoded. Runs of
    horizontal whitespace collapse to a single space and runs of newlines
    to a single newline. Bytes input is decoded as UTF-8 with invalid
    sequences replaced.
    """
    if isinstance(html, bytes):
        html = html.decode("utf-8", errors="replace")
    parser = _TextExtractor()
    parser.feed(html)
    parser.close()
    text = "".join(parser.parts)
    text = _INLINE_WS.sub(" ", text)
    text = _WS_AROUND_NL.sub("\n", text)
    text = _NL_RUNS.sub("\n", text)
    return text.strip()
