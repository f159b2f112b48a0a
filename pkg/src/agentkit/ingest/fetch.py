"""Fetcher abstraction: resolve manifest links to raw bytes."""

from __future__ import annotations

import os
from urllib.parse import urlparse, unquote
from urllib.request import url2pathname

from agentkit.errors import FetchError


class FileFetcher:
    """Resolves local paths and file:// URLs; the fetcher used in tests."""

    def __init__(self, base_dir: str | None = None):
        self.base_dir = base_dir

    def fetch(self, link: str) -> bytes:
        parsed = urlparse(link)
        if parsed.scheme == "file":
            path = url2pathname(unquote(parsed.path))
        elif parsed.scheme in ("http", "https"):
            raise FetchError(f"FileFetcher cannot fetch remote URL {link!r}")
        else:
            path = link
            if not os.path.isabs(path) and self.base_dir is not None:
                path = os.path.join(self.base_dir, path)
        try:
            with open(path, "rb") as fh:
                return fh.read()
        except OSError as exc:
            raise FetchError(f"cannot read {link!r}: {exc}") from exc


class HttpFetcher:
    """Fetches http(s) links with a bounded timeout, falling back to local paths."""

    def __init__(self, timeout: float = 30.0, base_dir: str | None = None):
        self.timeout = timeout
        self._files = FileFetcher(base_dir)

    def fetch(self, link: str) -> bytes:
        parsed = urlparse(link)
        if parsed.scheme not in ("http", "https"):
            return self._files.fetch(link)
        import requests

        try:
            resp = requests.get(link, timeout=self.timeout)
        except requests.RequestException as exc:
            raise FetchError(f"fetch of {link!r} failed: {exc}") from exc
        if resp.status_code != 200:
            raise FetchError(f"fetch of {link!r} returned HTTP {resp.status_code}")
        return resp.content
