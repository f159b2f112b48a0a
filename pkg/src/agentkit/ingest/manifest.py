"""Community manifest parsing.

The manifest is a YAML document with a top-level ``collections:`` sequence;
each entry describes one documentation source: id, name, description, links,
and format.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from urllib.parse import urlparse

import yaml

from agentkit.errors import DuplicateSourceId, MalformedManifest, MissingField
from agentkit.ingest.normalize import FORMATS

_ID_RE = re.compile(r"^[a-z0-9-]+$")

_KNOWN_KEYS = {"id", "name", "description", "links", "format"}


@dataclass(frozen=True)
class DocumentSource:
    id: str
    name: str
    description: str = ""
    links: tuple[str, ...] = field(default_factory=tuple)
    format: str = "markdown"


def _link_ok(link: str, base_dir: str | None) -> bool:
    parsed = urlparse(link)
    if parsed.scheme in ("http", "https") and parsed.netloc:
        return True
    if parsed.scheme == "file":
        return True
    path = link if os.path.isabs(link) or base_dir is None else os.path.join(base_dir, link)
    return os.path.exists(path)


def parse_manifest(
    manifest_text: str,
    *,
    base_dir: str | None = None,
    warnings: list[str] | None = None,
) -> list[DocumentSource]:
    """Parse manifest YAML into DocumentSource entries, order preserved.

    Unknown keys are ignored; a record is appended to ``warnings`` (when a
    list is supplied) for each one. Relative link paths are resolved against
    ``base_dir`` for the existence check.
    """
    try:
        data = yaml.safe_load(manifest_text)
    except yaml.YAMLError as exc:
        raise MalformedManifest(f"manifest is not valid YAML: {exc}") from exc

    if not isinstance(data, dict) or "collections" not in data:
        raise MalformedManifest("manifest must be a mapping with a 'collections' list")
    collections = data["collections"]
    if collections is None:
        collections = []
    if not isinstance(collections, list):
        raise MalformedManifest("'collections' must be a sequence")

    sources: list[DocumentSource] = []
    seen: set[str] = set()
    for i, entry in enumerate(collections):
        if not isinstance(entry, dict):
            raise MalformedManifest(f"collections[{i}] is not a mapping")

        for key in entry:
            if key not in _KNOWN_KEYS and warnings is not None:
                warnings.append(f"collections[{i}]: ignoring unknown key {key!r}")

        source_id = entry.get("id")
        if not source_id:
            raise MissingField(f"collections[{i}]: missing 'id'")
        source_id = str(source_id)
        if not _ID_RE.match(source_id):
            raise MalformedManifest(
                f"collections[{i}]: id {source_id!r} must match [a-z0-9-]+"
            )
        if source_id in seen:
            raise DuplicateSourceId(f"duplicate source id {source_id!r}")
        seen.add(source_id)

        name = entry.get("name")
        if not name:
            raise MissingField(f"source {source_id!r}: missing 'name'")

        links = entry.get("links")
        if not links or not isinstance(links, list):
            raise MissingField(f"source {source_id!r}: missing or empty 'links'")
        for link in links:
            if not isinstance(link, str) or not _link_ok(link, base_dir):
                raise MalformedManifest(
                    f"source {source_id!r}: link {link!r} is neither an absolute "
                    f"URL nor an existing local path"
                )

        fmt = entry.get("format", "markdown")
        if fmt not in FORMATS:
            raise MalformedManifest(
                f"source {source_id!r}: unknown format {fmt!r} (expected one of {FORMATS})"
            )

        sources.append(
            DocumentSource(
                id=source_id,
                name=str(name),
                description=str(entry.get("description", "") or ""),
                links=tuple(links),
                format=fmt,
            )
        )
    return sources
