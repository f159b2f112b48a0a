"""OpenAPI 3.1 export of the registered tool surface."""

from __future__ import annotations

import json

from agentkit.toolreg.registry import ToolRegistry

DEFAULT_META = {
    "title": "agentkit tools",
    "version": "1.0.0",
    "description": "Schema-described tools served over HTTP",
}


def export_openapi(registry: ToolRegistry, service_meta: dict | None = None) -> dict:
    """Build the OpenAPI document: one POST /tools/{name} path per tool.

    Paths appear in lexicographic order and the request body schema is the
    tool's input schema verbatim, so identical registries export identical
    documents.
    """
    meta = dict(DEFAULT_META)
    if service_meta:
        meta.update(service_meta)
    paths = {}
    for descriptor in sorted(registry.list_tools(), key=lambda d: d.name):
        paths[f"/tools/{descriptor.name}"] = {
            "post": {
                "operationId": f"invoke_{descriptor.name}",
                "summary": descriptor.description,
                "requestBody": {
                    "required": True,
                    "content": {
                        "application/json": {"schema": descriptor.input_schema}
                    },
                },
                "responses": {
                    "200": {
                        "description": "Tool result",
                        "content": {
                            "application/json": {"schema": {"type": "object"}}
                        },
                    },
                    "400": {
                        "description": "Arguments rejected by the tool's input schema"
                    },
                },
            }
        }
    return {"openapi": "3.1.0", "info": meta, "paths": paths}


def openapi_json(registry: ToolRegistry, service_meta: dict | None = None) -> str:
    """Canonical serialization: sorted keys, compact separators."""
    return json.dumps(
        export_openapi(registry, service_meta),
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=False,
    )
