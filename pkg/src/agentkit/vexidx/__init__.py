"""Vector index: exact flat search, partitioned approximate search, persistence."""

from agentkit.vexidx.flat import FlatIndex, SearchHit, search_flat
from agentkit.vexidx.partitioned import (
    PartitionedIndex,
    build_partitioned,
    search_partitioned,
)
from agentkit.vexidx.kb import KnowledgeBase
from agentkit.vexidx.artifact import (
    content_digest,
    dumps,
    load_artifact,
    loads,
    save_artifact,
)

__all__ = [
    "FlatIndex",
    "SearchHit",
    "search_flat",
    "PartitionedIndex",
    "build_partitioned",
    "search_partitioned",
    "KnowledgeBase",
    "content_digest",
    "dumps",
    "loads",
    "save_artifact",
    "load_artifact",
]
