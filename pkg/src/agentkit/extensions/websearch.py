"""Web search tool: provider search, page fetch, strip, ephemeral index, condense.

The pipeline reuses the ingest chunker and the embed normalization verbatim;
fetched pages live in an in-memory flat index that is discarded when the
call returns.
"""

from __future__ import annotations

import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from agentkit.errors import ProviderUnavailable
from agentkit.htmltext import html_to_text
from agentkit.agent.types import FinalAnswer, PromptBundle
from agentkit.ingest.chunking import ChunkPolicy, chunk_document
from agentkit.ingest.normalize import PlainDocument
from agentkit.toolreg import ToolDescriptor
from agentkit.vexidx.flat import FlatIndex, search_flat

DEFAULT_MAX_RESULTS = 5
DEFAULT_TOP_CHUNKS = 5
SUMMARY_CLIP_CHARS = 500
PAGE_FETCH_TIMEOUT_S = 10.0

CONDENSE_INSTRUCTION = (
    "Condense the following webpage excerpts into the essential content that "
    "answers the query. Reply with the summary text only."
)


@dataclass(frozen=True)
class SearchResult:
    url: str
    title: str = ""
    snippet: str = ""


class StaticSearchProvider:
    """Mock search engine returning a fixed result list."""

    def __init__(self, results: list[SearchResult]):
        self.results = list(results)

    def search(self, query: str, max_results: int) -> list[SearchResult]:
        return self.results[:max_results]


class DuckDuckGoProvider:
    """Adapter for DuckDuckGo's HTML endpoint."""

    ENDPOINT = "https://html.duckduckgo.com/html/"
    _RESULT_RE = re.compile(
        r'<a[^>]+class="[^"]*result__a[^"]*"[^>]+href="(?P<href>[^"]+)"[^>]*>(?P<title>.*?)</a>',
        re.DOTALL,
    )

    def __init__(self, timeout: float = 10.0):
        self.timeout = timeout

    def search(self, query: str, max_results: int) -> list[SearchResult]:
        import requests

        try:
            resp = requests.get(
                self.ENDPOINT,
                params={"q": query},
                headers={"User-Agent": "agentkit/0.1"},
                timeout=self.timeout,
            )
        except requests.RequestException as exc:
            raise ProviderUnavailable(f"search engine unreachable: {exc}") from exc
        if resp.status_code != 200:
            raise ProviderUnavailable(
                f"search engine returned HTTP {resp.status_code}"
            )
        results = []
        for match in self._RESULT_RE.finditer(resp.text):
            url = match.group("href")
            if not url.startswith("http"):
                continue
            results.append(
                SearchResult(url=url, title=html_to_text(match.group("title")))
            )
            if len(results) >= max_results:
                break
        return results


class DictFetcher:
    """Test fetcher: maps urls to page bytes; missing urls raise."""

    def __init__(self, pages: dict[str, bytes | str]):
        self.pages = pages

    def fetch(self, url: str) -> bytes:
        if url not in self.pages:
            raise ProviderUnavailable(f"no such page {url!r}")
        page = self.pages[url]
        return page.encode("utf-8") if isinstance(page, str) else page


def search_and_summarize(
    provider,
    fetcher,
    embedder,
    llm,
    query: str,
    max_results: int = DEFAULT_MAX_RESULTS,
    top_chunks: int = DEFAULT_TOP_CHUNKS,
    *,
    policy: ChunkPolicy = ChunkPolicy(),
    fetch_workers: int = 4,
) -> dict:
    """Search the web and condense the best-matching pages.

    Returns {"results": [{"url", "title", "summary", "score"}, ...],
    "failures": [{"url", "error"}, ...]}. Per-url fetch failures skip the
    url; only an unreachable search engine raises.
    """
    results = provider.search(query, max_results)
    if not results:
        return {"results": [], "failures": []}

    failures: list[dict] = []
    pages: list[tuple[SearchResult, str]] = []

    def fetch_one(result: SearchResult):
        return fetcher.fetch(result.url)

    with ThreadPoolExecutor(max_workers=fetch_workers) as pool:
        fetched = [
            (result, pool.submit(fetch_one, result)) for result in results
        ]
        for result, future in fetched:
            try:
                raw = future.result(timeout=PAGE_FETCH_TIMEOUT_S * 2)
            except Exception as exc:
                failures.append({"url": result.url, "error": str(exc)})
                continue
            pages.append((result, html_to_text(raw)))

    # Ephemeral store: chunks of all fetched pages, discarded on return.
    ids: list[str] = []
    texts: list[str] = []
    by_chunk: dict[str, tuple[SearchResult, str]] = {}
    for i, (result, text) in enumerate(pages):
        doc = PlainDocument(source_id=f"web{i}", url=result.url, text=text)
        for chunk in chunk_document(doc, policy):
            ids.append(chunk.chunk_id)
            texts.append(chunk.text)
            by_chunk[chunk.chunk_id] = (result, chunk.text)

    if not texts:
        return {"results": [], "failures": failures}

    store = FlatIndex(ids, embedder.embed_batch(texts))
    hits = search_flat(store, embedder.embed_one(query), top_chunks)

    ordered_urls: list[str] = []
    best: dict[str, dict] = {}
    for hit in hits:
        result, chunk_text = by_chunk[hit.chunk_id]
        if result.url not in best:
            ordered_urls.append(result.url)
            best[result.url] = {
                "result": result,
                "chunks": [chunk_text],
                "score": hit.score,
            }
        else:
            best[result.url]["chunks"].append(chunk_text)

    summaries = []
    for url in ordered_urls:
        entry = best[url]
        summaries.append(
            {
                "url": url,
                "title": entry["result"].title,
                "summary": _condense(llm, query, entry["chunks"]),
                "score": entry["score"],
            }
        )
    return {"results": summaries, "failures": failures}


def _condense(llm, query: str, chunks: list[str]) -> str:
    if llm is not None:
        try:
            action = llm.complete(
                PromptBundle(
                    system=CONDENSE_INSTRUCTION,
                    messages=[
                        {
                            "role": "user",
                            "content": f"Query: {query}\n\n" + "\n---\n".join(chunks),
                        }
                    ],
                )
            )
            if isinstance(action, FinalAnswer) and action.text.strip():
                return action.text.strip()
        except Exception:
            pass
    return chunks[0][:SUMMARY_CLIP_CHARS]


def make_websearch_tool(provider, fetcher, embedder, llm=None):
    descriptor = ToolDescriptor(
        name="web_search",
        description="Search the web and return condensed summaries of the top pages.",
        input_schema={
            "type": "object",
            "properties": {
                "query": {"type": "string", "description": "Search keywords"},
                "max_results": {
                    "type": "integer",
                    "description": "How many pages to consider",
                    "default": DEFAULT_MAX_RESULTS,
                },
            },
            "required": ["query"],
        },
    )

    def handler(args: dict) -> dict:
        return search_and_summarize(
            provider,
            fetcher,
            embedder,
            llm,
            args["query"],
            max_results=args.get("max_results", DEFAULT_MAX_RESULTS),
        )

    return descriptor, handler
