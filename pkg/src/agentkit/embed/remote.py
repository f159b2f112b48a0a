"""HTTP embedding provider speaking the de-facto embeddings contract.

POST {base_url}/embeddings with a model name and an input list; the response
carries one vector per input in order. Requests are batched, transient
failures retried with exponential backoff, and in-flight requests capped.
"""

from __future__ import annotations

import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import requests

from agentkit.errors import ProviderRejectedInput, ProviderUnavailable
from agentkit.embed.vectors import normalize

ENV_BASE_URL = "AGENTKIT_EMBED_BASE_URL"
ENV_API_KEY = "AGENTKIT_EMBED_API_KEY"
ENV_MODEL = "AGENTKIT_EMBED_MODEL"


class RemoteEmbedder:
    def __init__(
        self,
        base_url: str,
        model: str,
        api_key: str = "",
        *,
        batch_size: int = 64,
        retries: int = 3,
        backoff: float = 0.5,
        max_inflight: int = 4,
        timeout: float = 60.0,
        sleep=time.sleep,
    ):
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.api_key = api_key
        self.batch_size = batch_size
        self.retries = retries
        self.backoff = backoff
        self.timeout = timeout
        self._sleep = sleep
        self._inflight = threading.Semaphore(max_inflight)
        self._dim: int | None = None

    @classmethod
    def from_env(cls, **kwargs) -> "RemoteEmbedder":
        base_url = os.environ.get(ENV_BASE_URL)
        model = os.environ.get(ENV_MODEL)
        if not base_url or not model:
            raise ProviderUnavailable(
                f"remote embedder needs {ENV_BASE_URL} and {ENV_MODEL} set"
            )
        return cls(base_url, model, os.environ.get(ENV_API_KEY, ""), **kwargs)

    @property
    def name(self) -> str:
        return f"remote-{self.model}"

    @property
    def dim(self) -> int:
        if self._dim is None:
            # Dimension is a property of the remote model; probe lazily.
            self._dim = self._request(["dimension probe"]).shape[1]
        return self._dim

    def _request(self, batch: list[str]) -> np.ndarray:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        last_error: Exception | None = None
        for attempt in range(self.retries):
            if attempt:
                self._sleep(self.backoff * 2 ** (attempt - 1))
            with self._inflight:
                try:
                    resp = requests.post(
                        f"{self.base_url}/embeddings",
                        json={"model": self.model, "input": batch},
                        headers=headers,
                        timeout=self.timeout,
                    )
                except requests.RequestException as exc:
                    last_error = exc
                    continue
            if resp.status_code >= 500:
                last_error = ProviderUnavailable(
                    f"embedding server returned HTTP {resp.status_code}"
                )
                continue
            if resp.status_code != 200:
                raise ProviderRejectedInput(
                    f"embedding server rejected request: HTTP {resp.status_code}"
                )
            data = resp.json()["data"]
            vectors = [None] * len(batch)
            for position, item in enumerate(data):
                vectors[item.get("index", position)] = item["embedding"]
            return np.stack([normalize(v) for v in vectors])
        raise ProviderUnavailable(
            f"embedding request failed after {self.retries} attempts: {last_error}"
        )

    def embed_batch(self, texts: list[str]) -> np.ndarray:
        if not texts:
            return np.zeros((0, self.dim if self._dim else 0), dtype=np.float32)
        batches = [
            texts[i : i + self.batch_size]
            for i in range(0, len(texts), self.batch_size)
        ]
        if len(batches) == 1:
            out = self._request(batches[0])
        else:
            with ThreadPoolExecutor(max_workers=min(4, len(batches))) as pool:
                parts = list(pool.map(self._request, batches))
            out = np.concatenate(parts, axis=0)
        self._dim = out.shape[1]
        return out

    def embed_one(self, text: str) -> np.ndarray:
        return self.embed_batch([text])[0]
