"""Client for the upstream metasearch engine, plus a fixture-backed mock.

The upstream exposes a machine-readable results endpoint: GET /search with
the query in ``q`` and ``format=json``, answering a JSON document whose
``results`` array carries url/title/content/score per hit.  This adapter is
the only code that knows that shape; everything downstream sees
:class:`UpstreamResult`.  The gateway normalizes but never reorders,
rescores, or drops hits below the requested limit.

Privacy caveat: the query string is transmitted to the upstream engine.
Nothing else (labels, policy) ever is.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import httpx

DEFAULT_LIMIT = 20
MAX_LIMIT = 100
DEFAULT_TIMEOUT = 10.0


class GatewayError(Exception):
    """Upstream search failed."""

    kind = "upstream"


class UpstreamNetworkError(GatewayError):
    """The upstream could not be reached or answered with a failure status."""

    kind = "upstream_network"


class UpstreamDecodeError(GatewayError):
    """The upstream answered, but the body does not match the wire contract."""

    kind = "upstream_decode"


@dataclass(frozen=True)
class UpstreamResult:
    """One upstream hit, in upstream order; score is the upstream relevance."""

    url: str
    title: str
    snippet: str
    score: float | None


class SearchGateway:
    """Stateless client for the upstream results endpoint.

    ``transport`` lets tests and demos swap in :func:`mock_transport`
    without changing anything downstream.
    """

    def __init__(
        self,
        base_url: str,
        timeout: float = DEFAULT_TIMEOUT,
        transport: httpx.BaseTransport | None = None,
    ):
        self.base_url = base_url.rstrip("/")
        self._client = httpx.Client(timeout=timeout, transport=transport)

    def close(self) -> None:
        self._client.close()

    def search(self, query: str, limit: int = DEFAULT_LIMIT) -> list[UpstreamResult]:
        """Fetch up to ``limit`` results for ``query``, preserving upstream order."""
        query = query.strip()
        if not query:
            raise ValueError("query must be non-empty")
        limit = max(1, min(int(limit), MAX_LIMIT))
        try:
            resp = self._client.get(
                f"{self.base_url}/search", params={"q": query, "format": "json"}
            )
        except httpx.HTTPError as e:
            raise UpstreamNetworkError(f"upstream request failed: {e}") from e
        if resp.status_code != 200:
            raise UpstreamNetworkError(f"upstream returned status {resp.status_code}")
        try:
            body = resp.json()
            hits = body["results"]
            if not isinstance(hits, list):
                raise TypeError("results is not a list")
            results = [_normalize_hit(hit) for hit in hits]
        except (ValueError, KeyError, TypeError) as e:
            raise UpstreamDecodeError(f"unparseable upstream body: {e}") from e
        return results[:limit]


def _normalize_hit(hit: object) -> UpstreamResult:
    if not isinstance(hit, dict):
        raise TypeError(f"hit is not an object: {hit!r}")
    url = hit.get("url")
    if not url or not isinstance(url, str):
        raise KeyError(f"hit without url: {hit!r}")
    score = hit.get("score")
    if not isinstance(score, (int, float)) or score <= 0:
        score = None
    return UpstreamResult(
        url=url,
        title=str(hit.get("title") or ""),
        snippet=str(hit.get("content") or hit.get("snippet") or ""),
        score=float(score) if score is not None else None,
    )


def load_fixture(path: str | Path) -> dict[str, list[dict]]:
    """Load a mock-upstream fixture: a JSON map of query -> result list."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise ValueError(f"fixture {path} must be a JSON object mapping query to results")
    return data


def mock_transport(fixture: str | Path | dict[str, list[dict]]) -> httpx.MockTransport:
    """In-process upstream serving the real adapter's wire shape from a fixture.

    Fixture entries are {url, title, snippet, score}; ``snippet`` is served
    under the upstream's ``content`` key.  Unknown queries answer an empty
    result list.  Responses are byte-deterministic for a given fixture.
    """
    table = load_fixture(fixture) if not isinstance(fixture, dict) else fixture

    def handler(request: httpx.Request) -> httpx.Response:
        query = request.url.params.get("q", "")
        hits = []
        for entry in table.get(query, []):
            hit = {"url": entry["url"], "title": entry.get("title", ""), "content": entry.get("snippet", "")}
            if entry.get("score") is not None:
                hit["score"] = entry["score"]
            hits.append(hit)
        body = json.dumps({"query": query, "results": hits}, sort_keys=True)
        return httpx.Response(200, content=body.encode("utf-8"), headers={"content-type": "application/json"})

    return httpx.MockTransport(handler)
