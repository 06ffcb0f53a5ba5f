"""The local HTTP service: search, policy, label, and source endpoints.

Intended to run on the client machine and bind loopback only; the only
outbound traffic is upstream search queries and label-source polls.  Label
data and the policy never leave the host.

Every response is derived from a single immutable (store snapshot, trust
model, policy) triple, so no response mixes tables from different moments.
The trust model is rebuilt lazily: mutations bump the store version and the
next query rebuilds from a fresh snapshot (full rebuild is cheap at the
desk-scale data this serves).
"""

from __future__ import annotations

import json
import logging
import os
import threading
from contextlib import asynccontextmanager
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import httpx
from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import HTMLResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .gateway import (
    DEFAULT_LIMIT,
    GatewayError,
    SearchGateway,
    mock_transport,
)
from .labels import LabelError, canonicalize_url, validate_label_name
from .ranking import Policy, rerank
from .sources import (
    DEFAULT_FETCH_TIMEOUT,
    DEFAULT_MAX_BODY_BYTES,
    StoreSnapshot,
    consolidate,
    load_registry,
    refresh_all,
)
from .trust import AssertionSet, TrustModel, build_trust_model

logger = logging.getLogger(__name__)

LOOPBACK_HOSTS = ("127.0.0.1", "localhost", "::1")


@dataclass
class ServiceConfig:
    """Service settings; defaults keep everything on the local machine."""

    data_dir: Path
    sources_config: Path
    upstream_url: str = "http://127.0.0.1:8080"
    listen_host: str = "127.0.0.1"
    listen_port: int = 8765
    refresh_interval: float = 900.0  # seconds between source polls; 0 disables
    upstream_timeout: float = 10.0
    fetch_timeout: float = DEFAULT_FETCH_TIMEOUT
    max_body_bytes: int = DEFAULT_MAX_BODY_BYTES
    mock_upstream_fixture: Path | None = None
    static_dir: Path | None = None
    allow_non_loopback: bool = False


@dataclass(frozen=True)
class Snapshot:
    """One consistent view used to answer a single request."""

    store: StoreSnapshot
    assertions: AssertionSet
    model: TrustModel
    policy: Policy


class ServiceRuntime:
    """Owns the registry, store, gateway, policy, and the cached trust model.

    ``upstream_transport``/``sources_transport`` exist so tests can record
    or fake all outbound traffic; they are the only paths to the network.
    """

    def __init__(
        self,
        config: ServiceConfig,
        upstream_transport: httpx.BaseTransport | None = None,
        sources_transport: httpx.BaseTransport | None = None,
    ):
        self.config = config
        self.registry, self.store = load_registry(config.sources_config, config.data_dir)
        if upstream_transport is None and config.mock_upstream_fixture is not None:
            upstream_transport = mock_transport(config.mock_upstream_fixture)
        self.gateway = SearchGateway(
            config.upstream_url, timeout=config.upstream_timeout, transport=upstream_transport
        )
        # static label hosting often sits behind redirects; follow them
        self.fetch_client = httpx.Client(
            timeout=config.fetch_timeout, follow_redirects=True, transport=sources_transport
        )
        self._policy = self._load_policy()
        self._mutation_lock = threading.Lock()
        self._model_lock = threading.Lock()
        self._cached: tuple[int, AssertionSet, TrustModel] | None = None
        self._poller_stop = threading.Event()
        self._poller: threading.Thread | None = None

    # -- policy ---------------------------------------------------------

    @property
    def policy(self) -> Policy:
        return self._policy

    def _policy_path(self) -> Path:
        return self.config.data_dir / "policy.json"

    def _load_policy(self) -> Policy:
        path = self._policy_path()
        if not path.exists():
            return Policy({})
        try:
            entries = json.loads(path.read_text(encoding="utf-8"))
            return Policy(dict(entries))
        except (ValueError, TypeError) as e:
            logger.warning("ignoring unreadable policy file %s: %s", path, e)
            return Policy({})

    def replace_policy(self, entries: dict[str, str]) -> Policy:
        """Validate, persist, and install a new policy atomically."""
        policy = Policy(dict(entries))  # raises before anything is touched
        with self._mutation_lock:
            path = self._policy_path()
            tmp = path.parent / (path.name + ".tmp")
            with open(tmp, "w", encoding="utf-8") as f:
                json.dump(policy.entries, f, indent=2)
                f.write("\n")
                f.flush()
                os.fsync(f.fileno())
            os.replace(tmp, path)
            self._policy = policy
        return policy

    # -- snapshots --------------------------------------------------------

    def snapshot(self) -> Snapshot:
        """Consistent (store, assertions, model, policy) view; rebuilds if stale."""
        snap = self.store.snapshot()
        with self._model_lock:
            if self._cached is None or self._cached[0] != snap.version:
                assertions = consolidate(self.registry, snap)
                model = build_trust_model(assertions)
                self._cached = (snap.version, assertions, model)
            _, assertions, model = self._cached
        return Snapshot(store=snap, assertions=assertions, model=model, policy=self._policy)

    # -- source polling ---------------------------------------------------

    def refresh_sources(self):
        return refresh_all(
            self.registry, self.store, self.fetch_client, self.config.max_body_bytes
        )

    def start_poller(self) -> None:
        """Refresh on startup, then every refresh_interval seconds."""
        if self.config.refresh_interval <= 0:
            return
        if not any(cfg.kind == "remote" for cfg in self.registry):
            return

        def loop() -> None:
            while not self._poller_stop.is_set():
                try:
                    self.refresh_sources()
                except Exception:
                    logger.exception("source refresh pass failed")
                self._poller_stop.wait(self.config.refresh_interval)

        self._poller = threading.Thread(target=loop, name="source-poller", daemon=True)
        self._poller.start()

    def stop(self) -> None:
        self._poller_stop.set()
        if self._poller is not None:
            self._poller.join(timeout=5)
        self.gateway.close()
        self.fetch_client.close()


class LabelPost(BaseModel):
    url: str
    label: str
    value: int


def _bad_request(detail: str) -> HTTPException:
    return HTTPException(status_code=400, detail={"kind": "bad_request", "detail": detail})


def _iso(ts: float | None) -> str | None:
    if ts is None:
        return None
    return datetime.fromtimestamp(ts, tz=timezone.utc).isoformat()


def _sources_view(runtime: ServiceRuntime, snap: Snapshot) -> list[dict]:
    view = []
    for cfg in runtime.registry:
        state = snap.store.per_source.get(cfg.id)
        view.append(
            {
                "id": cfg.id,
                "tier": cfg.tier,
                "reputation": snap.model.reputation_of(cfg.id),
                "fetchedAt": _iso(state.fetched_at) if state else None,
                "lastError": state.last_error if state else None,
            }
        )
    return view


def create_app(runtime: ServiceRuntime) -> FastAPI:
    """Assemble the FastAPI app around one runtime."""

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        runtime.start_poller()
        try:
            yield
        finally:
            runtime.stop()

    app = FastAPI(title="puresearch", lifespan=lifespan)
    app.state.runtime = runtime

    @app.get("/api/search")
    def handle_search(q: str = "", limit: int = Query(default=DEFAULT_LIMIT)):
        if not q.strip():
            raise _bad_request("query parameter q must be non-empty")
        try:
            upstream = runtime.gateway.search(q, limit=limit)
        except GatewayError as e:
            raise HTTPException(status_code=502, detail={"kind": e.kind, "detail": str(e)}) from e
        snap = runtime.snapshot()
        ranked = rerank(upstream, snap.policy, snap.model)
        results = [
            {
                "url": r.item,
                "title": r.title,
                "snippet": r.snippet,
                "score": r.upstream_score,
                "ascore": r.adjusted_score,
                "labels": {
                    label: snap.model.expectation_at(r.item, label)
                    for label in snap.policy.labels
                },
            }
            for r in ranked
        ]
        return {
            "query": q,
            "results": results,
            "policy": snap.policy.entries,
            "sources": _sources_view(runtime, snap),
        }

    @app.get("/api/policy")
    def get_policy():
        return runtime.policy.entries

    @app.put("/api/policy")
    def put_policy(entries: dict[str, str]):
        try:
            policy = runtime.replace_policy(entries)
        except (ValueError, LabelError) as e:
            raise _bad_request(str(e)) from e
        return policy.entries

    @app.get("/api/labels")
    def get_labels(url: str = ""):
        try:
            item = canonicalize_url(url)
        except LabelError as e:
            raise _bad_request(str(e)) from e
        snap = runtime.snapshot()
        tiers = {cfg.id: cfg.tier for cfg in runtime.registry}
        assertions = [
            {"source": source, "tier": tiers[source], "label": label, "value": value}
            for (source, it, label), value in sorted(snap.assertions.assertions.items())
            if it == item
        ]
        labels = sorted({a["label"] for a in assertions})
        return {
            "url": item,
            "assertions": assertions,
            "expectations": {label: snap.model.expectation_at(item, label) for label in labels},
        }

    @app.post("/api/labels")
    def post_label(body: LabelPost):
        if body.value not in (1, -1):
            raise _bad_request(f"value must be 1 or -1, got {body.value}")
        try:
            item = canonicalize_url(body.url)
            label = validate_label_name(body.label)
        except LabelError as e:
            raise _bad_request(str(e)) from e
        rec = runtime.store.upsert_user_assertion(item, label, body.value)
        return {"url": rec.url, "label": rec.label, "value": rec.value}

    @app.get("/api/sources")
    def get_sources():
        snap = runtime.snapshot()
        return _sources_view(runtime, snap)

    @app.post("/api/sources/refresh")
    def post_refresh():
        outcomes = runtime.refresh_sources()
        return [
            {
                "id": o.source_id,
                "ok": o.ok,
                "records": o.record_count,
                "warnings": o.warning_count,
                "error": o.error,
            }
            for o in outcomes
        ]

    static_dir = runtime.config.static_dir
    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    else:

        @app.get("/", response_class=HTMLResponse)
        def index():
            return (
                "<!doctype html><title>puresearch</title>"
                "<h1>puresearch service</h1>"
                "<p>The web UI is not built. API endpoints live under <code>/api/</code>: "
                "<code>/api/search?q=…</code>, <code>/api/policy</code>, "
                "<code>/api/labels</code>, <code>/api/sources</code>.</p>"
            )

    return app
