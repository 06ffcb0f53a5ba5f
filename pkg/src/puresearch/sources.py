"""Label source registry, fetching, and local persistence.

A remote label source is a URL that is polled for the current version of
its label file; the local user is a special tier-0 source whose assertions
are entered through the service.  Fetched and user-entered records are
persisted in the same tab-separated label format, one file per source, so
the data directory stays inspectable with ordinary text tools:

    <data>/user.labels
    <data>/sources/<id>.labels

Remote records are replaced wholesale on a successful fetch and retained
unchanged on a failed one.  All mutations are serialized through one lock;
readers take immutable snapshots.
"""

from __future__ import annotations

import logging
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from urllib.parse import quote

import httpx

from .labels import (
    LabelError,
    LabelRecord,
    canonicalize_url,
    parse_label_file,
    serialize_label_file,
    validate_label_name,
)
from .trust import AssertionSet

logger = logging.getLogger(__name__)

USER_SOURCE_ID = "user"
KIND_USER = "user"
KIND_REMOTE = "remote"

DEFAULT_FETCH_TIMEOUT = 30.0
DEFAULT_MAX_BODY_BYTES = 10 * 1024 * 1024


class ConfigError(Exception):
    """The sources config file is missing or malformed."""


@dataclass(frozen=True)
class SourceConfig:
    """One label source: the local user, or a remote fetch URL with a tier."""

    id: str
    tier: int
    url: str | None = None  # fetch URL; None only for the user source

    @property
    def kind(self) -> str:
        return KIND_USER if self.url is None else KIND_REMOTE


USER_SOURCE = SourceConfig(id=USER_SOURCE_ID, tier=0, url=None)


@dataclass
class SourceState:
    """Cached records plus fetch metadata for one source."""

    records: tuple[LabelRecord, ...] = ()
    fetched_at: float | None = None  # epoch seconds of last successful fetch/hydrate
    last_error: str | None = None
    parse_warnings: int = 0


@dataclass(frozen=True)
class StoreSnapshot:
    """Immutable view of the store at one instant."""

    per_source: dict[str, SourceState]
    version: int


@dataclass(frozen=True)
class RefreshOutcome:
    source_id: str
    ok: bool
    record_count: int = 0
    warning_count: int = 0
    error: str | None = None


def load_registry(config_path: str | Path, data_dir: str | Path) -> tuple[list[SourceConfig], "LabelStore"]:
    """Read the sources config and hydrate the label store from disk.

    Config format: one remote source per line, ``tier TAB id TAB url``,
    UTF-8 with LF, ``#`` starts a comment line.  The user source is always
    injected at tier 0 and listed first; the id ``user`` is reserved for
    it.  A remote source configured at tier 0 is legal (it then shares
    ground-truth status with the user) but almost certainly a mistake, so
    it is accepted with a warning.
    """
    config_path = Path(config_path)
    if not config_path.exists():
        raise ConfigError(f"sources config not found: {config_path}")
    registry: list[SourceConfig] = [USER_SOURCE]
    seen = {USER_SOURCE_ID}
    for lineno, line in enumerate(config_path.read_text(encoding="utf-8").split("\n"), start=1):
        line = line.rstrip("\r")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise ConfigError(f"{config_path}:{lineno}: expected 'tier<TAB>id<TAB>url', got {len(fields)} fields")
        tier_text, source_id, url = fields
        try:
            tier = int(tier_text)
        except ValueError:
            raise ConfigError(f"{config_path}:{lineno}: tier is not an integer: {tier_text!r}") from None
        if tier < 0:
            raise ConfigError(f"{config_path}:{lineno}: tier must be >= 0, got {tier}")
        source_id = source_id.strip()
        if not source_id:
            raise ConfigError(f"{config_path}:{lineno}: empty source id")
        if source_id == USER_SOURCE_ID:
            raise ConfigError(f"{config_path}:{lineno}: source id 'user' is reserved for the local user")
        if source_id in seen:
            raise ConfigError(f"{config_path}:{lineno}: duplicate source id {source_id!r}")
        try:
            canonicalize_url(url)
        except LabelError as e:
            raise ConfigError(f"{config_path}:{lineno}: bad source URL: {e}") from None
        if tier == 0:
            logger.warning("source %r is configured at tier 0 and will be treated as ground truth", source_id)
        seen.add(source_id)
        registry.append(SourceConfig(id=source_id, tier=tier, url=url))
    store = LabelStore(data_dir)
    store.hydrate(registry)
    return registry, store


class LabelStore:
    """Single-writer store of per-source label records, persisted as TSV files.

    Every mutation (refresh result, user assertion) persists to disk before
    updating in-memory state and bumps ``version``; consumers cache derived
    state (the trust model) keyed on the version.
    """

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.sources_dir = self.data_dir / "sources"
        self.sources_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._per_source: dict[str, SourceState] = {}
        self._version = 0

    def path_for(self, source_id: str) -> Path:
        if source_id == USER_SOURCE_ID:
            return self.data_dir / "user.labels"
        # ids may be URLs; percent-encode so every id maps to one flat filename
        return self.sources_dir / f"{quote(source_id, safe='')}.labels"

    @property
    def version(self) -> int:
        with self._lock:
            return self._version

    def hydrate(self, registry: list[SourceConfig]) -> None:
        """Load persisted records for every registry source that has a file."""
        with self._lock:
            for cfg in registry:
                path = self.path_for(cfg.id)
                state = SourceState()
                if path.exists():
                    records, warnings = parse_label_file(path.read_bytes())
                    state = SourceState(
                        records=tuple(records),
                        fetched_at=path.stat().st_mtime,
                        parse_warnings=len(warnings),
                    )
                self._per_source[cfg.id] = state
            self._version += 1

    def snapshot(self) -> StoreSnapshot:
        with self._lock:
            per_source = {
                sid: SourceState(s.records, s.fetched_at, s.last_error, s.parse_warnings)
                for sid, s in self._per_source.items()
            }
            return StoreSnapshot(per_source=per_source, version=self._version)

    def replace_records(self, source_id: str, records: list[LabelRecord], parse_warnings: int = 0) -> None:
        """Persist and install a source's records wholesale (never merged)."""
        with self._lock:
            self._write_file(source_id, records)
            self._per_source[source_id] = SourceState(
                records=tuple(records),
                fetched_at=time.time(),
                last_error=None,
                parse_warnings=parse_warnings,
            )
            self._version += 1

    def set_error(self, source_id: str, error: str) -> None:
        """Record a failed refresh; cached records stay untouched."""
        with self._lock:
            state = self._per_source.get(source_id, SourceState())
            self._per_source[source_id] = SourceState(
                records=state.records,
                fetched_at=state.fetched_at,
                last_error=error,
                parse_warnings=state.parse_warnings,
            )
            self._version += 1

    def upsert_user_assertion(self, item: str, label: str, value: int) -> LabelRecord:
        """Store one user assertion, overwriting any prior value for (label, item).

        The user file is written and fsynced before in-memory state changes;
        on a persistence failure the prior state is intact and the error
        propagates.
        """
        rec = LabelRecord(validate_label_name(label), value, canonicalize_url(item))
        with self._lock:
            state = self._per_source.get(USER_SOURCE_ID, SourceState())
            records = list(state.records)
            for idx, existing in enumerate(records):
                if existing.label == rec.label and existing.url == rec.url:
                    records[idx] = rec
                    break
            else:
                records.append(rec)
            self._write_file(USER_SOURCE_ID, records)
            self._per_source[USER_SOURCE_ID] = SourceState(
                records=tuple(records),
                fetched_at=time.time(),
                last_error=None,
                parse_warnings=0,
            )
            self._version += 1
        return rec

    def _write_file(self, source_id: str, records: list[LabelRecord]) -> None:
        # atomic: write sibling temp file, fsync, rename over the target
        path = self.path_for(source_id)
        tmp = path.with_suffix(".labels.tmp")
        data = serialize_label_file(records)
        with open(tmp, "wb") as f:
            f.write(data)
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp, path)


def refresh_source(
    cfg: SourceConfig,
    store: LabelStore,
    client: httpx.Client,
    max_body_bytes: int = DEFAULT_MAX_BODY_BYTES,
) -> RefreshOutcome:
    """Poll one remote source and replace its cached records on success.

    Any failure (network, non-200, oversized body) leaves the previous
    records in place and records the error; a stale cached copy beats no
    data.
    """
    if cfg.kind != KIND_REMOTE:
        raise ValueError(f"source {cfg.id!r} is not remote")
    assert cfg.url is not None
    try:
        resp = client.get(cfg.url)
    except httpx.HTTPError as e:
        error = f"fetch failed: {e}"
        store.set_error(cfg.id, error)
        return RefreshOutcome(cfg.id, ok=False, error=error)
    if resp.status_code != 200:
        error = f"fetch returned status {resp.status_code}"
        store.set_error(cfg.id, error)
        return RefreshOutcome(cfg.id, ok=False, error=error)
    if len(resp.content) > max_body_bytes:
        error = f"body of {len(resp.content)} bytes exceeds cap of {max_body_bytes}"
        store.set_error(cfg.id, error)
        return RefreshOutcome(cfg.id, ok=False, error=error)
    records, warnings = parse_label_file(resp.content)
    for w in warnings:
        logger.warning("source %s line %d skipped: %s", cfg.id, w.line, w.reason)
    store.replace_records(cfg.id, records, parse_warnings=len(warnings))
    return RefreshOutcome(cfg.id, ok=True, record_count=len(records), warning_count=len(warnings))


def refresh_all(
    registry: list[SourceConfig],
    store: LabelStore,
    client: httpx.Client,
    max_body_bytes: int = DEFAULT_MAX_BODY_BYTES,
) -> list[RefreshOutcome]:
    """Refresh every remote source in registry order."""
    return [
        refresh_source(cfg, store, client, max_body_bytes)
        for cfg in registry
        if cfg.kind == KIND_REMOTE
    ]


def record_user_assertion(
    store: LabelStore, registry: list[SourceConfig], item: str, label: str, value: int
) -> AssertionSet:
    """Durably store one user assertion and return the updated assertion set."""
    store.upsert_user_assertion(item, label, value)
    return consolidate(registry, store.snapshot())


def consolidate(registry: list[SourceConfig], snapshot: StoreSnapshot) -> AssertionSet:
    """Join every source's records with its tier into one AssertionSet.

    Duplicate (label, item) lines within one source resolve last-wins (a
    source file is a snapshot of that source's current version); the same
    pair asserted by different sources stays distinct, keyed by source.
    """
    tiers = {cfg.id: cfg.tier for cfg in registry}
    assertions: dict[tuple[str, str, str], int] = {}
    for cfg in registry:
        state = snapshot.per_source.get(cfg.id)
        if state is None:
            continue
        for rec in state.records:
            assertions[(cfg.id, rec.url, rec.label)] = rec.value
    return AssertionSet(assertions, tiers)
