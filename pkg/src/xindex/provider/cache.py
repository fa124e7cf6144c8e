"""On-disk response cache: one JSON document per entry.

Filenames are the URL-safe base64 of the SHA-256 of ``kind`` and ``id``, so
entries can be inspected and diffed with ordinary tools. Writes go through a
temp file and ``os.replace``; concurrent writers to one key serialize on a
per-key lock and the last one wins.
"""

from __future__ import annotations

import base64
import hashlib
import json
import logging
import os
import tempfile
import threading
from collections.abc import Callable
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Any

from xindex.errors import CorruptEntry, StorageError

logger = logging.getLogger(__name__)

KINDS = frozenset({"citing_works", "author_fields", "url_check", "citation_count"})
DEFAULT_MAX_AGE_DAYS = 30.0


def utcnow() -> datetime:
    return datetime.now(timezone.utc)


@dataclass(frozen=True)
class CacheEntry:
    key: tuple[str, str]
    payload: Any
    fetched_at: datetime

    def to_json(self) -> dict:
        return {
            "kind": self.key[0],
            "id": self.key[1],
            "fetched_at": self.fetched_at.isoformat(),
            "payload": self.payload,
        }

    @classmethod
    def from_json(cls, doc: dict) -> CacheEntry:
        fetched = datetime.fromisoformat(doc["fetched_at"])
        if fetched.tzinfo is None:
            raise ValueError("fetched_at must be timezone-aware")
        return cls(key=(doc["kind"], doc["id"]), payload=doc["payload"], fetched_at=fetched)


def _check_key(key: tuple[str, str]) -> None:
    kind, ident = key
    if kind not in KINDS:
        raise ValueError(f"unknown cache kind {kind!r}")
    if not ident:
        raise ValueError("cache id must be non-empty")


def entry_filename(key: tuple[str, str]) -> str:
    digest = hashlib.sha256(f"{key[0]}\x00{key[1]}".encode()).digest()
    return base64.urlsafe_b64encode(digest).decode().rstrip("=") + ".json"


class ResponseCache:
    def __init__(self, root: str | os.PathLike, clock: Callable[[], datetime] = utcnow):
        self.root = Path(root)
        self.clock = clock
        self._locks: dict[tuple[str, str], threading.Lock] = {}
        self._locks_guard = threading.Lock()
        try:
            self.root.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StorageError(f"cannot create cache directory {self.root}: {exc}") from exc

    def path_for(self, key: tuple[str, str]) -> Path:
        return self.root / entry_filename(key)

    def _lock(self, key: tuple[str, str]) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(key, threading.Lock())

    def _read(self, key: tuple[str, str]) -> CacheEntry | None:
        path = self.path_for(key)
        try:
            text = path.read_text(encoding="utf-8")
        except FileNotFoundError:
            return None
        except OSError as exc:
            raise StorageError(f"cannot read {path}: {exc}") from exc
        try:
            entry = CacheEntry.from_json(json.loads(text))
        except (ValueError, KeyError, TypeError) as exc:
            raise CorruptEntry(f"{path}: {exc}") from exc
        if entry.key != key:
            raise CorruptEntry(f"{path}: holds {entry.key}, expected {key}")
        return entry

    def peek(self, key: tuple[str, str]) -> CacheEntry | None:
        """Entry regardless of age; corrupt entries read as absent."""
        _check_key(key)
        try:
            return self._read(key)
        except CorruptEntry as exc:
            logger.warning("ignoring corrupt cache entry: %s", exc)
            return None

    def get(self, key: tuple[str, str], max_age_days: float = DEFAULT_MAX_AGE_DAYS) -> CacheEntry | None:
        entry = self.peek(key)
        if entry is None:
            return None
        if self.clock() - entry.fetched_at > timedelta(days=max_age_days):
            return None
        return entry

    def put(self, entry: CacheEntry) -> None:
        _check_key(entry.key)
        body = json.dumps(entry.to_json(), sort_keys=True, separators=(",", ":"))
        path = self.path_for(entry.key)
        with self._lock(entry.key):
            try:
                fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp-", suffix=".json")
                with os.fdopen(fd, "w", encoding="utf-8") as fh:
                    fh.write(body)
                os.replace(tmp, path)
            except OSError as exc:
                raise StorageError(f"cannot write {path}: {exc}") from exc

    def store(self, kind: str, ident: str, payload: Any) -> CacheEntry:
        entry = CacheEntry(key=(kind, ident), payload=payload, fetched_at=self.clock())
        self.put(entry)
        return entry
