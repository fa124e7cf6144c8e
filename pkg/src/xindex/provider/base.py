"""Source-agnostic provider contract with caching and traversal budgeting.

Concrete providers implement four ``_load_*``/``_probe_url`` hooks; the base
class adds the cache layer, the per-traversal node budget, and the
modal-field rule for authors.
"""

from __future__ import annotations

import logging
import threading
from abc import ABC, abstractmethod
from collections.abc import Callable, Iterator, Mapping
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any
from urllib.parse import urlsplit

from xindex.errors import BudgetExceeded, MalformedUrl, NotFound
from xindex.model import UNKNOWN_FIELD, Work
from xindex.provider.cache import DEFAULT_MAX_AGE_DAYS, ResponseCache

logger = logging.getLogger(__name__)

DEFAULT_BASE_URL = "https://api.openalex.org"


@dataclass(frozen=True)
class ProviderConfig:
    base_url: str = DEFAULT_BASE_URL
    polite_contact: str | None = None
    api_key: str | None = field(default=None, repr=False)
    max_requests_per_second: float = 10.0
    timeout_seconds: float = 10.0
    max_retries: int = 3
    per_node_citation_cap: int = 10_000
    total_node_budget: int = 200_000
    max_age_days: float = DEFAULT_MAX_AGE_DAYS
    backoff_seconds: float = 0.5

    def __post_init__(self) -> None:
        for name in ("max_requests_per_second", "timeout_seconds", "max_age_days"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.per_node_citation_cap < 1:
            raise ValueError("per_node_citation_cap must be >= 1")
        if self.total_node_budget < self.per_node_citation_cap:
            raise ValueError("total_node_budget must be >= per_node_citation_cap")


def modal_field(field_counts: Mapping[str, int]) -> str:
    """Most frequent label; ties go to the lexicographically smallest."""
    known = {k: v for k, v in field_counts.items() if k and k != UNKNOWN_FIELD and v > 0}
    if not known:
        return UNKNOWN_FIELD
    return min(known, key=lambda label: (-known[label], label))


def check_url_syntax(url: str) -> None:
    parts = urlsplit(url or "")
    if parts.scheme not in ("http", "https") or not parts.netloc:
        raise MalformedUrl(f"not an http(s) URL: {url!r}")


class Provider(ABC):
    """Scholarly metadata source.

    ``fetches`` counts calls that reached the backend (cache misses); a warm
    cache leaves it at zero.
    """

    def __init__(self, config: ProviderConfig | None = None, cache: ResponseCache | None = None):
        self.config = config or ProviderConfig()
        self.cache = cache
        self.fetches = 0
        self.cache_hits = 0
        self._nodes_served = 0
        self._truncated: set[str] = set()
        self._lock = threading.Lock()

    # backend hooks

    @abstractmethod
    def _load_citing_works(self, work_id: str, cap: int) -> tuple[list[Work], bool]:
        """Citing works in ascending id order, at most ``cap``, plus a truncation flag."""

    @abstractmethod
    def _load_author_fields(self, author_id: str) -> dict[str, int]:
        """Field label -> frequency for the author. Raises NotFound."""

    @abstractmethod
    def _probe_url(self, url: str) -> bool: ...

    def _load_citation_count(self, work_id: str) -> int:
        works, truncated = self._load_citing_works(work_id, self.config.per_node_citation_cap)
        return len(works)

    # cache plumbing

    def _cached(self, kind: str, ident: str, loader: Callable[[], Any]) -> Any:
        if self.cache is not None:
            entry = self.cache.get((kind, ident), self.config.max_age_days)
            if entry is not None:
                with self._lock:
                    self.cache_hits += 1
                return entry.payload
        payload = loader()
        with self._lock:
            self.fetches += 1
        if self.cache is not None:
            self.cache.store(kind, ident, payload)
        return payload

    # public contract

    @contextmanager
    def budget_scope(self) -> Iterator[None]:
        """Reset the node budget for one traversal."""
        with self._lock:
            saved = self._nodes_served
            self._nodes_served = 0
        try:
            yield
        finally:
            with self._lock:
                self._nodes_served = saved

    def lookup_citing_works(self, work_id: str) -> list[Work]:
        """Citing works of ``work_id`` without charging the node budget."""
        if not work_id:
            raise ValueError("work_id must be non-empty")

        def load() -> dict:
            works, truncated = self._load_citing_works(work_id, self.config.per_node_citation_cap)
            if truncated:
                logger.info("citing works of %s truncated at %d", work_id, self.config.per_node_citation_cap)
            return {"works": [w.to_json() for w in works], "truncated": truncated}

        payload = self._cached("citing_works", work_id, load)
        if payload.get("truncated"):
            with self._lock:
                self._truncated.add(work_id)
        return [Work.from_json(w) for w in payload["works"]]

    def charge_budget(self, work_id: str, works: list[Work]) -> list[Work]:
        """Count ``works`` against the traversal budget; raise with the part that fits."""
        with self._lock:
            remaining = self.config.total_node_budget - self._nodes_served
            self._nodes_served += len(works)
        if len(works) > remaining:
            raise BudgetExceeded(
                f"node budget {self.config.total_node_budget} exhausted while expanding {work_id}",
                partial=works[: max(remaining, 0)],
            )
        return works

    def fetch_citing_works(self, work_id: str) -> list[Work]:
        return self.charge_budget(work_id, self.lookup_citing_works(work_id))

    def was_truncated(self, work_id: str) -> bool:
        """True when the citing-works list of ``work_id`` hit the per-node cap."""
        with self._lock:
            if work_id in self._truncated:
                return True
        if self.cache is not None:
            entry = self.cache.peek(("citing_works", work_id))
            return bool(entry and entry.payload.get("truncated"))
        return False

    def fetch_author_fields(self, author_id: str) -> dict[str, int]:
        if not author_id:
            raise ValueError("author_id must be non-empty")

        def load() -> dict:
            try:
                return {"fields": dict(sorted(self._load_author_fields(author_id).items()))}
            except NotFound:
                logger.info("author %s not found; field is unknown", author_id)
                return {"fields": {}}

        return dict(self._cached("author_fields", author_id, load)["fields"])

    def fetch_author_primary_field(self, author_id: str) -> str:
        return modal_field(self.fetch_author_fields(author_id))

    def check_url_accessible(self, url: str) -> bool:
        check_url_syntax(url)
        return bool(self._cached("url_check", url, lambda: {"ok": bool(self._probe_url(url))})["ok"])

    def fetch_citation_count(self, work_id: str) -> int:
        if not work_id:
            raise ValueError("work_id must be non-empty")
        return int(self._cached("citation_count", work_id, lambda: {"count": int(self._load_citation_count(work_id))})["count"])
