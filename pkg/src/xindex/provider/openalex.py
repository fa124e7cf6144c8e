"""Live provider for OpenAlex-compatible REST APIs.

Field mapping:

* citing works: ``GET {base}/works?filter=cites:{id}&cursor=*&per-page=200``,
  following ``meta.next_cursor`` until it is null, a page comes back empty,
  or the per-node cap is reached. ``results[].id`` gives the work id (the
  ``https://openalex.org/`` prefix is stripped), ``publication_year`` the
  year, ``authorships[].author.id`` the co-authors, and
  ``primary_topic.field.display_name`` their per-work field label.
* seed existence: an empty citing-works result triggers
  ``GET {base}/works/{id}``; a 404 there is NotFound.
* author fields: ``GET {base}/authors/{id}``; every ``topics[]`` entry adds
  its ``count`` to ``field.display_name``. Authors without topics fall back
  to level-0 ``x_concepts`` (weight 1 each).
* citation count: ``cited_by_count`` from ``GET {base}/works/{id}``.

The contact email goes out as ``mailto`` and the API key as ``api_key``.
Neither is ever logged.
"""

from __future__ import annotations

import logging
import time
from collections.abc import Callable
from typing import Any

import requests

from xindex.errors import NetworkError, NotFound, ProviderError
from xindex.model import UNKNOWN_FIELD, Work
from xindex.provider.base import Provider, ProviderConfig
from xindex.provider.cache import ResponseCache
from xindex.provider.ratelimit import RateLimiter

logger = logging.getLogger(__name__)

ID_PREFIX = "https://openalex.org/"
PAGE_SIZE = 200
MAX_REDIRECTS = 3
_RETRY_STATUS = frozenset({429, 500, 502, 503, 504})


def short_id(raw: str | None) -> str:
    if not raw:
        return ""
    return raw[len(ID_PREFIX):] if raw.startswith(ID_PREFIX) else raw


def parse_work(doc: dict) -> Work:
    topic = doc.get("primary_topic") or {}
    label = ((topic.get("field") or {}).get("display_name")) or UNKNOWN_FIELD
    coauthors = []
    seen = set()
    for authorship in doc.get("authorships") or []:
        author_id = short_id((authorship.get("author") or {}).get("id"))
        if author_id and author_id not in seen:
            seen.add(author_id)
            coauthors.append((author_id, label))
    return Work(work_id=short_id(doc["id"]), year=doc.get("publication_year"), coauthors=tuple(coauthors))


def parse_author_fields(doc: dict) -> dict[str, int]:
    counts: dict[str, int] = {}
    for topic in doc.get("topics") or []:
        label = (topic.get("field") or {}).get("display_name")
        if label:
            counts[label] = counts.get(label, 0) + int(topic.get("count") or 1)
    if not counts:
        for concept in doc.get("x_concepts") or []:
            if concept.get("level") == 0 and concept.get("display_name"):
                counts[concept["display_name"]] = counts.get(concept["display_name"], 0) + 1
    return counts


def probe_url(
    session: requests.Session,
    url: str,
    timeout: float,
    max_redirects: int = MAX_REDIRECTS,
) -> bool:
    """HEAD (GET on 405) with manual redirect following; any failure is False."""
    current = url
    redirects = 0
    while True:
        try:
            resp = session.head(current, allow_redirects=False, timeout=timeout)
            if resp.status_code == 405:
                resp = session.get(current, allow_redirects=False, timeout=timeout, stream=True)
                resp.close()
        except requests.RequestException as exc:
            logger.debug("url probe failed for %s: %s", current, exc)
            return False
        if resp.is_redirect:
            redirects += 1
            location = resp.headers.get("Location")
            if redirects > max_redirects or not location:
                return False
            current = requests.compat.urljoin(current, location)
            continue
        return resp.status_code < 400


class OpenAlexProvider(Provider):
    def __init__(
        self,
        config: ProviderConfig | None = None,
        cache: ResponseCache | None = None,
        session: requests.Session | None = None,
        limiter: RateLimiter | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        super().__init__(config, cache)
        self.session = session or requests.Session()
        self.limiter = limiter or RateLimiter(self.config.max_requests_per_second)
        self.sleep = sleep
        self.http_requests = 0

    def _params(self, extra: dict[str, Any] | None = None) -> dict[str, Any]:
        params = dict(extra or {})
        if self.config.polite_contact:
            params["mailto"] = self.config.polite_contact
        if self.config.api_key:
            params["api_key"] = self.config.api_key
        return params

    def _get_json(self, path: str, params: dict[str, Any] | None = None) -> dict:
        url = self.config.base_url.rstrip("/") + "/" + path.lstrip("/")
        last_error: str = ""
        for attempt in range(self.config.max_retries + 1):
            if attempt:
                delay = self.config.backoff_seconds * 2 ** (attempt - 1)
                self.sleep(delay)
            self.limiter.acquire()
            self.http_requests += 1
            try:
                resp = self.session.get(url, params=self._params(params), timeout=self.config.timeout_seconds)
            except requests.RequestException as exc:
                last_error = f"{type(exc).__name__}"
                logger.warning("GET %s failed (%s), attempt %d", url, last_error, attempt + 1)
                continue
            if resp.status_code == 404:
                raise NotFound(path)
            if resp.status_code in _RETRY_STATUS:
                last_error = f"HTTP {resp.status_code}"
                logger.warning("GET %s returned %s, attempt %d", url, resp.status_code, attempt + 1)
                continue
            if resp.status_code >= 400:
                raise ProviderError(f"GET {url} returned HTTP {resp.status_code}")
            try:
                return resp.json()
            except ValueError as exc:
                raise ProviderError(f"GET {url} returned invalid JSON") from exc
        raise NetworkError(f"GET {url} failed after {self.config.max_retries + 1} attempts: {last_error}")

    def _load_citing_works(self, work_id: str, cap: int) -> tuple[list[Work], bool]:
        works: dict[str, Work] = {}
        cursor: str | None = "*"
        truncated = False
        while cursor:
            page = self._get_json(
                "works",
                {
                    "filter": f"cites:{work_id}",
                    "per-page": min(PAGE_SIZE, cap),
                    "cursor": cursor,
                    "select": "id,publication_year,authorships,primary_topic",
                },
            )
            results = page.get("results") or []
            if not results:
                break
            for doc in results:
                work = parse_work(doc)
                if work.work_id != work_id:
                    works.setdefault(work.work_id, work)
            meta = page.get("meta") or {}
            cursor = meta.get("next_cursor")
            if len(works) >= cap:
                total = meta.get("count")
                truncated = total > cap if total is not None else (len(works) > cap or bool(cursor))
                break
        if not works:
            # distinguishes an uncited work from an unknown id
            self._get_json(f"works/{work_id}", {"select": "id"})
        ordered = [works[k] for k in sorted(works)]
        return ordered[:cap], truncated

    def _load_author_fields(self, author_id: str) -> dict[str, int]:
        return parse_author_fields(self._get_json(f"authors/{author_id}"))

    def _load_citation_count(self, work_id: str) -> int:
        doc = self._get_json(f"works/{work_id}", {"select": "id,cited_by_count"})
        return int(doc.get("cited_by_count") or 0)

    def _probe_url(self, url: str) -> bool:
        return probe_url(self.session, url, self.config.timeout_seconds)
