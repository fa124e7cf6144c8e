"""Deterministic offline providers.

Fixture directory layout::

    <root>/works/<id>.json    {"id": "W-A", "year": 2019, "authors": ["A1", "A2"],
                               "referenced_works": ["W-SEED"], "field": "medicine"}
    <root>/authors/<id>.json  {"id": "A1", "fields": ["medicine", "medicine", "biology"]}
    <root>/urls.json          {"https://example.org/data": 200, ...}

``<id>`` is the identifier percent-encoded with no safe characters. Citing
works are derived by inverting ``referenced_works`` across the tree.
``field`` on a work is optional and only seeds the per-work co-author
labels; breadth uses the author records. A URL missing from ``urls.json``
is treated as unreachable. ``fields`` may also be given as a
``{label: count}`` object.
"""

from __future__ import annotations

import json
import threading
from collections.abc import Iterable, Mapping
from pathlib import Path
from urllib.parse import quote

from xindex.errors import NotFound, ProviderError
from xindex.model import UNKNOWN_FIELD, Work
from xindex.provider.base import Provider, ProviderConfig
from xindex.provider.cache import ResponseCache


def fixture_filename(identifier: str) -> str:
    return quote(identifier, safe="") + ".json"


def _field_counts(raw: Mapping[str, int] | Iterable[str] | None) -> dict[str, int]:
    if raw is None:
        return {}
    if isinstance(raw, Mapping):
        return {str(k): int(v) for k, v in raw.items() if int(v) > 0}
    counts: dict[str, int] = {}
    for label in raw:
        counts[label] = counts.get(label, 0) + 1
    return counts


class GraphProvider(Provider):
    """Provider over an in-memory citation graph.

    ``works`` maps every known work id to its Work; ``citers`` maps a cited
    id to the ids citing it. Ids absent from ``works`` raise NotFound.
    """

    def __init__(
        self,
        works: Mapping[str, Work] | None = None,
        citers: Mapping[str, Iterable[str]] | None = None,
        author_fields: Mapping[str, Mapping[str, int] | Iterable[str]] | None = None,
        url_status: Mapping[str, int | bool] | None = None,
        config: ProviderConfig | None = None,
        cache: ResponseCache | None = None,
    ):
        super().__init__(config, cache)
        self._works: dict[str, Work] = dict(works or {})
        self._citers: dict[str, list[str]] = {k: sorted(set(v)) for k, v in (citers or {}).items()}
        self._authors = {k: _field_counts(v) for k, v in (author_fields or {}).items()}
        self._urls = dict(url_status or {})

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[str, str]],
        nodes: Iterable[str] = (),
        **kwargs,
    ) -> GraphProvider:
        """Build from ``(citing, cited)`` pairs."""
        citers: dict[str, set[str]] = {}
        ids = set(nodes)
        for citing, cited in edges:
            citers.setdefault(cited, set()).add(citing)
            ids.update((citing, cited))
        works = {i: Work(work_id=i) for i in ids}
        return cls(works=works, citers=citers, **kwargs)

    def _ensure_loaded(self) -> None:
        pass

    def _load_citing_works(self, work_id: str, cap: int) -> tuple[list[Work], bool]:
        self._ensure_loaded()
        if work_id not in self._works:
            raise NotFound(work_id)
        ids = self._citers.get(work_id, [])
        return [self._works[i] for i in ids[:cap]], len(ids) > cap

    def _load_author_fields(self, author_id: str) -> dict[str, int]:
        self._ensure_loaded()
        if author_id not in self._authors:
            raise NotFound(author_id)
        return dict(self._authors[author_id])

    def _probe_url(self, url: str) -> bool:
        self._ensure_loaded()
        status = self._urls.get(url)
        if status is None:
            return False
        if isinstance(status, bool):
            return status
        return int(status) < 400

    def _load_citation_count(self, work_id: str) -> int:
        self._ensure_loaded()
        if work_id not in self._works:
            raise NotFound(work_id)
        return len(self._citers.get(work_id, []))


class FixtureProvider(GraphProvider):
    """GraphProvider loaded lazily from a fixture directory."""

    def __init__(self, root: str | Path, config: ProviderConfig | None = None, cache: ResponseCache | None = None):
        root = Path(root)
        if not (root / "works").is_dir():
            raise ProviderError(f"fixture directory {root} has no works/ subdirectory")
        super().__init__(config=config, cache=cache)
        self.root = root
        self._loaded = False
        self._load_lock = threading.Lock()

    def _ensure_loaded(self) -> None:
        with self._load_lock:
            if self._loaded:
                return
            works: dict[str, Work] = {}
            citers: dict[str, set[str]] = {}
            for path in sorted((self.root / "works").glob("*.json")):
                doc = json.loads(path.read_text(encoding="utf-8"))
                label = doc.get("field") or UNKNOWN_FIELD
                work = Work(
                    work_id=doc["id"],
                    year=doc.get("year"),
                    coauthors=tuple((a, label) for a in doc.get("authors", [])),
                )
                works[work.work_id] = work
                for cited in doc.get("referenced_works", []):
                    if cited != work.work_id:
                        citers.setdefault(cited, set()).add(work.work_id)
            authors = {}
            authors_dir = self.root / "authors"
            if authors_dir.is_dir():
                for path in sorted(authors_dir.glob("*.json")):
                    doc = json.loads(path.read_text(encoding="utf-8"))
                    authors[doc["id"]] = _field_counts(doc.get("fields"))
            urls_path = self.root / "urls.json"
            urls = json.loads(urls_path.read_text(encoding="utf-8")) if urls_path.exists() else {}
            self._works = works
            self._citers = {k: sorted(v) for k, v in citers.items()}
            self._authors = authors
            self._urls = urls
            self._loaded = True


def write_fixture(
    root: str | Path,
    works: Iterable[Mapping],
    authors: Iterable[Mapping] = (),
    urls: Mapping[str, int | bool] | None = None,
) -> Path:
    """Write a fixture tree in the layout FixtureProvider reads."""
    root = Path(root)
    (root / "works").mkdir(parents=True, exist_ok=True)
    (root / "authors").mkdir(parents=True, exist_ok=True)
    for doc in works:
        (root / "works" / fixture_filename(doc["id"])).write_text(
            json.dumps(doc, sort_keys=True, indent=1) + "\n", encoding="utf-8"
        )
    for doc in authors:
        (root / "authors" / fixture_filename(doc["id"])).write_text(
            json.dumps(doc, sort_keys=True, indent=1) + "\n", encoding="utf-8"
        )
    if urls is not None:
        (root / "urls.json").write_text(json.dumps(dict(urls), sort_keys=True, indent=1) + "\n", encoding="utf-8")
    return root
