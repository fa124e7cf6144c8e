"""Domain types shared by every stage of the scoring pipeline.

All types are frozen dataclasses; collections are stored as tuples so
instances can be shared between threads without copying.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from typing import Union

from xindex.errors import DuplicateId, MalformedCount, MissingField

UNKNOWN_FIELD = "unknown"

MANIFEST_COLUMNS = ("dataset_id", "title", "seed_work_id", "access_url", "author_ids", "citation_override")
_REQUIRED_COLUMNS = ("dataset_id", "seed_work_id")


@dataclass(frozen=True)
class DatasetRecord:
    dataset_id: str
    title: str
    seed_work_id: str
    access_url: str | None = None
    author_ids: tuple[str, ...] = ()
    scalar_citation_override: int | None = None

    def __post_init__(self) -> None:
        if not self.dataset_id:
            raise ValueError("dataset_id must be non-empty")
        if not self.seed_work_id:
            raise ValueError("seed_work_id must be non-empty")
        if self.scalar_citation_override is not None and self.scalar_citation_override < 0:
            raise ValueError("scalar_citation_override must be >= 0")
        object.__setattr__(self, "author_ids", tuple(self.author_ids))


@dataclass(frozen=True)
class Work:
    work_id: str
    year: int | None = None
    coauthors: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        if not self.work_id:
            raise ValueError("work_id must be non-empty")
        pairs = []
        for author_id, label in self.coauthors:
            pairs.append((author_id, label or UNKNOWN_FIELD))
        object.__setattr__(self, "coauthors", tuple(pairs))

    @property
    def author_ids(self) -> tuple[str, ...]:
        return tuple(a for a, _ in self.coauthors)

    def to_json(self) -> dict:
        return {
            "work_id": self.work_id,
            "year": self.year,
            "coauthors": [[a, f] for a, f in self.coauthors],
        }

    @classmethod
    def from_json(cls, payload: Mapping) -> Work:
        return cls(
            work_id=payload["work_id"],
            year=payload.get("year"),
            coauthors=tuple((a, f) for a, f in payload.get("coauthors", [])),
        )


@dataclass(frozen=True)
class DisciplineDistribution:
    """Unique co-authors per discipline; ``unknown`` is tallied apart from ``counts``."""

    counts: Mapping[str, int] = field(default_factory=dict)
    unknown: int = 0

    def __post_init__(self) -> None:
        clean = {}
        for label, n in sorted(self.counts.items()):
            if label == UNKNOWN_FIELD:
                raise ValueError("'unknown' is a sentinel, not a discipline")
            if n < 1:
                raise ValueError(f"count for {label!r} must be >= 1")
            clean[label] = int(n)
        object.__setattr__(self, "counts", clean)

    @property
    def unique_fields(self) -> int:
        return len(self.counts)

    @classmethod
    def from_labels(cls, labels: Iterable[str]) -> DisciplineDistribution:
        """One label per unique co-author."""
        counts: dict[str, int] = {}
        unknown = 0
        for label in labels:
            if label == UNKNOWN_FIELD or not label:
                unknown += 1
            else:
                counts[label] = counts.get(label, 0) + 1
        return cls(counts=counts, unknown=unknown)


@dataclass(frozen=True)
class CitationLayering:
    """Per-depth counts of works first reached at citation distance d = 1..depth_cap."""

    depth_counts: tuple[int, ...]
    truncated: bool = False
    # traversal detail, not part of value identity
    depths: Mapping[str, int] = field(default_factory=dict, compare=False, repr=False)
    direct: tuple[Work, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self) -> None:
        counts = tuple(int(n) for n in self.depth_counts)
        if not counts:
            raise ValueError("depth_counts must cover at least one level")
        if any(n < 0 for n in counts):
            raise ValueError("depth counts must be non-negative")
        if counts[0] == 0 and any(counts[1:]):
            raise ValueError("deeper layers are unreachable when the first layer is empty")
        object.__setattr__(self, "depth_counts", counts)

    @property
    def depth_cap(self) -> int:
        return len(self.depth_counts)

    @property
    def direct_count(self) -> int:
        return self.depth_counts[0]


@dataclass(frozen=True)
class VScoreBreakdown:
    X: float
    Y: int
    C: int
    D: float
    V: float

    def to_json(self) -> dict:
        return {"X": self.X, "Y": self.Y, "C": self.C, "D": self.D, "V": self.V}


@dataclass(frozen=True)
class RaterScoreRow:
    dataset_id: str
    scores: tuple[float, ...]

    def __post_init__(self) -> None:
        scores = tuple(float(s) for s in self.scores)
        if len(scores) != 5:
            raise ValueError(f"{self.dataset_id}: expected 5 rater scores, got {len(scores)}")
        for s in scores:
            if not (0.0 <= s <= 100.0) or math.isnan(s):
                raise ValueError(f"{self.dataset_id}: rater score {s} outside [0, 100]")
        object.__setattr__(self, "scores", scores)


ManifestRow = Union[Mapping[str, object], DatasetRecord]


def _parse_override(raw: object, row: int) -> int | None:
    if raw is None:
        return None
    if isinstance(raw, bool):
        raise MalformedCount(row, raw)
    if isinstance(raw, int):
        if raw < 0:
            raise MalformedCount(row, raw)
        return raw
    text = str(raw).strip()
    if not text:
        return None
    if not text.isdigit():
        raise MalformedCount(row, raw)
    return int(text)


def _parse_authors(raw: object) -> tuple[str, ...]:
    if raw is None:
        return ()
    if isinstance(raw, str):
        items: Iterable[str] = raw.split(";")
    else:
        items = (str(a) for a in raw)  # type: ignore[union-attr]
    return tuple(a.strip() for a in items if a and a.strip())


def validate_manifest(rows: Iterable[ManifestRow]) -> list[DatasetRecord]:
    """Turn parsed manifest rows into records, rejecting duplicates and bad fields.

    Rows are numbered from 1 in error messages. Already-built records pass
    through unchanged, so the function is idempotent on its own output.
    """
    records: list[DatasetRecord] = []
    seen: set[str] = set()
    for i, row in enumerate(rows, start=1):
        if isinstance(row, DatasetRecord):
            record = row
        else:
            for column in _REQUIRED_COLUMNS:
                value = row.get(column)
                if value is None or not str(value).strip():
                    raise MissingField(i, column)
            url = row.get("access_url")
            url_text = str(url).strip() if url is not None else ""
            record = DatasetRecord(
                dataset_id=str(row["dataset_id"]).strip(),
                title=str(row.get("title") or "").strip(),
                seed_work_id=str(row["seed_work_id"]).strip(),
                access_url=url_text or None,
                author_ids=_parse_authors(row.get("author_ids")),
                scalar_citation_override=_parse_override(
                    row.get("citation_override", row.get("scalar_citation_override")), i
                ),
            )
        if record.dataset_id in seen:
            raise DuplicateId(record.dataset_id)
        seen.add(record.dataset_id)
        records.append(record)
    return records
