"""Per-dataset scoring: traversal, co-author pool, URL check, composition."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from xindex.citegraph import TraversalParams, build_layers, coauthor_pool, decay_weighted_sum
from xindex.errors import MalformedUrl
from xindex.metrics import MetricParams, breadth, citation_count, quality, reuse_depth, vscore
from xindex.model import CitationLayering, DatasetRecord, DisciplineDistribution, VScoreBreakdown
from xindex.provider.base import Provider

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScoredDataset:
    record: DatasetRecord
    breakdown: VScoreBreakdown
    layering: CitationLayering
    disciplines: DisciplineDistribution
    url_accessible: bool | None
    errors: tuple[str, ...] = field(default=())

    @property
    def truncated(self) -> bool:
        return self.layering.truncated

    def to_json(self, traversal: TraversalParams) -> dict:
        return {
            "dataset_id": self.record.dataset_id,
            **self.breakdown.to_json(),
            "truncated": self.truncated,
            "layering": {
                "n": list(self.layering.depth_counts),
                "weighted": decay_weighted_sum(self.layering, traversal),
            },
            "disciplines": {
                "counts": dict(self.disciplines.counts),
                "unknown": self.disciplines.unknown,
                "unique_fields": self.disciplines.unique_fields,
            },
            "url_accessible": self.url_accessible,
            "errors": list(self.errors),
        }


def score_dataset(
    record: DatasetRecord,
    source: Provider,
    traversal: TraversalParams | None = None,
    params: MetricParams | None = None,
    workers: int = 1,
) -> ScoredDataset:
    """Score one dataset. SeedNotFound and provider failures propagate."""
    traversal = traversal or TraversalParams()
    params = params or MetricParams()
    errors: list[str] = []

    layering = build_layers(record.seed_work_id, traversal, source, workers=workers)
    dist = coauthor_pool(layering.direct, source)

    accessible: bool | None = None
    if record.access_url:
        try:
            accessible = source.check_url_accessible(record.access_url)
        except MalformedUrl as exc:
            errors.append(str(exc))
            accessible = False

    breakdown = vscore(
        breadth(dist, params),
        quality(accessible),
        citation_count(layering, record.scalar_citation_override, params.citation_mode),
        reuse_depth(layering, traversal, params.depth_mode),
        form=params.citation_form,
    )
    return ScoredDataset(
        record=record,
        breakdown=breakdown,
        layering=layering,
        disciplines=dist,
        url_accessible=accessible,
        errors=tuple(errors),
    )
