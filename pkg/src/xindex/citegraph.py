"""Depth-layered citation neighbourhoods of a seed publication.

Depth 1 holds the works that cite the seed directly, depth 2 the works citing
those, and so on up to ``depth_cap``. Each work is counted once, at its
minimal distance.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from xindex.errors import BudgetExceeded, DimensionMismatch, NotFound, SeedNotFound
from xindex.model import CitationLayering, DisciplineDistribution, Work
from xindex.provider.base import Provider

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TraversalParams:
    depth_cap: int = 4
    decay_base: float = 0.5

    def __post_init__(self) -> None:
        if int(self.depth_cap) != self.depth_cap or self.depth_cap < 1:
            raise ValueError("depth_cap must be a positive integer")
        if not (0.0 < self.decay_base <= 1.0):
            raise ValueError("decay_base must lie in (0, 1]")

    def weights(self) -> list[float]:
        return [self.decay_base ** d for d in range(self.depth_cap)]


def _lookup_all(source: Provider, ids: list[str], workers: int) -> list[list[Work] | NotFound]:
    def one(work_id: str) -> list[Work] | NotFound:
        try:
            return source.lookup_citing_works(work_id)
        except NotFound as exc:
            return exc

    if workers > 1 and len(ids) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, ids))
    return [one(i) for i in ids]


def build_layers(
    seed_work_id: str,
    params: TraversalParams | None = None,
    source: Provider | None = None,
    workers: int = 1,
) -> CitationLayering:
    """Breadth-first expansion of the works citing ``seed_work_id``.

    Fetches within a level may run on ``workers`` threads; the layering is
    assembled afterwards in ascending work-id order, so the result (and the
    point where a node budget cuts the traversal short) does not depend on
    fetch completion order. Hitting the budget returns a partial layering
    with ``truncated=True``.
    """
    if source is None:
        raise ValueError("a provider is required")
    params = params or TraversalParams()
    counts = [0] * params.depth_cap
    depths: dict[str, int] = {}
    visited = {seed_work_id}
    truncated = False
    direct: list[Work] = []

    with source.budget_scope():
        frontier = [seed_work_id]
        budget_hit = False
        for depth in range(1, params.depth_cap + 1):
            results = _lookup_all(source, frontier, workers)
            found: dict[str, Work] = {}
            for work_id, result in zip(frontier, results):
                if isinstance(result, NotFound):
                    if depth == 1:
                        raise SeedNotFound(seed_work_id) from result
                    logger.warning("citing works of %s not found; treating as uncited", work_id)
                    continue
                if source.was_truncated(work_id):
                    truncated = True
                try:
                    works = source.charge_budget(work_id, result)
                except BudgetExceeded as exc:
                    logger.warning("%s", exc)
                    works = exc.partial
                    truncated = budget_hit = True
                for work in works:
                    if work.work_id not in visited and work.work_id not in found:
                        found[work.work_id] = work
                if budget_hit:
                    break
            layer = sorted(found)
            visited.update(layer)
            for work_id in layer:
                depths[work_id] = depth
            counts[depth - 1] = len(layer)
            if depth == 1:
                direct = [found[i] for i in layer]
            if budget_hit or not layer:
                break
            frontier = layer

    return CitationLayering(depth_counts=tuple(counts), truncated=truncated, depths=depths, direct=tuple(direct))


def decay_weighted_sum(layering: CitationLayering, params: TraversalParams | None = None) -> float:
    """Sum of ``decay_base**(d-1) * n_d`` over the layers."""
    params = params or TraversalParams()
    if layering.depth_cap != params.depth_cap:
        raise DimensionMismatch(f"layering has {layering.depth_cap} levels, params expect {params.depth_cap}")
    return float(sum(w * n for w, n in zip(params.weights(), layering.depth_counts)))


def coauthor_pool(direct_works: list[Work] | tuple[Work, ...], source: Provider) -> DisciplineDistribution:
    """Each unique co-author of the direct citers, labelled with their modal field."""
    authors = sorted({author_id for work in direct_works for author_id in work.author_ids})
    return DisciplineDistribution.from_labels(source.fetch_author_primary_field(a) for a in authors)
