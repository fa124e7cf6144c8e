"""Numeric kernels for the dataset value score and the author-level index.

V = X + Y + D * ln(1 + C), where X is breadth, Y quality, C citations and D
the reuse-depth multiplier. An author's index is the plain sum of V over
every dataset listing them, with no fractional credit.
"""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Literal

from xindex.citegraph import TraversalParams, decay_weighted_sum
from xindex.errors import DomainError, NoSource
from xindex.model import CitationLayering, DatasetRecord, DisciplineDistribution, VScoreBreakdown

DepthMode = Literal["normalized", "raw"]
CitationForm = Literal["scaled_log", "log_of_scaled"]
CitationMode = Literal["graph", "override_if_present"]


@dataclass(frozen=True)
class MetricParams:
    entropy_floor: float = 0.1
    breadth_richness_weight: float = 1.0
    quality_mode: Literal["binary_url"] = "binary_url"
    # sensitivity switches; defaults follow the published composition
    depth_mode: DepthMode = "normalized"
    citation_form: CitationForm = "scaled_log"
    citation_mode: CitationMode = "override_if_present"

    def __post_init__(self) -> None:
        if not (0.0 <= self.entropy_floor <= 1.0):
            raise ValueError("entropy_floor must lie in [0, 1]")
        if self.breadth_richness_weight < 0:
            raise ValueError("breadth_richness_weight must be >= 0")
        if self.quality_mode != "binary_url":
            raise ValueError(f"unsupported quality_mode {self.quality_mode!r}")
        if self.depth_mode not in ("normalized", "raw"):
            raise ValueError(f"unsupported depth_mode {self.depth_mode!r}")
        if self.citation_form not in ("scaled_log", "log_of_scaled"):
            raise ValueError(f"unsupported citation_form {self.citation_form!r}")
        if self.citation_mode not in ("graph", "override_if_present"):
            raise ValueError(f"unsupported citation_mode {self.citation_mode!r}")


def normalized_entropy(dist: DisciplineDistribution) -> float:
    """Shannon entropy of the known-field shares divided by ln(max(2, U)); 0 when U <= 1."""
    counts = [n for n in dist.counts.values() if n > 0]
    if len(counts) <= 1:
        return 0.0
    total = float(sum(counts))
    h = -sum((n / total) * math.log(n / total) for n in counts)
    return min(1.0, max(0.0, h / math.log(max(2, len(counts)))))


def breadth(dist: DisciplineDistribution, params: MetricParams | None = None) -> float:
    params = params or MetricParams()
    u = dist.unique_fields
    if u == 0:
        return params.entropy_floor
    evenness = max(params.entropy_floor, normalized_entropy(dist))
    return evenness * (1.0 + params.breadth_richness_weight * math.log2(1 + u))


def quality(url_accessible: bool | None) -> int:
    return 1 if url_accessible else 0


def reuse_depth(
    layering: CitationLayering,
    params: TraversalParams | None = None,
    mode: DepthMode = "normalized",
) -> float:
    """Decay-weighted layer sum, divided by the direct-citation count in normalized mode."""
    weighted = decay_weighted_sum(layering, params)
    n1 = layering.direct_count
    if n1 == 0:
        return 0.0
    return weighted / n1 if mode == "normalized" else weighted


def _check_count(value: object, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DomainError(f"{name} must be a non-negative integer, got {value!r}")
    if isinstance(value, float) and not value.is_integer():
        raise DomainError(f"{name} must be an integer, got {value!r}")
    if value < 0:
        raise DomainError(f"{name} must be non-negative, got {value!r}")
    return int(value)


def vscore(X: float, Y: int, C: int, D: float, form: CitationForm = "scaled_log") -> VScoreBreakdown:
    """Compose the value score. ``form="log_of_scaled"`` uses ln(1 + D*C) instead."""
    C = _check_count(C, "C")
    if not (X >= 0) or math.isinf(X):
        raise DomainError(f"X must be finite and non-negative, got {X!r}")
    if Y not in (0, 1) or isinstance(Y, float) and not Y.is_integer():
        raise DomainError(f"Y must be 0 or 1, got {Y!r}")
    if not (D >= 0) or math.isinf(D):
        raise DomainError(f"D must be finite and non-negative, got {D!r}")
    if form == "scaled_log":
        v = X + Y + D * math.log1p(C)
    elif form == "log_of_scaled":
        v = X + Y + math.log1p(D * C)
    else:
        raise ValueError(f"unknown citation form {form!r}")
    return VScoreBreakdown(X=float(X), Y=int(Y), C=C, D=float(D), V=v)


def citation_count(
    layering: CitationLayering | None,
    override: int | None = None,
    mode: CitationMode = "override_if_present",
) -> int:
    if override is not None and mode == "override_if_present":
        return _check_count(override, "citation override")
    if layering is None:
        raise NoSource("no citation graph and no usable override")
    return layering.direct_count


def xindex(author_id: str, breakdowns: Iterable[tuple[DatasetRecord, VScoreBreakdown]]) -> float:
    """Sum of V over the datasets that list ``author_id``."""
    return math.fsum(b.V for record, b in breakdowns if author_id in record.author_ids)
