"""Dataset value scores (V-score) and the author-level X-index."""

from xindex.citegraph import TraversalParams, build_layers, coauthor_pool, decay_weighted_sum
from xindex.metrics import (
    MetricParams,
    breadth,
    citation_count,
    normalized_entropy,
    quality,
    reuse_depth,
    vscore,
    xindex,
)
from xindex.model import (
    UNKNOWN_FIELD,
    CitationLayering,
    DatasetRecord,
    DisciplineDistribution,
    RaterScoreRow,
    VScoreBreakdown,
    Work,
    validate_manifest,
)
from xindex.pipeline import ScoredDataset, score_dataset
from xindex.validate import (
    RegressionFit,
    ValidationReport,
    build_report,
    format_slope_ratio,
    geometric_mean,
    ols_fit,
    rank_with_ties,
    spearman,
)

__version__ = "0.1.0"

__all__ = [
    "UNKNOWN_FIELD",
    "CitationLayering",
    "DatasetRecord",
    "DisciplineDistribution",
    "MetricParams",
    "RaterScoreRow",
    "RegressionFit",
    "ScoredDataset",
    "TraversalParams",
    "ValidationReport",
    "VScoreBreakdown",
    "Work",
    "breadth",
    "build_layers",
    "build_report",
    "citation_count",
    "coauthor_pool",
    "decay_weighted_sum",
    "format_slope_ratio",
    "geometric_mean",
    "normalized_entropy",
    "ols_fit",
    "quality",
    "rank_with_ties",
    "reuse_depth",
    "score_dataset",
    "spearman",
    "validate_manifest",
    "vscore",
    "xindex",
]
