"""Rater aggregation, rank correlation and regression for score validation."""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

from xindex.errors import DegenerateInput, IdMismatch, NegativeScore, WrongArity
from xindex.model import RaterScoreRow

RATERS = 5


@dataclass(frozen=True)
class RegressionFit:
    slope: float
    intercept: float
    r2: float
    n: int
    degenerate: bool = False

    def to_json(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "r2": self.r2,
            "n": self.n,
            "degenerate": self.degenerate,
        }


def geometric_mean(scores: Sequence[float], arity: int = RATERS) -> float:
    if len(scores) != arity:
        raise WrongArity(f"expected {arity} scores, got {len(scores)}")
    if any(s < 0 for s in scores):
        raise NegativeScore(f"scores must be non-negative: {list(scores)}")
    if any(s == 0 for s in scores):
        return 0.0
    return math.exp(math.fsum(math.log(s) for s in scores) / len(scores))


def rank_with_ties(values: Sequence[float], descending: bool = True) -> list[float]:
    """1-based ranks; tied values share the mean of the positions they span."""
    order = sorted(range(len(values)), key=lambda i: -values[i] if descending else values[i])
    ranks = [0.0] * len(values)
    start = 0
    while start < len(order):
        stop = start
        while stop + 1 < len(order) and values[order[stop + 1]] == values[order[start]]:
            stop += 1
        shared = (start + stop) / 2 + 1
        for k in range(start, stop + 1):
            ranks[order[k]] = shared
        start = stop + 1
    return ranks


def _centered(values: Sequence[float]) -> list[float]:
    mean = math.fsum(values) / len(values)
    return [v - mean for v in values]


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    dx, dy = _centered(x), _centered(y)
    sxx = math.fsum(a * a for a in dx)
    syy = math.fsum(b * b for b in dy)
    if sxx == 0 or syy == 0:
        raise DegenerateInput("correlation undefined for a constant series")
    r = math.fsum(a * b for a, b in zip(dx, dy)) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson correlation of tie-averaged ranks."""
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise DegenerateInput("need at least two observations")
    if len(set(x)) < 2 or len(set(y)) < 2:
        raise DegenerateInput("each series needs at least two distinct values")
    return pearson(rank_with_ties(x), rank_with_ties(y))


def ols_fit(x: Sequence[float], y: Sequence[float]) -> RegressionFit:
    """Simple least squares y = slope*x + intercept.

    A constant ``y`` gives slope 0 and r2 0 with ``degenerate`` set, so
    reports stay numeric.
    """
    n = len(x)
    if n != len(y):
        raise ValueError(f"length mismatch: {n} vs {len(y)}")
    if n < 2:
        raise DegenerateInput("need at least two points")
    dx, dy = _centered(x), _centered(y)
    sxx = math.fsum(a * a for a in dx)
    if sxx == 0:
        raise DegenerateInput("x is constant")
    sxy = math.fsum(a * b for a, b in zip(dx, dy))
    syy = math.fsum(b * b for b in dy)
    slope = sxy / sxx
    intercept = math.fsum(y) / n - slope * (math.fsum(x) / n)
    if syy == 0:
        return RegressionFit(slope=0.0, intercept=intercept, r2=0.0, n=n, degenerate=True)
    r2 = min(1.0, max(0.0, sxy * sxy / (sxx * syy)))
    return RegressionFit(slope=slope, intercept=intercept, r2=r2, n=n)


def format_slope_ratio(rater_slope: float, vscore_slope: float) -> str:
    """Render the slope relation as a rounded integer ratio, e.g. ``≈ 7:1``."""
    if vscore_slope == 0 or rater_slope == 0:
        return "n/a"
    ratio = rater_slope / vscore_slope
    sign = "-" if ratio < 0 else ""
    ratio = abs(ratio)
    if ratio >= 1:
        return f"≈ {sign}{round(ratio)}:1"
    return f"≈ {sign}1:{round(1 / ratio)}"


@dataclass(frozen=True)
class ValidationReport:
    dataset_ids: tuple[str, ...]
    vscores: Mapping[str, float]
    geometric_means: Mapping[str, float]
    rater_ranking: Mapping[str, float]
    vscore_ranking: Mapping[str, float]
    spearman_rho: float
    ols_rater: RegressionFit
    ols_vscore: RegressionFit
    ols_vscore_predicts_rater: RegressionFit
    slope_ratio: float | None
    slope_ratio_label: str

    def to_json(self) -> dict:
        return {
            "n": len(self.dataset_ids),
            "datasets": [
                {
                    "dataset_id": d,
                    "vscore": self.vscores[d],
                    "geometric_mean": self.geometric_means[d],
                    "rater_rank": self.rater_ranking[d],
                    "vscore_rank": self.vscore_ranking[d],
                }
                for d in self.dataset_ids
            ],
            "spearman_rho": self.spearman_rho,
            "ols_rater": self.ols_rater.to_json(),
            "ols_vscore": self.ols_vscore.to_json(),
            "ols_vscore_predicts_rater": self.ols_vscore_predicts_rater.to_json(),
            "slope_ratio": self.slope_ratio,
            "slope_ratio_label": self.slope_ratio_label,
        }

    def to_text(self) -> str:
        lines = [
            f"datasets: {len(self.dataset_ids)}",
            f"spearman rho (V-score vs rater ranking): {self.spearman_rho:.4f}",
            _fit_line("rater geometric mean vs rank", self.ols_rater),
            _fit_line("V-score vs rank", self.ols_vscore),
            _fit_line("rater geometric mean vs V-score", self.ols_vscore_predicts_rater),
            f"slope ratio (rater : V-score): {self.slope_ratio} ({self.slope_ratio_label})",
            "",
            f"{'dataset_id':<24} {'V':>10} {'geo_mean':>10} {'V_rank':>7} {'rater_rank':>10}",
        ]
        order = sorted(self.dataset_ids, key=lambda d: (self.rater_ranking[d], d))
        for d in order:
            lines.append(
                f"{d:<24} {self.vscores[d]:>10.4f} {self.geometric_means[d]:>10.4f} "
                f"{self.vscore_ranking[d]:>7g} {self.rater_ranking[d]:>10g}"
            )
        return "\n".join(lines) + "\n"


def _fit_line(name: str, fit: RegressionFit) -> str:
    flag = " (degenerate)" if fit.degenerate else ""
    return f"{name}: slope={fit.slope:.4f} intercept={fit.intercept:.4f} R^2={fit.r2:.4f}{flag}"


def build_report(vscores: Mapping[str, float], raters: Iterable[RaterScoreRow]) -> ValidationReport:
    rater_rows = {row.dataset_id: row for row in raters}
    only_v = sorted(set(vscores) - set(rater_rows))
    only_r = sorted(set(rater_rows) - set(vscores))
    if only_v or only_r:
        raise IdMismatch(only_v, only_r)
    ids = tuple(sorted(vscores))
    v = [float(vscores[d]) for d in ids]
    gm = [geometric_mean(rater_rows[d].scores) for d in ids]
    v_rank = rank_with_ties(v)
    gm_rank = rank_with_ties(gm)
    rho = spearman(v, gm)
    fit_rater = ols_fit(gm_rank, gm)
    fit_v = ols_fit(v_rank, v)
    fit_cross = ols_fit(v, gm)
    ratio = round(fit_rater.slope / fit_v.slope, 2) if fit_v.slope != 0 else None
    return ValidationReport(
        dataset_ids=ids,
        vscores=dict(zip(ids, v)),
        geometric_means=dict(zip(ids, gm)),
        rater_ranking=dict(zip(ids, gm_rank)),
        vscore_ranking=dict(zip(ids, v_rank)),
        spearman_rho=rho,
        ols_rater=fit_rater,
        ols_vscore=fit_v,
        ols_vscore_predicts_rater=fit_cross,
        slope_ratio=ratio,
        slope_ratio_label=format_slope_ratio(fit_rater.slope, fit_v.slope),
    )
