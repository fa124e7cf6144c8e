"""Deterministic synthetic fixture: 15 datasets by 9 authors.

Citation counts (via manifest overrides) span 0 to 8,553. The citation
graphs are small and varied: an uncited seed, direct-only seeds, chains,
diamonds and cross-dataset citations. Run ``python -m xindex.synthetic DIR``
to regenerate the bundled copy.
"""

from __future__ import annotations

import random
import sys
from pathlib import Path

from xindex.io import atomic_write_text, manifest_csv, raters_csv
from xindex.model import DatasetRecord, RaterScoreRow
from xindex.pipeline import score_dataset
from xindex.provider.fixture import FixtureProvider, write_fixture

SEED = 20240917

FIELDS = (
    "medicine",
    "biology",
    "computer science",
    "social sciences",
    "psychology",
    "communication",
    "economics",
    "environmental science",
    "physics",
)

# (citation override or None, direct citers, depth profile multipliers, field spread, url status)
_PLAN = (
    (0, 0, (), 1, 200),
    (3, 2, (), 1, 404),
    (12, 3, (1,), 2, None),
    (27, 4, (1, 1), 2, 200),
    (None, 5, (2, 1, 1), 3, 200),
    (88, 6, (2,), 3, 500),
    (140, 7, (3, 1), 4, 200),
    (310, 8, (3, 2, 1), 4, 200),
    (None, 9, (4, 2), 5, 200),
    (960, 10, (4, 2, 1), 5, 403),
    (1500, 11, (5, 3, 2), 6, 200),
    (2400, 12, (6, 3, 2), 6, 200),
    (3900, 13, (6, 4, 3), 7, 200),
    (6100, 14, (7, 5, 3), 8, 200),
    (8553, 16, (8, 6, 4), 9, 200),
)

_DATASET_AUTHORS = (
    ("A01",),
    ("A02", "A03"),
    ("A04",),
    ("A05", "A01"),
    ("A06",),
    ("A07", "A08"),
    ("A09",),
    ("A02",),
    ("A03", "A04", "A05"),
    ("A06",),
    ("A07",),
    ("A08", "A09"),
    ("A01", "A06"),
    ("A02",),
    ("A05", "A09"),
)


RATER_NOISE = 0.10


def synthetic_raters(vscores: dict[str, float], noise: float = 0.0, seed: int = 0) -> list[RaterScoreRow]:
    """Five scores per dataset: V mapped increasingly onto [10, 90], times (1 + U(-noise, noise))."""
    rng = random.Random(seed)
    lo, hi = min(vscores.values()), max(vscores.values())
    span = (hi - lo) or 1.0
    rows = []
    for d in sorted(vscores):
        base = 10 + 80 * (vscores[d] - lo) / span
        scores = tuple(min(100.0, max(0.0, base * (1 + rng.uniform(-noise, noise)))) for _ in range(5))
        rows.append(RaterScoreRow(d, scores))
    return rows


def build(root: str | Path) -> tuple[Path, Path]:
    """Write ``<root>/provider/``, ``<root>/manifest.csv`` and ``<root>/raters.csv``.

    The raters are a noisy increasing function of the default-parameter
    V-scores. Returns the provider directory and the manifest path.
    """
    root = Path(root)
    rng = random.Random(SEED)
    works: dict[str, dict] = {}
    author_pool = [f"C{i:03d}" for i in range(1, 121)]
    authors: dict[str, list[str]] = {}
    urls: dict[str, int] = {}
    records = []

    def new_work(work_id: str, refs: list[str], spread: int, year: int) -> None:
        team = rng.sample(author_pool, rng.randint(1, 4))
        for a in team:
            if a not in authors:
                # a handful of authors have no field record at all
                if rng.random() < 0.08:
                    authors[a] = []
                    continue
                home = FIELDS[rng.randrange(spread)]
                extra = FIELDS[rng.randrange(len(FIELDS))]
                authors[a] = [home, home, extra]
        works[work_id] = {"id": work_id, "year": year, "authors": team, "referenced_works": sorted(set(refs))}

    for i, (override, n1, profile, spread, status) in enumerate(_PLAN):
        idx = i + 1
        seed = f"W-S{idx:02d}"
        works[seed] = {"id": seed, "year": 2012 + i % 6, "authors": [], "referenced_works": []}
        previous = [seed]
        layer = []
        for k in range(n1):
            wid = f"W-{idx:02d}-1-{k:02d}"
            new_work(wid, [seed], spread, 2018)
            layer.append(wid)
        previous = layer
        for depth, mult in enumerate(profile, start=2):
            nxt = []
            for k in range(mult * 2 if previous else 0):
                wid = f"W-{idx:02d}-{depth}-{k:02d}"
                refs = rng.sample(previous, min(len(previous), rng.randint(1, 2)))
                new_work(wid, refs, spread, 2018 + depth)
                nxt.append(wid)
            previous = nxt
        url = f"https://data.example.org/ds{idx:02d}" if status is not None else ""
        if status is not None:
            urls[url] = status
        records.append(
            DatasetRecord(
                dataset_id=f"ds{idx:02d}",
                title=f"Synthetic dataset {idx:02d}",
                seed_work_id=seed,
                access_url=url or None,
                author_ids=_DATASET_AUTHORS[i],
                scalar_citation_override=override,
            )
        )

    # a few works citing two datasets' neighbourhoods at once
    ids = sorted(w for w in works if not w.startswith("W-S"))
    for j in range(6):
        wid = f"W-X-{j:02d}"
        new_work(wid, rng.sample(ids, 2), len(FIELDS), 2023)

    provider_dir = root / "provider"
    write_fixture(
        provider_dir,
        [works[k] for k in sorted(works)],
        [{"id": a, "fields": authors[a]} for a in sorted(authors)],
        urls,
    )
    manifest = root / "manifest.csv"
    atomic_write_text(manifest, manifest_csv(records))

    source = FixtureProvider(provider_dir)
    vscores = {r.dataset_id: score_dataset(r, source).breakdown.V for r in records}
    atomic_write_text(root / "raters.csv", raters_csv(synthetic_raters(vscores, RATER_NOISE, SEED)))
    return provider_dir, manifest


if __name__ == "__main__":
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("fixtures/synthetic")
    provider_dir, manifest = build(target)
    print(f"wrote {provider_dir} and {manifest}")
