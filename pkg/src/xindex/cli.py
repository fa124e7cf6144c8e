"""``xindex`` command line: fetch, vscore, xindex, validate, graph.

Exit codes: 0 success, 1 partial (soft errors present), 2 input errors,
3 provider errors, 4 seed not found.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import TextIO

from xindex.citegraph import build_layers, decay_weighted_sum
from xindex.config import ConfigError, RunConfig, read_config_file
from xindex.errors import (
    IdMismatch,
    ManifestError,
    MissingVScore,
    NotFound,
    ProviderError,
    SeedNotFound,
    XIndexError,
)
from xindex.io import (
    atomic_write_text,
    read_manifest,
    read_raters,
    read_vscores,
    vscores_csv,
    write_json,
    xindex_csv,
)
from xindex.model import DatasetRecord
from xindex.pipeline import score_dataset
from xindex.provider import FixtureProvider, OpenAlexProvider, Provider, ResponseCache
from xindex.svgplot import scatter_svg
from xindex.validate import build_report

logger = logging.getLogger("xindex")

EXIT_OK, EXIT_PARTIAL, EXIT_INPUT, EXIT_PROVIDER, EXIT_NOT_FOUND = 0, 1, 2, 3, 4


def make_provider(config: RunConfig) -> Provider:
    """Provider for the configured mode; the cache directory is only created once the source is usable."""
    if config.provider_mode == "fixture":
        if config.fixture_dir is None or not Path(config.fixture_dir).is_dir():
            raise ProviderError(f"fixture directory not found: {config.fixture_dir}")
        provider: Provider = FixtureProvider(config.fixture_dir, config=config.provider)
    else:
        provider = OpenAlexProvider(config=config.provider)
    provider.cache = ResponseCache(config.cache_dir)
    return provider


def cmd_fetch(records: Sequence[DatasetRecord], config: RunConfig, provider: Provider, out: TextIO) -> int:
    """Warm the cache for every dataset; returns the exit code."""
    hard_failures = 0
    warmed = 0
    for record in sorted(records, key=lambda r: r.dataset_id):
        before_fetch, before_hits = provider.fetches, provider.cache_hits
        try:
            score_dataset(record, provider, config.traversal, config.metric, workers=config.workers)
        except ProviderError as exc:
            hard_failures += 1
            print(f"{record.dataset_id}: FAILED {exc}", file=out)
            continue
        warmed += 1
        print(
            f"{record.dataset_id}: fetched={provider.fetches - before_fetch} "
            f"cached={provider.cache_hits - before_hits}",
            file=out,
        )
    print(
        f"warmed {warmed} of {len(records)} seeds; fetches={provider.fetches} cache_hits={provider.cache_hits}",
        file=out,
    )
    return EXIT_PROVIDER if hard_failures else EXIT_OK


def cmd_vscore(records: Sequence[DatasetRecord], config: RunConfig, provider: Provider, out: TextIO) -> int:
    rows = []
    details = []
    soft_errors = 0
    for record in sorted(records, key=lambda r: r.dataset_id):
        try:
            scored = score_dataset(record, provider, config.traversal, config.metric, workers=config.workers)
        except (ProviderError, XIndexError) as exc:
            soft_errors += 1
            rows.append({"dataset_id": record.dataset_id, "V": None, "errors": str(exc)})
            details.append({"dataset_id": record.dataset_id, "errors": [str(exc)]})
            continue
        if scored.errors:
            soft_errors += 1
        rows.append(
            {
                "dataset_id": record.dataset_id,
                **scored.breakdown.to_json(),
                "truncated": scored.truncated,
                "errors": "; ".join(scored.errors),
            }
        )
        details.append(scored.to_json(config.traversal))
    atomic_write_text(config.out_dir / "vscores.csv", vscores_csv(rows))
    write_json(config.out_dir / "breakdowns.json", details)
    print(f"scored {len(rows) - sum(r['V'] is None for r in rows)} of {len(rows)} datasets -> {config.out_dir}", file=out)
    return EXIT_PARTIAL if soft_errors else EXIT_OK


def author_totals(vscores: dict[str, float], records: Sequence[DatasetRecord]) -> list[tuple[str, int, float]]:
    """(author_id, dataset count, X-index) sorted by X-index descending, then author_id."""
    totals: dict[str, list[float]] = {}
    for record in records:
        if record.dataset_id not in vscores:
            raise MissingVScore(record.dataset_id)
        for author in dict.fromkeys(record.author_ids):
            totals.setdefault(author, []).append(vscores[record.dataset_id])
    rows = [(a, len(vs), math.fsum(vs)) for a, vs in totals.items()]
    return sorted(rows, key=lambda r: (-r[2], r[0]))


def cmd_xindex(vscores_path: Path, records: Sequence[DatasetRecord], out_dir: Path, out: TextIO) -> int:
    rows = author_totals(read_vscores(vscores_path), records)
    atomic_write_text(out_dir / "xindex.csv", xindex_csv(rows))
    print(f"{len(rows)} authors -> {out_dir / 'xindex.csv'}", file=out)
    return EXIT_OK


def cmd_validate(vscores_path: Path, raters_path: Path, out_dir: Path, out: TextIO) -> int:
    report = build_report(read_vscores(vscores_path), read_raters(raters_path))
    write_json(out_dir / "report.json", report.to_json())
    text = report.to_text()
    atomic_write_text(out_dir / "report.txt", text)
    ids = list(report.dataset_ids)
    atomic_write_text(
        out_dir / "rater_scatter.svg",
        scatter_svg(
            [report.rater_ranking[d] for d in ids],
            [report.geometric_means[d] for d in ids],
            labels=ids,
            slope=report.ols_rater.slope,
            intercept=report.ols_rater.intercept,
            title="Regression: rater geometric mean vs rank",
            xlabel="rater rank",
            ylabel="geometric mean score",
        ),
    )
    atomic_write_text(
        out_dir / "vscore_scatter.svg",
        scatter_svg(
            [report.vscore_ranking[d] for d in ids],
            [report.vscores[d] for d in ids],
            labels=ids,
            slope=report.ols_vscore.slope,
            intercept=report.ols_vscore.intercept,
            title="Regression: V-score vs rank",
            xlabel="V-score rank",
            ylabel="V-score",
        ),
    )
    out.write(text)
    return EXIT_OK


def graph_summary(seed: str, config: RunConfig, provider: Provider) -> dict:
    layering = build_layers(seed, config.traversal, provider, workers=config.workers)
    return {
        "seed": seed,
        "n": list(layering.depth_counts),
        "weighted": decay_weighted_sum(layering, config.traversal),
        "truncated": layering.truncated,
    }


def cmd_graph(seed: str, config: RunConfig, provider: Provider, out: TextIO) -> int:
    out.write(json.dumps(graph_summary(seed, config, provider), sort_keys=True) + "\n")
    return EXIT_OK


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="flat key = value config file")
    parser.add_argument("--cache-dir", dest="cache_dir")
    parser.add_argument("--out-dir", dest="out_dir")
    parser.add_argument("--provider", choices=["live", "fixture"])
    parser.add_argument("--fixture-dir", dest="fixture_dir")
    parser.add_argument("--base-url", dest="base_url")
    parser.add_argument("--contact-email", dest="contact_email")
    parser.add_argument("--depth-cap", dest="depth_cap", type=int)
    parser.add_argument("--decay-base", dest="decay_base", type=float)
    parser.add_argument("--entropy-floor", dest="entropy_floor", type=float)
    parser.add_argument("--max-age-days", dest="max_age_days", type=float)
    parser.add_argument("--workers", type=int)
    parser.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xindex", description="Dataset value scores and author X-index.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fetch", help="warm the provider cache for a manifest")
    _common(p)
    p.add_argument("--manifest")

    p = sub.add_parser("vscore", help="score every dataset in a manifest")
    _common(p)
    p.add_argument("--manifest")

    p = sub.add_parser("xindex", help="aggregate V-scores per author")
    _common(p)
    p.add_argument("--manifest")
    p.add_argument("--vscores", type=Path, help="default: <out-dir>/vscores.csv")

    p = sub.add_parser("validate", help="compare V-scores with rater scores")
    _common(p)
    p.add_argument("--vscores", type=Path, help="default: <out-dir>/vscores.csv")
    p.add_argument("--raters", type=Path, required=True)

    p = sub.add_parser("graph", help="citation layering of one seed work")
    _common(p)
    p.add_argument("seed")
    return parser


_CONFIG_FLAGS = (
    "cache_dir",
    "out_dir",
    "provider",
    "fixture_dir",
    "base_url",
    "contact_email",
    "depth_cap",
    "decay_base",
    "entropy_floor",
    "max_age_days",
    "workers",
    "manifest",
)


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")

    try:
        file_values = read_config_file(args.config) if args.config else {}
        flags = {k: getattr(args, k, None) for k in _CONFIG_FLAGS}
        config = RunConfig.from_sources(file_values, flags)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    try:
        if args.command in ("fetch", "vscore", "xindex"):
            if config.manifest is None:
                print("error: --manifest is required", file=sys.stderr)
                return EXIT_INPUT
            records = read_manifest(config.manifest)
        if args.command == "xindex":
            return cmd_xindex(args.vscores or config.out_dir / "vscores.csv", records, config.out_dir, out)
        if args.command == "validate":
            return cmd_validate(args.vscores or config.out_dir / "vscores.csv", args.raters, config.out_dir, out)

        provider = make_provider(config)
        if args.command == "fetch":
            return cmd_fetch(records, config, provider, out)
        if args.command == "vscore":
            return cmd_vscore(records, config, provider, out)
        return cmd_graph(args.seed, config, provider, out)
    except (ManifestError, IdMismatch, MissingVScore, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SeedNotFound, NotFound) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_FOUND
    except ProviderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PROVIDER


if __name__ == "__main__":
    sys.exit(main())
