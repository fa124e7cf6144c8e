"""Exit criteria, one test per criterion; a PASS/FAIL line is printed for each."""

import json
import math
import os
import random
import resource
import shutil
import subprocess
import sys
import time
from datetime import timedelta

import numpy as np
import pytest

from conftest import BUNDLED, diamond_edges, graph_provider, random_graph
from oracles import ols_oracle, shortest_citation_distances, spearman_oracle
from xindex.citegraph import TraversalParams, build_layers, decay_weighted_sum
from xindex.cli import cmd_fetch, main
from xindex.config import RunConfig
from xindex.io import raters_csv, read_manifest, read_vscores
from xindex.metrics import normalized_entropy, reuse_depth, vscore, xindex
from xindex.model import CitationLayering, DatasetRecord, DisciplineDistribution
from xindex.provider import FixtureProvider, ResponseCache
from xindex.synthetic import synthetic_raters
from xindex.validate import RegressionFit, ValidationReport, format_slope_ratio, ols_fit, spearman

CASES = 500


def _series(rng, n, ties):
    if ties:
        return [float(rng.randint(0, max(2, n // 4))) for _ in range(n)]
    return [rng.uniform(-100, 100) for _ in range(n)]


@pytest.mark.acceptance(1, "spearman and ols_fit match brute-force oracles within 1e-9 on 1,000 instances each, < 10 s")
def test_kernel_oracle_equivalence():
    rng = random.Random(2024)
    start = time.perf_counter()
    checked = 0
    while checked < 1000:
        n = rng.randint(3, 200)
        ties = checked % 2 == 0
        x, y = _series(rng, n, ties), _series(rng, n, ties and checked % 4 == 0)
        if len(set(x)) < 2 or len(set(y)) < 2:
            continue
        assert abs(spearman(x, y) - spearman_oracle(x, y)) < 1e-9
        checked += 1
    checked = 0
    while checked < 1000:
        n = rng.randint(3, 200)
        x = _series(rng, n, checked % 2 == 0)
        if len(set(x)) < 2:
            continue
        y = [rng.uniform(-2, 2) * a + rng.gauss(0, 10) for a in x]
        fit = ols_fit(x, y)
        slope, intercept, r2 = ols_oracle(x, y)
        assert abs(fit.slope - slope) < 1e-9
        assert abs(fit.intercept - intercept) < 1e-9
        assert abs(fit.r2 - r2) < 1e-9
        checked += 1
    assert time.perf_counter() - start < 10.0


@pytest.mark.acceptance(2, "build_layers equals brute-force shortest paths on 200 random graphs (diamonds, cycles), < 30 s")
def test_bfs_correctness():
    rng = random.Random(7)
    params = TraversalParams()
    graphs = [(list("ABCD"), diamond_edges(), "A"), (list("ABC"), [("B", "A"), ("C", "B"), ("A", "C")], "A")]
    while len(graphs) < 200:
        nodes, edges = random_graph(rng, max_nodes=200, max_edges=1000, cyclic=len(graphs) % 3 == 0)
        graphs.append((nodes, edges, rng.choice(nodes)))
    start = time.perf_counter()
    for nodes, edges, seed in graphs:
        assert len(nodes) <= 200 and len(edges) <= 1000
        layering = build_layers(seed, params, graph_provider(edges, nodes=nodes))
        expected = {w: d for w, d in shortest_citation_distances(edges, seed).items() if d <= params.depth_cap}
        assert dict(layering.depths) == expected
        assert list(layering.depth_counts) == [sum(1 for d in expected.values() if d == k) for k in range(1, 5)]
    assert time.perf_counter() - start < 30.0


def _random_dist(rng):
    k = rng.randint(1, 12)
    return {f"field{i}": rng.randint(1, 40) for i in rng.sample(range(30), k)}


@pytest.mark.acceptance(3, "metric invariants over >= 500 random cases each, zero failures")
def test_metric_invariants():
    rng = random.Random(99)
    for _ in range(CASES):
        counts = _random_dist(rng)
        h = normalized_entropy(DisciplineDistribution(counts))
        assert 0.0 <= h <= 1.0
        labels = list(counts)
        shuffled = labels[:]
        rng.shuffle(shuffled)
        permuted = {new: counts[old] for old, new in zip(labels, shuffled)}
        assert normalized_entropy(DisciplineDistribution(permuted)) == pytest.approx(h, abs=1e-12)
        k = rng.randint(2, 9)
        scaled = {f: c * k for f, c in counts.items()}
        assert normalized_entropy(DisciplineDistribution(scaled)) == pytest.approx(h, abs=1e-12)

    for _ in range(CASES):
        n1 = rng.choice([0, rng.randint(1, 100)])
        deeper = [rng.choice([0, rng.randint(0, 100)]) for _ in range(3)] if n1 else [0, 0, 0]
        d = reuse_depth(CitationLayering((n1, *deeper)))
        assert (d >= 1) == (n1 >= 1)
        if n1:
            assert (d == 1.0) == (sum(deeper) == 0)
        else:
            assert d == 0.0

    for _ in range(CASES):
        X, Y = rng.uniform(0, 5), rng.randint(0, 1)
        c1 = rng.randint(0, 10_000)
        c2 = c1 + rng.randint(1, 10_000)
        D = rng.uniform(0.01, 3)
        assert vscore(X, Y, c1, D).V < vscore(X, Y, c2, D).V
        assert vscore(X, Y, c1, 0.0).V == vscore(X, Y, c2, 0.0).V == X + Y

    for _ in range(CASES):
        def batch(prefix):
            out = []
            for i in range(rng.randint(0, 8)):
                rec = DatasetRecord(
                    dataset_id=f"{prefix}{i}", title="", seed_work_id="W",
                    author_ids=tuple(rng.sample(["a", "b", "c", "d"], rng.randint(1, 3))),
                )
                out.append((rec, vscore(rng.uniform(0, 4), rng.randint(0, 1), rng.randint(0, 9000), rng.uniform(0, 2))))
            return out

        left, right = batch("L"), batch("R")
        for author in "abcd":
            assert xindex(author, left + right) == pytest.approx(xindex(author, left) + xindex(author, right), rel=1e-12, abs=1e-12)

    for _ in range(CASES):
        items = [(rng.uniform(0, 4), rng.randint(0, 1), rng.randint(0, 9000), rng.uniform(0, 2)) for _ in range(rng.randint(2, 15))]
        shift = rng.uniform(0, 10)
        before = [vscore(*it).V for it in items]
        after = [vscore(it[0] + shift, *it[1:]).V for it in items]
        # brute-force ordering oracle: count how many items beat each item
        def positions(vals):
            return [sum(1 for w in vals if w > v) for v in vals]
        if len(set(before)) == len(before):
            assert positions(before) == positions(after)


@pytest.mark.acceptance(4, "point checks: V(1,1,0,0)=2, V(1,1,100,1.2625)=7.82659±1e-4, decay sum [10,4,2,1]=12.625")
def test_point_checks():
    assert vscore(1.0, 1, 0, 0.0).V == 2.0
    assert abs(vscore(1.0, 1, 100, 1.2625).V - 7.82659) <= 1e-4
    assert decay_weighted_sum(CitationLayering((10, 4, 2, 1))) == 12.625


def _oracle_gm(scores):
    return float(np.exp(np.log(np.asarray(scores, float)).mean()))


@pytest.mark.acceptance(5, "bundled fixture: monotone raters give rho = 1.0 exactly; 10%-noise raters match oracle to 1e-9")
def test_validation_protocol(tmp_path):
    provider_dir, manifest = BUNDLED / "provider", BUNDLED / "manifest.csv"
    records = read_manifest(manifest)
    assert len(records) == 15
    assert len({a for r in records for a in r.author_ids}) == 9
    common = ["--fixture-dir", str(provider_dir), "--cache-dir", str(tmp_path / "cache"), "--out-dir", str(tmp_path / "out")]
    assert main(["vscore", "--manifest", str(manifest), *common]) == 0
    breakdowns = json.loads((tmp_path / "out" / "breakdowns.json").read_text())
    assert min(b["C"] for b in breakdowns) == 0 and max(b["C"] for b in breakdowns) == 8553
    v = read_vscores(tmp_path / "out" / "vscores.csv")

    monotone = tmp_path / "monotone.csv"
    monotone.write_text(raters_csv(synthetic_raters(v)))
    assert main(["validate", "--raters", str(monotone), *common]) == 0
    assert json.loads((tmp_path / "out" / "report.json").read_text())["spearman_rho"] == 1.0

    noisy_rows = synthetic_raters(v, noise=0.10, seed=5)
    noisy = tmp_path / "noisy.csv"
    noisy.write_text(raters_csv(noisy_rows))
    assert main(["validate", "--raters", str(noisy), *common]) == 0
    reported = json.loads((tmp_path / "out" / "report.json").read_text())["spearman_rho"]
    ids = sorted(v)
    gm = {row.dataset_id: _oracle_gm(row.scores) for row in noisy_rows}
    expected = spearman_oracle([v[d] for d in ids], [gm[d] for d in ids])
    assert abs(reported - expected) < 1e-9


def _pipeline(workdir, raters):
    """fetch -> vscore -> xindex -> validate in subprocesses; returns elapsed seconds."""
    fixture = workdir / "fixture"
    shutil.copytree(BUNDLED, fixture)
    common = [
        "--fixture-dir", str(fixture / "provider"), "--cache-dir", str(workdir / "cache"), "--out-dir", str(workdir / "out"),
    ]
    manifest = ["--manifest", str(fixture / "manifest.csv")]
    steps = [
        ["fetch", *manifest, *common],
        ["vscore", *manifest, *common],
        ["xindex", *manifest, *common],
        ["validate", "--raters", str(raters), *common],
    ]
    env = dict(os.environ, PYTHONHASHSEED="random")
    start = time.perf_counter()
    for step in steps:
        proc = subprocess.run([sys.executable, "-m", "xindex.cli", *step], capture_output=True, text=True, env=env)
        assert proc.returncode == 0, proc.stderr
    return time.perf_counter() - start


@pytest.mark.acceptance(6, "fixture pipeline fetch->vscore->xindex->validate < 5 s, < 1 GB, byte-identical reruns")
def test_pipeline_determinism_and_performance(tmp_path):
    raters = BUNDLED / "raters.csv"
    elapsed_a = _pipeline(tmp_path / "a", raters)
    elapsed_b = _pipeline(tmp_path / "b", raters)
    peak_kib = resource.getrusage(resource.RUSAGE_CHILDREN).ru_maxrss
    assert elapsed_a < 5.0 and elapsed_b < 5.0
    assert peak_kib * 1024 < 1024**3
    out_a, out_b = tmp_path / "a" / "out", tmp_path / "b" / "out"
    names = sorted(p.name for p in out_a.iterdir())
    assert names == [
        "breakdowns.json", "rater_scatter.svg", "report.json", "report.txt", "vscore_scatter.svg", "vscores.csv", "xindex.csv",
    ]
    for name in names:
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes(), name


@pytest.mark.acceptance(7, "warm-cache fetch issues zero provider requests; stale entries are re-fetched")
def test_incremental_update(tmp_path, capsys):
    records = read_manifest(BUNDLED / "manifest.csv")
    config = RunConfig.from_sources({"fixture_dir": str(BUNDLED / "provider"), "cache_dir": str(tmp_path / "cache")}, {}, env={})
    cache = ResponseCache(tmp_path / "cache")

    cold = FixtureProvider(BUNDLED / "provider", cache=cache)
    assert cmd_fetch(records, config, cold, sys.stdout) == 0
    total_entries = len(list((tmp_path / "cache").glob("*.json")))
    assert cold.fetches == total_entries > 0

    warm = FixtureProvider(BUNDLED / "provider", cache=cache)
    assert cmd_fetch(records, config, warm, sys.stdout) == 0
    assert warm.fetches == 0

    # age a handful of entries past the 30-day window
    stale = sorted((tmp_path / "cache").glob("*.json"))[:7]
    for path in stale:
        doc = json.loads(path.read_text())
        doc["fetched_at"] = (cache.clock() - timedelta(days=31)).isoformat()
        path.write_text(json.dumps(doc))
    refresh = FixtureProvider(BUNDLED / "provider", cache=cache)
    assert cmd_fetch(records, config, refresh, sys.stdout) == 0
    assert refresh.fetches == len(stale)

    again = FixtureProvider(BUNDLED / "provider", cache=cache)
    cmd_fetch(records, config, again, sys.stdout)
    assert again.fetches == 0


@pytest.mark.acceptance(8, "stored slope pair (-4.2755, -0.6171) renders as '≈ 7:1'")
def test_report_ratio_formatting():
    assert format_slope_ratio(-4.2755, -0.6171) == "≈ 7:1"
    fit = lambda slope: RegressionFit(slope=slope, intercept=0.0, r2=0.94, n=15)  # noqa: E731
    report = ValidationReport(
        dataset_ids=(), vscores={}, geometric_means={}, rater_ranking={}, vscore_ranking={},
        spearman_rho=0.95, ols_rater=fit(-4.2755), ols_vscore=fit(-0.6171), ols_vscore_predicts_rater=fit(6.93),
        slope_ratio=round(-4.2755 / -0.6171, 2), slope_ratio_label=format_slope_ratio(-4.2755, -0.6171),
    )
    assert "(≈ 7:1)" in report.to_text()
    assert report.to_json()["slope_ratio"] == 6.93
    assert report.to_json()["slope_ratio_label"] == "≈ 7:1"
