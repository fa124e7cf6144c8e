from __future__ import annotations

import random
import shutil
from pathlib import Path

import pytest

from xindex.synthetic import synthetic_raters as raters_from_vscores  # noqa: F401
from xindex.model import Work
from xindex.provider import GraphProvider

REPO = Path(__file__).resolve().parents[1]
BUNDLED = REPO / "fixtures" / "synthetic"


@pytest.fixture
def synthetic_fixture(tmp_path: Path) -> tuple[Path, Path]:
    """Fresh copy of the bundled 15-dataset fixture: (provider dir, manifest)."""
    target = tmp_path / "synthetic"
    shutil.copytree(BUNDLED, target)
    return target / "provider", target / "manifest.csv"


def graph_provider(edges, nodes=(), **kwargs) -> GraphProvider:
    return GraphProvider.from_edges(edges, nodes=nodes, **kwargs)


def diamond_edges():
    # (citing, cited)
    return [("B", "A"), ("C", "A"), ("D", "B"), ("D", "C")]


def chain_edges():
    ids = "ABCDEF"
    return [(ids[i + 1], ids[i]) for i in range(len(ids) - 1)]


def random_graph(rng: random.Random, max_nodes: int = 200, max_edges: int = 1000, cyclic: bool = False):
    n = rng.randint(2, max_nodes)
    nodes = [f"N{i:03d}" for i in range(n)]
    m = rng.randint(0, min(max_edges, n * (n - 1) // 2 if not cyclic else n * (n - 1)))
    edges = set()
    for _ in range(m):
        a, b = rng.sample(range(n), 2)
        if not cyclic and a < b:
            a, b = b, a
        # a cites b; in the acyclic case citations only point to lower indices
        edges.add((nodes[a], nodes[b]))
    return nodes, sorted(edges)


def works_with_authors(plan: dict[str, list[str]]) -> list[Work]:
    return [Work(work_id=w, coauthors=tuple((a, "unknown") for a in authors)) for w, authors in plan.items()]



_ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): exit criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE[number] = (title, report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, outcome = _ACCEPTANCE[number]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{verdict}] {number}. {title}")
