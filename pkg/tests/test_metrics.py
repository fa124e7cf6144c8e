import math
import random

import pytest

from oracles import shannon_oracle
from xindex.citegraph import TraversalParams
from xindex.errors import DimensionMismatch, DomainError, NoSource
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
from xindex.model import CitationLayering, DatasetRecord, DisciplineDistribution


def dist(**counts):
    return DisciplineDistribution(counts)


class TestEntropy:
    def test_uniform_two_fields_is_one(self):
        assert normalized_entropy(dist(a=1, b=1)) == pytest.approx(1.0, abs=1e-15)

    def test_single_field_is_zero(self):
        assert normalized_entropy(dist(a=7)) == 0.0
        assert normalized_entropy(DisciplineDistribution()) == 0.0

    def test_skewed_three_fields(self):
        # 1.5 bits / log2(3)
        assert normalized_entropy(dist(a=2, b=1, c=1)) == pytest.approx(0.9463946303571862, abs=1e-12)

    def test_matches_bruteforce(self):
        rng = random.Random(3)
        for _ in range(200):
            counts = [rng.randint(1, 50) for _ in range(rng.randint(2, 12))]
            d = DisciplineDistribution({f"f{i}": c for i, c in enumerate(counts)})
            expected = shannon_oracle(counts) / math.log(len(counts))
            assert normalized_entropy(d) == pytest.approx(expected, abs=1e-12)


class TestBreadth:
    def test_empty_pool_is_floor(self):
        assert breadth(DisciplineDistribution()) == 0.1

    def test_uniform_two(self):
        assert breadth(dist(a=1, b=1)) == pytest.approx(2.584962500721156, abs=1e-12)

    def test_single_field_floored(self):
        assert breadth(dist(med=4)) == pytest.approx(0.2, abs=1e-15)

    def test_weight_zero_is_pure_evenness(self):
        assert breadth(dist(a=1, b=1), MetricParams(breadth_richness_weight=0)) == pytest.approx(1.0)

    def test_floor_bounds(self):
        with pytest.raises(ValueError):
            MetricParams(entropy_floor=1.5)


def test_quality_binary():
    assert quality(True) == 1
    assert quality(False) == 0
    assert quality(None) == 0


class TestReuseDepth:
    def test_normalized(self):
        assert reuse_depth(CitationLayering((10, 4, 2, 1))) == pytest.approx(1.2625, abs=1e-15)

    def test_direct_only(self):
        assert reuse_depth(CitationLayering((7, 0, 0, 0))) == 1.0

    def test_uncited(self):
        assert reuse_depth(CitationLayering((0, 0, 0, 0))) == 0.0

    def test_raw_mode(self):
        assert reuse_depth(CitationLayering((10, 4, 2, 1)), mode="raw") == 12.625

    def test_depth_mismatch(self):
        with pytest.raises(DimensionMismatch):
            reuse_depth(CitationLayering((1, 1, 1)), TraversalParams())


class TestVScore:
    def test_collapses_without_citations(self):
        assert vscore(1.0, 1, 0, 0.0).V == 2.0

    def test_worked_example(self):
        b = vscore(1.0, 1, 100, 1.2625)
        assert b.V == pytest.approx(7.82658965251209, abs=1e-12)
        assert (b.X, b.Y, b.C, b.D) == (1.0, 1, 100, 1.2625)

    def test_top_of_citation_range(self):
        # 3.585 + 1.5 ln 8554
        assert vscore(2.585, 1, 8553, 1.5).V == pytest.approx(17.166231433180283, abs=1e-9)

    @pytest.mark.parametrize(
        "args",
        [(-0.1, 1, 1, 1.0), (1.0, 2, 1, 1.0), (1.0, 1, -1, 1.0), (1.0, 1, 1.5, 1.0), (1.0, 1, 1, -1.0), (float("nan"), 0, 0, 0)],
    )
    def test_rejects_bad_inputs(self, args):
        with pytest.raises(DomainError):
            vscore(*args)

    def test_alternate_citation_form(self):
        assert vscore(1.0, 0, 10, 2.0, form="log_of_scaled").V == pytest.approx(1.0 + math.log(21))


class TestCitationCount:
    layering = CitationLayering((12, 3, 0, 0))

    def test_graph_mode(self):
        assert citation_count(self.layering, None, "graph") == 12
        assert citation_count(self.layering, 40, "graph") == 12

    def test_override_wins(self):
        assert citation_count(self.layering, 40) == 40

    def test_uncited(self):
        assert citation_count(CitationLayering((0, 0, 0, 0))) == 0

    def test_no_source(self):
        with pytest.raises(NoSource):
            citation_count(None, None)

    def test_negative_override_rejected(self):
        with pytest.raises(DomainError):
            citation_count(self.layering, -3)


def _rec(i, authors):
    return DatasetRecord(dataset_id=f"d{i}", title="", seed_work_id=f"W{i}", author_ids=tuple(authors))


class TestXIndex:
    def test_sum_over_datasets(self):
        pairs = [(_rec(1, ["A"]), vscore(3.0, 0, 0, 0.0)), (_rec(2, ["A", "B"]), vscore(3.5, 1, 0, 0.0))]
        assert xindex("A", pairs) == 7.5
        assert xindex("B", pairs) == 4.5

    def test_absent_author(self):
        assert xindex("Z", [(_rec(1, ["A"]), vscore(3.0, 0, 0, 0.0))]) == 0.0

    def test_full_credit_to_each_coauthor(self):
        pairs = [(_rec(1, ["A", "B"]), vscore(2.0, 0, 0, 0.0))]
        assert xindex("A", pairs) == xindex("B", pairs) == 2.0
