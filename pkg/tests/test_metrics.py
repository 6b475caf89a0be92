import io

import pytest
from hypothesis import given
from hypothesis import strategies as st

from asrel.errors import ParseError
from asrel.graph import AsGraph, Classification, RelType
from asrel.ingest import SiblingSet
from asrel.metrics import (
    CLASSIFICATION_HEADER,
    ReferenceSet,
    compare,
    load_reference,
    stability,
    summarize_classifications,
    vote_share_histogram,
    write_classifications_csv,
    write_histogram_csv,
    write_metrics_csv,
)


def cls(key, rel, method="deterministic-p1", votes=1, invalid=0):
    if rel is RelType.UNCLASSIFIED:
        method = "unclassified"
    return Classification(key, rel, method, 0.0, 0.0, 0.0, votes, invalid)


class TestLoadReference:
    def test_code_convention(self):
        ref = load_reference(["1|2|-1\n", "3|4|0\n", "5|6|1\n"])
        assert ref.get((1, 2)) is RelType.P2C      # 1 is the provider
        assert ref.get((3, 4)) is RelType.P2P
        assert ref.get((5, 6)) is RelType.S2S

    def test_provider_direction_canonicalized(self):
        ref = load_reference(["9|2|-1\n"])          # 9 is the provider
        assert ref.get((2, 9)) is RelType.C2P

    def test_sibling_mapping_applied(self):
        siblings = SiblingSet()
        siblings.merge(20, 21)
        ref = load_reference(["21|5|0\n"], siblings)
        assert ref.get((5, 20)) is RelType.P2P

    def test_pair_collapsing_to_one_as_skipped(self):
        siblings = SiblingSet()
        siblings.merge(20, 21)
        ref = load_reference(["20|21|1\n"], siblings)
        assert len(ref) == 0

    def test_conflicting_records_rejected(self):
        with pytest.raises(ParseError):
            load_reference(["1|2|0\n", "1|2|-1\n"])

    def test_duplicate_consistent_records_allowed(self):
        ref = load_reference(["1|2|0\n", "2|1|0\n"])
        assert len(ref) == 1

    def test_unknown_code_rejected(self):
        with pytest.raises(ParseError):
            load_reference(["1|2|7\n"])

    def test_malformed_line_reports_position(self):
        with pytest.raises(ParseError) as err:
            load_reference(["1|2|0\n", "nope\n"], source="ref.txt")
        assert "ref.txt:2" in str(err.value)


class TestCompare:
    def test_eight_of_ten_with_one_reference_gap(self):
        # 8 agree, 1 disagrees, 1 edge missing from the reference:
        # overall 8/10, both-classified 8/9.
        records = [cls((i, i + 100), RelType.P2P) for i in range(1, 9)]
        records.append(cls((9, 109), RelType.C2P))      # disagrees
        records.append(cls((10, 110), RelType.P2P))     # not in reference
        ref = ReferenceSet(
            {(i, i + 100): RelType.P2P for i in range(1, 9)}
            | {(9, 109): RelType.P2C}
        )
        result = compare(records, ref)
        assert result.edges_total == 10
        assert result.both_classified == 9
        assert result.matches == 8
        assert result.pct_match_overall == pytest.approx(80.0)
        assert result.pct_match_both == pytest.approx(100 * 8 / 9)

    def test_empty_reference(self):
        result = compare([cls((1, 2), RelType.P2P)], ReferenceSet())
        assert result.pct_match_overall == 0.0
        assert result.pct_match_both is None

    def test_direction_flip_is_disagreement(self):
        ours = [cls((1, 2), RelType.C2P)]       # 1 is the customer
        ref = load_reference(["1|2|-1\n"])       # 1 is the provider
        result = compare(ours, ref)
        assert result.matches == 0
        assert result.both_classified == 1

    def test_unclassified_edges_not_counted_as_both(self):
        ours = [cls((1, 2), RelType.UNCLASSIFIED, votes=0)]
        ref = ReferenceSet({(1, 2): RelType.P2P})
        result = compare(ours, ref)
        assert result.edges_total == 1
        assert result.both_classified == 0

    def test_s2s_reference_records_counted_not_scored(self):
        ours = [cls((1, 2), RelType.P2P)]
        ref = ReferenceSet({(1, 2): RelType.S2S})
        result = compare(ours, ref)
        assert result.s2s_unmerged == 1
        assert result.both_classified == 0

    def test_sibling_db_records_excluded_from_edge_universe(self):
        ours = [
            cls((1, 2), RelType.P2P),
            Classification((3, 4), RelType.S2S, "sibling-db", 0, 0, 0, 0, 0),
        ]
        result = compare(ours, ReferenceSet({(1, 2): RelType.P2P}))
        assert result.edges_total == 1

    def test_reference_only_counted(self):
        result = compare(
            [cls((1, 2), RelType.P2P)],
            ReferenceSet({(1, 2): RelType.P2P, (7, 8): RelType.P2P}),
        )
        assert result.reference_only == 1

    @given(
        st.dictionaries(
            st.tuples(st.integers(1, 6), st.integers(7, 12)),
            st.sampled_from([RelType.C2P, RelType.P2C, RelType.P2P, RelType.UNCLASSIFIED]),
            max_size=12,
        ),
        st.dictionaries(
            st.tuples(st.integers(1, 6), st.integers(7, 12)),
            st.sampled_from([RelType.C2P, RelType.P2C, RelType.P2P]),
            max_size=12,
        ),
    )
    def test_counting_invariants(self, ours, theirs):
        records = [cls(k, rel) for k, rel in ours.items()]
        result = compare(records, ReferenceSet(dict(theirs)))
        assert result.matches <= result.both_classified <= result.edges_total
        assert result.edges_total == len(ours)
        if result.edges_total:
            assert result.pct_match_overall == pytest.approx(
                100 * result.matches / result.edges_total
            )
        assert result.reference_only == len(
            [k for k in theirs if k not in ours]
        )


class TestStability:
    def test_identical_runs(self):
        records = [cls((1, 2), RelType.P2P), cls((3, 4), RelType.C2P)]
        value, shared = stability(records, list(records))
        assert value == 1.0
        assert shared == 2

    def test_one_flip_among_hundred(self):
        a = [cls((i, i + 500), RelType.P2P) for i in range(1, 101)]
        b = [cls((i, i + 500), RelType.P2P) for i in range(1, 100)]
        b.append(cls((100, 600), RelType.C2P))
        value, shared = stability(a, b)
        assert shared == 100
        assert value == pytest.approx(0.99)

    def test_disjoint_runs_undefined(self):
        value, shared = stability(
            [cls((1, 2), RelType.P2P)], [cls((3, 4), RelType.P2P)]
        )
        assert value is None
        assert shared == 0

    def test_unclassified_edges_not_shared(self):
        a = [cls((1, 2), RelType.P2P), cls((3, 4), RelType.UNCLASSIFIED, votes=0)]
        b = [cls((1, 2), RelType.P2P), cls((3, 4), RelType.C2P)]
        value, shared = stability(a, b)
        assert shared == 1
        assert value == 1.0


class TestHistogram:
    def test_counts_sum_to_voted_edges(self):
        g = AsGraph()
        g.add_edge(1, 2)
        g.add_edge(3, 4)
        g.add_edge(5, 6)
        g.vote(1, 2, RelType.C2P)
        g.vote(3, 4, RelType.P2C)
        g.vote_invalid(5, 6)
        histogram = vote_share_histogram(g)
        assert len(histogram) == 20
        assert sum(count for _, _, count in histogram) == 2

    def test_unanimous_edges_land_in_outer_bins(self):
        g = AsGraph()
        g.add_edge(1, 2)
        g.add_edge(3, 4)
        for _ in range(5):
            g.vote(1, 2, RelType.C2P)   # low customer: p2c share 0
            g.vote(3, 4, RelType.P2C)   # high customer: p2c share 1
        histogram = vote_share_histogram(g)
        assert histogram[0][2] == 1
        assert histogram[-1][2] == 1
        assert sum(count for _, _, count in histogram[1:-1]) == 0

    def test_split_vote_lands_mid_bin(self):
        g = AsGraph()
        g.add_edge(1, 2)
        g.vote(1, 2, RelType.C2P)
        g.vote(1, 2, RelType.P2C)
        histogram = vote_share_histogram(g)
        mid = [b for b in histogram if b[0] <= 0.5 < b[1]]
        assert mid[0][2] == 1


class TestSummaries:
    def records(self):
        return [
            cls((1, 2), RelType.C2P, "deterministic-p1"),
            cls((3, 4), RelType.P2C, "deterministic-p2"),
            cls((5, 6), RelType.P2P, "gap-p2p"),
            cls((7, 8), RelType.UNCLASSIFIED, votes=0),
            Classification((9, 10), RelType.S2S, "sibling-db", 0, 0, 0, 0, 0),
        ]

    def test_counts_and_shares(self):
        edges, counts, pct_cls, pct_det, pct_heu = summarize_classifications(
            self.records()
        )
        assert edges == 4
        assert counts["deterministic-p1"] == 1
        assert counts["sibling-db"] == 1
        assert pct_cls == pytest.approx(75.0)
        assert pct_det == pytest.approx(50.0)
        assert pct_heu == pytest.approx(25.0)
        assert pct_det <= pct_cls <= 100.0

    def test_empty_input(self):
        assert summarize_classifications([]) == (0, {}, 0.0, 0.0, 0.0)


class TestCsvWriters:
    def test_metrics_rows_with_uneven_columns(self):
        buf = io.StringIO()
        write_metrics_csv(
            [{"a": 1, "b": 2}, {"a": 3, "c": 4}], buf
        )
        lines = buf.getvalue().splitlines()
        assert lines[0] == "a,b,c"
        assert lines[1] == "1,2,"
        assert lines[2] == "3,,4"

    def test_histogram_format(self):
        buf = io.StringIO()
        write_histogram_csv([(0.0, 0.05, 3)], buf)
        assert buf.getvalue() == "bin_lo,bin_hi,count\n0.00,0.05,3\n"

    def test_classifications_format(self):
        buf = io.StringIO()
        record = Classification(
            (3, 7), RelType.C2P, "deterministic-p1", 1.0, 0.0, 0.0, 5, 1
        )
        write_classifications_csv([record], buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == CLASSIFICATION_HEADER
        assert lines[1] == "3,7,c2p,deterministic-p1,1.000000,0.000000,0.000000,1"
