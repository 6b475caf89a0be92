import pytest
from hypothesis import given
from hypothesis import strategies as st

from asrel.errors import ParameterError, SelfLoopError, UnknownEdgeError
from asrel.graph import (
    MAX_ASN,
    AsGraph,
    AsPath,
    Classification,
    RelType,
    VoteTally,
    edge_key,
    oriented,
)

asns = st.integers(min_value=1, max_value=MAX_ASN)


class TestEdgeKey:
    def test_orders_endpoints(self):
        assert edge_key(7, 3) == (3, 7)
        assert edge_key(3, 7) == (3, 7)

    def test_self_loop_rejected(self):
        with pytest.raises(SelfLoopError):
            edge_key(5, 5)

    @given(asns, asns)
    def test_symmetric_and_sorted(self, a, b):
        if a == b:
            with pytest.raises(SelfLoopError):
                edge_key(a, b)
        else:
            key = edge_key(a, b)
            assert key == edge_key(b, a)
            assert key[0] < key[1]


class TestOriented:
    def test_low_to_high_is_identity(self):
        assert oriented(RelType.C2P, 3, 7) is RelType.C2P

    def test_high_to_low_flips_direction(self):
        assert oriented(RelType.C2P, 7, 3) is RelType.P2C
        assert oriented(RelType.P2C, 7, 3) is RelType.C2P

    def test_symmetric_types_unchanged(self):
        for rel in (RelType.P2P, RelType.S2S, RelType.UNCLASSIFIED):
            assert oriented(rel, 7, 3) is rel
            assert oriented(rel, 3, 7) is rel

    @given(st.sampled_from(list(RelType)), asns, asns)
    def test_involution(self, rel, a, b):
        if a != b:
            assert oriented(oriented(rel, a, b), a, b) is rel


class TestRelType:
    def test_flip_pairs(self):
        assert RelType.C2P.flipped() is RelType.P2C
        assert RelType.P2C.flipped() is RelType.C2P
        assert RelType.P2P.flipped() is RelType.P2P
        assert RelType.S2S.flipped() is RelType.S2S

    def test_serialized_values(self):
        assert RelType.C2P.value == "c2p"
        assert RelType.UNCLASSIFIED.value == "unclassified"


class TestVoteTally:
    def test_shares_sum_to_one_when_voted(self):
        tally = VoteTally(low_customer=3, high_customer=1, p2p=1, invalid=2)
        c2p, p2c, p2p = tally.shares()
        assert c2p == pytest.approx(0.6)
        assert p2c == pytest.approx(0.2)
        assert p2p == pytest.approx(0.2)
        assert c2p + p2c + p2p == pytest.approx(1.0)

    def test_invalid_votes_excluded_from_shares(self):
        tally = VoteTally(low_customer=4, invalid=100)
        assert tally.shares() == (1.0, 0.0, 0.0)

    def test_unvoted_tally_gives_zero_shares(self):
        assert VoteTally().shares() == (0.0, 0.0, 0.0)
        assert VoteTally(invalid=5).shares() == (0.0, 0.0, 0.0)

    def test_classification_votes(self):
        assert VoteTally(low_customer=2, high_customer=1, p2p=3).classification_votes() == 6


class TestAsPath:
    def test_edges_in_traversal_order(self):
        path = AsPath((1, 2, 3), "bgp", "", 1)
        assert list(path.edges()) == [(1, 2), (2, 3)]

    def test_too_short_rejected(self):
        with pytest.raises(ParameterError):
            AsPath((1,), "bgp", "", 1)

    def test_consecutive_duplicate_rejected(self):
        with pytest.raises(ParameterError):
            AsPath((1, 2, 2, 3), "bgp", "", 1)

    def test_nonconsecutive_revisit_allowed(self):
        # Loop trimming is ingest's job; the container stays permissive.
        AsPath((1, 2, 1), "trace", "a", 1)

    def test_bad_source_rejected(self):
        with pytest.raises(ParameterError):
            AsPath((1, 2), "carrier-pigeon", "", 1)

    def test_weight_must_be_positive(self):
        with pytest.raises(ParameterError):
            AsPath((1, 2), "bgp", "", 0)

    def test_asn_out_of_range(self):
        with pytest.raises(ParameterError):
            AsPath((0, 2), "bgp", "", 1)
        with pytest.raises(ParameterError):
            AsPath((1, MAX_ASN + 1), "bgp", "", 1)


class TestAsGraph:
    def build(self):
        g = AsGraph()
        g.add_edge(1, 2)
        g.add_edge(2, 3)
        return g

    def test_add_edge_registers_vertices(self):
        g = self.build()
        assert g.vertices == {1, 2, 3}
        assert g.n_edges == 2
        assert g.has_edge(2, 1)
        assert not g.has_edge(1, 3)

    def test_degree_and_neighbors(self):
        g = self.build()
        assert g.degree(2) == 2
        assert g.neighbors(2) == {1, 3}
        assert g.degree(99) == 0

    def test_add_edge_idempotent(self):
        g = self.build()
        g.vote(1, 2, RelType.C2P)
        g.add_edge(1, 2)
        assert g.n_edges == 2
        assert g.tally((1, 2)).classification_votes() == 1

    def test_self_loop_rejected(self):
        with pytest.raises(SelfLoopError):
            self.build().add_edge(4, 4)

    def test_vote_maps_direction_to_canonical_counters(self):
        g = self.build()
        # 2 is the customer in c2p(2, 1): high endpoint of (1, 2).
        g.vote(2, 1, RelType.C2P)
        tally = g.tally((1, 2))
        assert tally.high_customer == 1 and tally.low_customer == 0
        g.vote(1, 2, RelType.C2P)
        assert g.tally((1, 2)).low_customer == 1

    def test_vote_p2c_mirrors_c2p(self):
        g = self.build()
        g.vote(1, 2, RelType.P2C)  # 2 is the customer
        g.vote(2, 1, RelType.C2P)  # same claim from the other direction
        tally = g.tally((1, 2))
        assert tally.high_customer == 2

    def test_vote_weight_multiplies(self):
        g = self.build()
        g.vote(1, 2, RelType.P2P, weight=5)
        assert g.tally((1, 2)).p2p == 5

    def test_vote_unknown_edge_rejected(self):
        with pytest.raises(UnknownEdgeError):
            self.build().vote(1, 3, RelType.P2P)

    def test_invalid_vote_kept_separate(self):
        g = self.build()
        g.vote_invalid(1, 2)
        tally = g.tally((1, 2))
        assert tally.invalid == 1
        assert tally.classification_votes() == 0

    def test_copy_unvoted_shares_structure_not_tallies(self):
        g = self.build()
        g.vote(1, 2, RelType.P2P)
        clone = g.copy_unvoted()
        assert clone.edges == g.edges
        assert clone.tally((1, 2)).classification_votes() == 0
        clone.add_edge(8, 9)
        assert not g.has_edge(8, 9)

    def test_add_path_edges(self):
        g = AsGraph()
        g.add_path_edges(AsPath((5, 6, 7), "bgp", "", 1))
        assert g.edges == {(5, 6), (6, 7)}


class TestClassification:
    def test_classified_flag(self):
        cls = Classification((1, 2), RelType.C2P, "deterministic-p1", 1.0, 0.0, 0.0, 4, 0)
        assert cls.classified
        un = Classification((1, 2), RelType.UNCLASSIFIED, "unclassified", 0.5, 0.5, 0.0, 4, 0)
        assert not un.classified

    def test_valley_only_requires_invalid_and_no_votes(self):
        valley = Classification((1, 2), RelType.UNCLASSIFIED, "unclassified", 0.0, 0.0, 0.0, 0, 3)
        assert valley.valley_only
        voted = Classification((1, 2), RelType.UNCLASSIFIED, "unclassified", 0.5, 0.5, 0.0, 2, 3)
        assert not voted.valley_only
