"""
Tests for maximum bipartite matching and the Hall diagnostics.
"""

import itertools

import networkx as nx
import pytest

from minorforge.errors import InvalidParameterError
from minorforge.matching import (
    SPARSE_MATCHING_MIN_EDGES,
    BipartiteGraph,
    Matching,
    hall_report,
    hall_violator,
    maximum_matching,
    minimum_vertex_cover,
    neighbourhood,
    uncovered_left,
)
from minorforge.samplers import RandomSource


def _random_bipartite(src: RandomSource) -> BipartiteGraph:
    left = int(src.rng.integers(1, 13))
    right = int(src.rng.integers(1, 13))
    density = float(src.rng.uniform(0.05, 0.6))
    edges = [
        (a, b)
        for a in range(left)
        for b in range(right)
        if src.rng.random() < density
    ]
    return BipartiteGraph.from_edges(left, right, edges)


def _networkx_matching_size(b: BipartiteGraph) -> int:
    g = nx.Graph()
    lefts = [("L", a) for a in range(b.left_count)]
    g.add_nodes_from(lefts)
    g.add_nodes_from(("R", c) for c in range(b.right_count))
    for a, rights in enumerate(b.adjacency):
        g.add_edges_from((("L", a), ("R", c)) for c in rights)
    matching = nx.bipartite.hopcroft_karp_matching(g, top_nodes=lefts)
    return len(matching) // 2


def _brute_force_matching_size(b: BipartiteGraph) -> int:
    edges = [(a, c) for a, rights in enumerate(b.adjacency) for c in rights]
    for size in range(min(b.left_count, b.right_count), 0, -1):
        for chosen in itertools.combinations(edges, size):
            lefts = {a for a, _ in chosen}
            rights = {c for _, c in chosen}
            if len(lefts) == size and len(rights) == size:
                return size
    return 0


class TestMaximumMatching:
    """Test cases for maximum_matching."""

    def setup_method(self) -> None:
        """Set up test fixtures."""
        self.src = RandomSource(2024)

    def test_complete_three_by_three(self) -> None:
        """K_{3,3} has a perfect matching."""
        b = BipartiteGraph.from_edges(
            3, 3, itertools.product(range(3), range(3))
        )
        m = maximum_matching(b)
        assert len(m) == 3
        assert m.is_valid_for(b)

    def test_star(self) -> None:
        """Five left vertices sharing one right vertex."""
        b = BipartiteGraph.from_edges(5, 1, [(a, 0) for a in range(5)])
        assert len(maximum_matching(b)) == 1

    def test_empty_graph(self) -> None:
        """No edges, no pairs."""
        b = BipartiteGraph.from_edges(4, 3, [])
        m = maximum_matching(b)
        assert len(m) == 0
        assert m.right_of(0) == -1

    def test_augmenting_path_needed(self) -> None:
        """A greedy first choice must be undone."""
        b = BipartiteGraph(2, 2, ((0, 1), (0,)))
        m = maximum_matching(b)
        assert m.sorted_pairs() == [(0, 1), (1, 0)]

    def test_agrees_with_networkx(self) -> None:
        """Sizes match networkx on 200 random graphs up to 12 + 12."""
        for _ in range(200):
            b = _random_bipartite(self.src)
            m = maximum_matching(b)
            assert m.is_valid_for(b)
            assert len(m) == _networkx_matching_size(b)

    def test_agrees_with_brute_force(self) -> None:
        """Sizes match exhaustive search on small graphs."""
        for _ in range(60):
            left = int(self.src.rng.integers(1, 6))
            right = int(self.src.rng.integers(1, 6))
            edges = [
                (a, c)
                for a in range(left)
                for c in range(right)
                if self.src.rng.random() < 0.4
            ]
            b = BipartiteGraph.from_edges(left, right, edges)
            assert len(maximum_matching(b)) == _brute_force_matching_size(b)

    def test_deterministic(self) -> None:
        """Repeated calls return identical matchings."""
        b = _random_bipartite(self.src)
        assert maximum_matching(b) == maximum_matching(b)

    def test_validation(self) -> None:
        """Malformed adjacency is rejected."""
        with pytest.raises(InvalidParameterError):
            BipartiteGraph(2, 2, ((0,),))
        with pytest.raises(InvalidParameterError):
            BipartiteGraph(1, 2, ((0, 0),))
        with pytest.raises(InvalidParameterError):
            BipartiteGraph(1, 2, ((2,),))
        with pytest.raises(InvalidParameterError):
            BipartiteGraph.from_edges(1, 1, [(1, 0)])

    def test_is_valid_for_rejects_shared_right(self) -> None:
        """Two lefts on one right is not a matching."""
        b = BipartiteGraph.from_edges(2, 1, [(0, 0), (1, 0)])
        assert not Matching({0: 0, 1: 0}).is_valid_for(b)

    def test_from_edges_keeps_first_order(self) -> None:
        """Duplicates drop out; each list keeps first-seen order."""
        b = BipartiteGraph.from_edges(3, 3, [(0, 2), (2, 0), (0, 1), (0, 2)])
        assert b.adjacency == ((2, 1), (), (0,))
        assert b.edge_count == 3

    def test_sparse_backend_agrees(self) -> None:
        """scipy and the pure search find matchings of one size."""
        for _ in range(200):
            b = _random_bipartite(self.src)
            sparse = maximum_matching(b, sparse=True)
            assert sparse.is_valid_for(b)
            assert len(sparse) == len(maximum_matching(b, sparse=False))
        no_rights = BipartiteGraph.from_edges(3, 0, [])
        assert len(maximum_matching(no_rights, sparse=True)) == 0

    def test_large_graph(self) -> None:
        """Above the edge threshold the matching is still maximum and stable."""
        rng = self.src.rng
        left, right = 6000, 5000
        edges = zip(
            rng.integers(0, left, 30_000).tolist(),
            rng.integers(0, right, 30_000).tolist(),
        )
        b = BipartiteGraph.from_edges(left, right, edges)
        assert b.edge_count >= SPARSE_MATCHING_MIN_EDGES
        m = maximum_matching(b)
        assert m.is_valid_for(b)
        assert len(m) == _networkx_matching_size(b)
        assert m == maximum_matching(b)
        assert b.to_csr().nnz == b.edge_count


class TestKoenigAndHall:
    """Test cases for covers and Hall violators."""

    def setup_method(self) -> None:
        """Set up test fixtures."""
        self.src = RandomSource(77)

    def test_cover_size_equals_matching_size(self) -> None:
        """Koenig duality on random instances."""
        for _ in range(100):
            b = _random_bipartite(self.src)
            m = maximum_matching(b)
            left_cover, right_cover = minimum_vertex_cover(b, m)
            assert len(left_cover) + len(right_cover) == len(m)
            for a, rights in enumerate(b.adjacency):
                for c in rights:
                    assert a in left_cover or c in right_cover

    def test_perfect_matching_has_no_violator(self) -> None:
        """Hall holds when the left side is covered."""
        b = BipartiteGraph.from_edges(3, 3, [(0, 0), (1, 1), (2, 2), (0, 1)])
        m = maximum_matching(b)
        assert hall_violator(b, m) == set()
        assert uncovered_left(b, m) == set()

    def test_empty_matching_on_isolated_lefts(self) -> None:
        """All four edgeless left vertices violate Hall together."""
        b = BipartiteGraph.from_edges(4, 2, [])
        m = maximum_matching(b)
        assert uncovered_left(b, m) == {0, 1, 2, 3}
        assert hall_violator(b, m) == {0, 1, 2, 3}

    def test_violator_contains_isolated_left(self) -> None:
        """An isolated left vertex is always in the violator."""
        b = BipartiteGraph.from_edges(3, 2, [(0, 0), (1, 1)])
        m = maximum_matching(b)
        violator = hall_violator(b, m)
        assert 2 in violator
        assert len(neighbourhood(b, violator)) < len(violator)

    def test_violator_is_deficient_on_random_graphs(self) -> None:
        """|N(W)| < |W| whenever the matching misses a left vertex."""
        for _ in range(100):
            b = _random_bipartite(self.src)
            m = maximum_matching(b)
            violator = hall_violator(b, m)
            if len(m) < b.left_count:
                assert len(neighbourhood(b, violator)) < len(violator)
            else:
                assert violator == set()

    def test_hall_report(self) -> None:
        """Degree statistics and the degree condition."""
        b = BipartiteGraph.from_edges(
            2, 3, [(0, 0), (0, 1), (1, 1), (1, 2)]
        )
        report = hall_report(b, d=2)
        assert report.min_left_degree == 2
        assert report.max_right_degree == 2
        assert report.low_degree_right == 2
        assert report.degree_condition
        star = BipartiteGraph.from_edges(3, 1, [(a, 0) for a in range(3)])
        assert not hall_report(star, d=1).degree_condition
