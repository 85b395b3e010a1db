import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loopcurrents.errors import CapExceededError, GraphStructureError
from loopcurrents.graphs import (
    CYCLE_DIMENSION_CAP,
    Graph,
    Marks,
    complete_graph,
    component_count,
    component_labels,
    counter_family,
    cycle_dimension,
    cycle_space_basis,
    cyclic_edges,
    even_subgraph_count,
    even_subgraphs,
    generalized_theta,
    graph_from_json,
    graph_to_json,
    is_connected,
    segment_edge_ranges,
)

from oracles import bfs_connected, brute_cyclic_edges, brute_even_subgraphs, degrees


def seg_mask(lengths, *segments):
    ranges = segment_edge_ranges(lengths)
    mask = 0
    for s in segments:
        for e in ranges[s]:
            mask |= 1 << e
    return mask


SMALL_GRAPHS = [
    Graph(1, ()),
    Graph(2, ((0, 1),)),
    Graph(2, ((0, 1), (0, 1))),              # parallel pair
    Graph(2, ((0, 1), (0, 1), (1, 1))),      # parallel pair plus self-loop
    generalized_theta([1, 1, 1]),
    generalized_theta([2, 3, 2]),
    counter_family(2, 2),
    complete_graph(4),
    Graph(5, ((0, 1), (1, 2), (2, 0), (3, 4))),  # triangle plus far edge
    Graph(  # 12 edges, multi-edges and a self-loop, two components
        6,
        (
            (0, 1), (1, 2), (2, 0), (0, 1), (2, 3), (3, 0),
            (1, 3), (4, 5), (4, 5), (5, 5), (0, 2), (3, 3),
        ),
    ),
]


class TestConstruction:
    def test_theta_1_1_1_is_three_parallel_edges(self):
        g = generalized_theta([1, 1, 1])
        assert g.vertex_count == 2
        assert g.edges == ((0, 1), (0, 1), (0, 1))

    def test_theta_2_3_2_counts(self):
        g = generalized_theta([2, 3, 2])
        assert (g.vertex_count, g.edge_count) == (6, 7)

    def test_counter_marks_sit_on_inner_midpoints(self):
        g = counter_family(2, 2)
        assert (g.vertex_count, g.edge_count) == (6, 8)
        assert g.marks is not None
        ranges = segment_edge_ranges([2, 2, 2, 2])
        # the mark is the shared endpoint of the two edges of its m-path
        for mark, seg in ((g.marks.a, 2), (g.marks.b, 3)):
            touching = [i for i in ranges[seg] if mark in g.edges[i]]
            assert len(touching) == 2

    def test_marks_require_even_segment(self):
        with pytest.raises(GraphStructureError):
            generalized_theta([3, 2], marked_segments=(0, 1))

    def test_needs_two_segments(self):
        with pytest.raises(GraphStructureError):
            generalized_theta([4])

    def test_positive_lengths(self):
        with pytest.raises(GraphStructureError):
            generalized_theta([2, 0, 2])

    def test_endpoint_validation(self):
        with pytest.raises(GraphStructureError):
            Graph(2, ((0, 2),))

    def test_json_roundtrip_preserves_edge_order(self):
        g = Graph(4, ((3, 1), (0, 1), (1, 2), (0, 1)), Marks(0, 2))
        back = graph_from_json(graph_to_json(g))
        assert back == g
        assert back.edges[0] == (3, 1)


class TestConnectivity:
    def test_empty_configuration_disconnects(self):
        g = complete_graph(4)
        assert not is_connected(g, 0, 0, 3)
        assert is_connected(g, 0, 2, 2)

    def test_full_configuration_connects(self):
        g = complete_graph(4)
        for u in range(4):
            for v in range(4):
                assert is_connected(g, g.full_mask, u, v)

    def test_counter_both_inner_paths_connect_marks(self):
        g = counter_family(2, 2)
        mask = seg_mask([2, 2, 2, 2], 2, 3)
        assert is_connected(g, mask, g.marks.a, g.marks.b)

    def test_counter_upper_n_plus_upper_m_does_not_connect_marks(self):
        g = counter_family(2, 2)
        mask = seg_mask([2, 2, 2, 2], 0, 2)
        assert not is_connected(g, mask, g.marks.a, g.marks.b)

    def test_vertex_range_checked(self):
        g = complete_graph(3)
        with pytest.raises(GraphStructureError):
            is_connected(g, 0, 0, 5)

    def test_against_bfs_oracle(self):
        rng = random.Random(7)
        for g in SMALL_GRAPHS:
            for _ in range(20):
                mask = rng.randrange(1 << g.edge_count)
                u = rng.randrange(g.vertex_count)
                v = rng.randrange(g.vertex_count)
                assert is_connected(g, mask, u, v) == bfs_connected(g, mask, u, v)

    def test_component_labels_match_connectivity(self):
        g = counter_family(2, 2)
        rng = random.Random(3)
        for _ in range(25):
            mask = rng.randrange(1 << g.edge_count)
            labels = component_labels(g, mask)
            for u in range(g.vertex_count):
                for v in range(g.vertex_count):
                    assert (labels[u] == labels[v]) == is_connected(g, mask, u, v)
            assert len(set(labels)) == component_count(g, mask)


class TestCycleSpace:
    def test_tree_has_empty_basis(self):
        tree = Graph(4, ((0, 1), (1, 2), (1, 3)))
        assert cycle_space_basis(tree).dimension == 0
        assert list(even_subgraphs(tree)) == [0]

    def test_theta_dimension(self):
        assert cycle_space_basis(generalized_theta([1, 1, 1])).dimension == 2

    def test_counter_has_eight_even_subgraphs(self):
        g = counter_family(2, 2)
        assert cycle_space_basis(g).dimension == 3
        assert even_subgraph_count(g) == 8

    def test_dimension_formula_with_isolated_vertices(self):
        g = Graph(6, ((0, 1), (1, 2), (2, 0)))
        assert cycle_dimension(g) == 3 - 6 + 4
        assert even_subgraph_count(g) == 2

    def test_basis_elements_are_even_and_independent(self):
        for g in SMALL_GRAPHS:
            basis = cycle_space_basis(g)
            for b in basis.elements:
                assert all(d % 2 == 0 for d in degrees(g, b))
            span = set(even_subgraphs(g))
            assert len(span) == 1 << basis.dimension

    def test_even_subgraphs_match_degree_filter(self):
        for g in SMALL_GRAPHS:
            assert sorted(even_subgraphs(g)) == brute_even_subgraphs(g)

    def test_theta_even_subgraph_weights(self):
        n, m, l = 2, 3, 2
        g = generalized_theta([n, m, l])
        sizes = sorted(mask.bit_count() for mask in even_subgraphs(g))
        assert sizes == sorted([0, n + m, m + l, n + l])

    def test_counter_even_subgraph_sizes(self):
        n, m = 2, 2
        g = counter_family(n, m)
        sizes = sorted(mask.bit_count() for mask in even_subgraphs(g))
        assert sizes == sorted([0, 2 * n, 2 * m] + [n + m] * 4 + [2 * n + 2 * m])

    def test_cap_enforced(self):
        g = Graph(2, tuple((0, 1) for _ in range(23)))  # dimension 22
        with pytest.raises(CapExceededError):
            list(even_subgraphs(g, cap=CYCLE_DIMENSION_CAP))

    def test_even_count_formula_on_subconfigurations(self):
        rng = random.Random(11)
        for g in SMALL_GRAPHS:
            for _ in range(15):
                omega = rng.randrange(1 << g.edge_count)
                expected = sum(
                    1
                    for sub in _submasks(omega)
                    if all(d % 2 == 0 for d in degrees(g, sub))
                )
                assert even_subgraph_count(g, omega) == expected

    @settings(max_examples=60, deadline=None)
    @given(data=st.data())
    def test_symmetric_difference_closure(self, data):
        g = data.draw(st.sampled_from(SMALL_GRAPHS))
        evens = brute_even_subgraphs(g)
        a = data.draw(st.sampled_from(evens))
        b = data.draw(st.sampled_from(evens))
        assert all(d % 2 == 0 for d in degrees(g, a ^ b))


def _submasks(omega):
    sub = omega
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & omega


class TestCyclicEdges:
    def test_path_has_no_cyclic_edges(self):
        g = Graph(4, ((0, 1), (1, 2), (2, 3)))
        assert cyclic_edges(g, 0b111) == 0

    def test_triangle_plus_pendant(self):
        g = Graph(4, ((0, 1), (1, 2), (2, 0), (0, 3)))
        assert cyclic_edges(g, 0b1111) == 0b0111

    def test_even_configurations_are_fully_cyclic(self):
        for g in SMALL_GRAPHS:
            for omega in brute_even_subgraphs(g):
                if omega:
                    assert cyclic_edges(g, omega) == omega

    def test_self_loops_and_parallel_pairs_are_cyclic(self):
        g = Graph(2, ((0, 1), (0, 1), (1, 1)))
        assert cyclic_edges(g, 0b111) == 0b111
        assert cyclic_edges(g, 0b101) == 0b100  # lone edge is a bridge, loop cyclic

    def test_against_even_subgraph_oracle(self):
        rng = random.Random(5)
        for g in SMALL_GRAPHS:
            for _ in range(20):
                omega = rng.randrange(1 << g.edge_count)
                assert cyclic_edges(g, omega) == brute_cyclic_edges(g, omega)
