import sys

import networkx as nx
import pytest
from hypothesis import given, settings

from conftest import complete, cycle, graph, small_graphs, wheel_with_chord
from src.graph_core.graph import induced_subgraph, load_graph
from src.graph_core.peeling import k_core, peel
from src.graph_core.thresholds import size_bound, t_threshold, threshold_formula, within_slack
from src.instances.generators import gen_wheel
from src.shared.errors import GraphFormatError, PreconditionError


# --- Loading ---
def test_load_simple_path():
    G = load_graph("0 1\n1 2")
    assert G.vertex_count == 3
    assert G.edge_count == 2


def test_load_drops_duplicates():
    G = load_graph("a b\nb a")
    assert G.vertex_count == 2
    assert G.edge_count == 1
    assert G.duplicate_edges == 1
    assert G.labels == ("a", "b")


def test_load_skips_comments_and_blanks():
    G = load_graph("# header\n\nx y\n  # indented comment\ny z\n")
    assert (G.vertex_count, G.edge_count) == (3, 2)


def test_load_rejects_self_loop_with_line_number():
    with pytest.raises(GraphFormatError) as e:
        load_graph("a b\nx x")
    assert e.value.line_number == 2


def test_load_rejects_malformed_line():
    with pytest.raises(GraphFormatError) as e:
        load_graph("a b c")
    assert e.value.line_number == 1


def test_edge_list_round_trip_keeps_labels():
    G = load_graph("u v\nv w\nw u\n")
    again = load_graph(G.to_edge_list(header="triangle"))
    assert again.labels == G.labels
    assert sorted(again.edges()) == sorted(G.edges())


# --- Induced Subgraphs ---
def test_induced_identity():
    C5 = cycle(5)
    H = induced_subgraph(C5, range(5))
    assert sorted(H.edges()) == sorted(C5.edges())


def test_induced_adjacent_pair():
    H = induced_subgraph(cycle(5), [2, 3])
    assert (H.vertex_count, H.edge_count) == (2, 1)
    assert H.origin == (2, 3)
    assert H.root_ids([0, 1]) == [2, 3]


def test_induced_empty():
    H = induced_subgraph(cycle(5), [])
    assert (H.vertex_count, H.edge_count) == (0, 0)


def test_induced_rejects_out_of_range():
    with pytest.raises(PreconditionError):
        induced_subgraph(cycle(5), [0, 7])


def test_induced_of_induced_keeps_root_ids():
    G = complete(6)
    inner = induced_subgraph(induced_subgraph(G, [1, 3, 4, 5]), [1, 3])
    assert inner.origin == (3, 5)


# --- k-core ---
def test_k_core_examples():
    assert k_core(cycle(6), 2) == frozenset(range(6))
    assert k_core(cycle(6), 3) == frozenset()
    assert k_core(gen_wheel(3, 6), 3) == frozenset(range(6))


def test_peel_is_lowest_id_first():
    # triangle 0-1-2 with a pendant path 2-3-4
    G = graph(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)])
    result = peel(G, 2)
    assert result.order == [4, 3]
    assert result.removal_degrees == [1, 1]
    assert result.core == frozenset({0, 1, 2})


def test_k_core_within_subset():
    G = wheel_with_chord()
    assert k_core(G, 3, within=[0, 1, 2, 3, 5]) == frozenset({0, 1, 2, 3})


@settings(max_examples=60, deadline=None)
@given(small_graphs(max_n=14))
def test_k_core_matches_networkx(G):
    reference = nx.Graph()
    reference.add_nodes_from(range(G.vertex_count))
    reference.add_edges_from(G.edges())
    for k in (2, 3):
        expected = set(nx.k_core(reference, k).nodes())
        assert k_core(G, k) == expected


def test_degree_census():
    G = wheel_with_chord()
    assert G.vertices_of_degree(3) == [2, 4, 5]
    assert G.vertices_at_most(3) == [2, 4, 5]
    assert G.vertices_at_most(4) == [1, 2, 3, 4, 5]
    assert G.vertices_at_most(0) == []


# --- Thresholds ---
def test_threshold_examples():
    assert t_threshold(3, 6) == 10
    assert t_threshold(3, 4) == 6
    assert t_threshold(4, 10) == 25


def test_threshold_k3_is_two_n_minus_two():
    assert [t_threshold(3, n) for n in range(4, 1001)] == [2 * n - 2 for n in range(4, 1001)]


def test_threshold_rejects_small_n():
    with pytest.raises(PreconditionError):
        t_threshold(3, 3)
    with pytest.raises(PreconditionError):
        t_threshold(1, 5)


def test_threshold_formula_below_range():
    # used by the peel induction at levels where t_k(n) itself is undefined
    assert threshold_formula(3, 3) == 4


def test_size_bound_examples():
    assert size_bound(2, 2**20, "main") == pytest.approx(2**20 / (4 * 243 * 20))
    assert size_bound(2, 2**20, "main") == pytest.approx(53.94, abs=0.01)
    assert size_bound(2, 100, "main") == pytest.approx(0.0155, abs=1e-4)
    assert size_bound(2, 600, "sqrt") == 3


def test_size_bound_rejects_unknown_kind():
    with pytest.raises(PreconditionError):
        size_bound(2, 10, "cubic")


def test_within_slack():
    assert within_slack(1.0, 1.0)
    assert within_slack(1.0 + 1e-12, 1.0)
    assert not within_slack(1.01, 1.0)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__]))
