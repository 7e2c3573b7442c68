import math
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graph
from src.engines.conflict import (
    ConflictGraph,
    NeighborFamilies,
    build_collection,
    build_conflict_graph,
    check_consumer_condition,
    greedy_independent_set,
    neighbor_families,
)
from src.engines.goodsets import MaximalGoodSet
from src.engines.traces import Seed
from src.shared.errors import PreconditionError


def sets_of_sizes(sizes):
    """Disjoint consecutive blocks; the traces only matter for replay, not for bucketing."""
    result, start = [], 0
    for size in sizes:
        result.append(MaximalGoodSet(frozenset(range(start, start + size)), Seed(start)))
        start += size
    return result


# --- Collection ---
def test_collection_picks_heaviest_bucket():
    coll = build_collection(sets_of_sizes([1, 1, 1, 6, 6]), 20, 2)
    assert coll.bucket_index == 3
    assert [m.size for m in coll.members] == [6, 6]
    assert coll.total_size == 12
    assert coll.dropped is None


def test_collection_drops_largest_when_total_reaches_n():
    coll = build_collection(sets_of_sizes([5, 5]), 10, 2)
    assert coll.bucket_index == 3
    assert coll.total_size == 5
    # tie on size: the member with the larger smallest vertex goes
    assert coll.dropped.min_vertex == 5
    assert [m.min_vertex for m in coll.members] == [0]


def test_collection_of_singletons():
    coll = build_collection(sets_of_sizes([1] * 100), 600, 2)
    assert coll.bucket_index == 1
    assert coll.total_size == 100
    assert len(coll) == 100


def test_collection_ties_go_to_smaller_bucket():
    # sizes 2 sit in buckets 1 and 2; both totals are equal
    coll = build_collection(sets_of_sizes([2, 2, 2]), 30, 2)
    assert coll.bucket_index == 1


def test_collection_rejects_sparse_family():
    with pytest.raises(PreconditionError, match="fallback"):
        build_collection(sets_of_sizes([1]), 60, 2)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(min_value=1, max_value=40), min_size=1, max_size=30), st.sampled_from([2, 3, 4]))
def test_collection_bounds(sizes, k):
    n = 2 * sum(sizes)
    coll = build_collection(sets_of_sizes(sizes), n, k)
    member_sizes = [m.size for m in coll.members]
    assert coll.total_size == sum(member_sizes) < n
    assert coll.total_size >= (n / (2 * k + 2)) / math.log2(n) - 1e-9
    assert max(member_sizes) <= 2 * min(member_sizes)


# --- Families ---
def members_graph():
    """Members {0}, {1}, {2}, {3}, {4}; vertex 5 sees 0 and 2, vertex 6 sees all five, vertex 7 sees none."""
    edges = [(5, 0), (5, 2)] + [(6, i) for i in range(5)] + [(7, 5)]
    return graph(8, edges), [frozenset({i}) for i in range(5)]


def test_family_of_two_members():
    G, members = members_graph()
    fams = neighbor_families(G, members, {5}, 3)
    assert fams.families == {5: (0, 2)}
    assert not fams.truncated


def test_family_truncated_to_k_plus_one():
    G, members = members_graph()
    fams = neighbor_families(G, members, {6}, 3)
    assert fams.families[6] == (0, 1, 2, 3)
    assert fams.truncated == frozenset({6})


def test_family_empty():
    G, members = members_graph()
    assert neighbor_families(G, members, {7}, 3).families == {7: ()}


def test_family_accepts_collection():
    G, _ = members_graph()
    coll = build_collection(sets_of_sizes([1] * 5), 8, 2)
    fams = neighbor_families(G, coll, {5}, 2)
    assert fams.families == {5: (0, 2)}


def test_family_rejects_s_inside_member():
    G, members = members_graph()
    with pytest.raises(PreconditionError):
        neighbor_families(G, members, {0}, 3)


# --- Conflict Graph ---
def test_conflict_graph_without_s():
    A = build_conflict_graph(4, NeighborFamilies(families={}))
    assert A.vertex_count == 4
    assert A.edges == frozenset()


def test_conflict_graph_single_clique():
    A = build_conflict_graph(3, NeighborFamilies(families={9: (0, 1, 2)}))
    assert A.edges == frozenset({(0, 1), (0, 2), (1, 2)})


def test_conflict_graph_clique_union():
    A = build_conflict_graph(3, NeighborFamilies(families={8: (0, 1), 9: (1, 2)}))
    assert A.edges == frozenset({(0, 1), (1, 2)})


# --- Independent Set ---
def test_independent_set_edgeless():
    assert greedy_independent_set(ConflictGraph(6, frozenset())) == list(range(6))


def test_independent_set_triangle():
    assert greedy_independent_set(ConflictGraph(3, frozenset({(0, 1), (0, 2), (1, 2)}))) == [0]


def test_independent_set_star():
    star = ConflictGraph(5, frozenset({(0, 1), (0, 2), (0, 3), (0, 4)}))
    chosen = greedy_independent_set(star)
    assert chosen == [1, 2, 3, 4]
    assert len(chosen) >= 5 / (2 * 0.8 + 1)


def test_independent_set_path():
    path = ConflictGraph(4, frozenset({(0, 1), (1, 2), (2, 3)}))
    assert greedy_independent_set(path) == [0, 2]


@st.composite
def conflict_graphs(draw):
    m = draw(st.integers(min_value=0, max_value=14))
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    edges = draw(st.sets(st.sampled_from(pairs))) if pairs else set()
    return ConflictGraph(m, frozenset(edges))


@settings(max_examples=80, deadline=None)
@given(conflict_graphs())
def test_independent_set_is_independent_and_large(A):
    chosen = greedy_independent_set(A)
    picked = set(chosen)
    assert all(not (i in picked and j in picked) for i, j in A.edges)
    m, e = A.vertex_count, len(A.edges)
    assert len(chosen) * (2 * e + m) >= m * m


def test_consumer_condition():
    fams = NeighborFamilies(families={5: (0, 2), 6: (1, 3)})
    assert check_consumer_condition(fams, [0, 1]) is None
    assert check_consumer_condition(fams, [0, 2]) == 5


if __name__ == "__main__":
    sys.exit(pytest.main([__file__]))
