import sys
import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import complete, complete_edges, cycle, cycle_edges, graph, small_graphs
from src.engines.goodsets import (
    MaximalGoodSet,
    edges_meeting,
    half_subset,
    maximal_good_sets,
    shrink_to_range,
)
from src.engines.traces import (
    Seed,
    absorb,
    materialize,
    merge_via,
    parse_trace,
    replay_trace,
    serialize_trace,
)
from src.instances.generators import gen_random_with_edges, gen_wheel
from src.models import OracleBudget
from src.oracle.brute_force import brute_good_closure
from src.shared.errors import PreconditionError, TraceRuleViolation


def two_cycles():
    return graph(10, cycle_edges(5) + cycle_edges(5, offset=5))


def path_trace(vertices):
    """Trace of a path of seeds built left to right by edge merges."""
    node = Seed(vertices[0])
    for prev, v in zip(vertices, vertices[1:]):
        node = merge_via(node, Seed(v), prev, v)
    return node


# --- Replay ---
def test_replay_single_seed():
    assert replay_trace(cycle(5), 2, Seed(0)) == frozenset({0})


def test_replay_merge_via_edge():
    trace = merge_via(Seed(0), Seed(1), 0, 1)
    assert replay_trace(cycle(5), 2, trace) == frozenset({0, 1})


def test_replay_rejects_wrong_degree_seed():
    with pytest.raises(TraceRuleViolation) as e:
        replay_trace(complete(5), 2, Seed(0))
    assert e.value.step_index == 0


def test_replay_rejects_absorb_with_too_many_outside_neighbors():
    # C5 plus vertex 5 on 1, 2, 3: vertex 5 has three neighbors outside {0}
    G = graph(6, cycle_edges(5) + [(5, 1), (5, 2), (5, 3)])
    with pytest.raises(TraceRuleViolation) as e:
        replay_trace(G, 2, absorb(Seed(0), 5))
    assert e.value.step_index == 1
    assert replay_trace(cycle(5), 2, absorb(Seed(0), 1)) == frozenset({0, 1})


def test_replay_rejects_bogus_witness():
    trace = merge_via(Seed(0), Seed(2), 0, 2)
    with pytest.raises(TraceRuleViolation) as e:
        replay_trace(cycle(5), 2, trace)
    assert e.value.step_index == 2


def test_trace_text_round_trip():
    trace = absorb(path_trace([0, 1, 2]), 3)
    lines = serialize_trace(trace)
    assert lines == ["seed 0", "seed 1", "merge 0 1 via 0 1", "seed 2", "merge 2 3 via 1 2", "absorb 3"]
    assert materialize(parse_trace(lines)) == frozenset({0, 1, 2, 3})


def test_trace_text_with_id_map():
    lines = serialize_trace(path_trace([0, 1]), id_map=lambda v: v + 10)
    assert lines == ["seed 10", "seed 11", "merge 0 1 via 10 11"]
    parsed = parse_trace(lines, id_map=lambda v: v - 10)
    assert materialize(parsed) == frozenset({0, 1})


@pytest.mark.parametrize(
    "lines",
    [
        ["grow 1"],
        ["seed 0", "seed 1"],
        ["seed 0", "merge 0 0 via 0 0"],
        ["absorb 3"],
    ],
)
def test_parse_rejects_malformed(lines):
    with pytest.raises(PreconditionError):
        parse_trace(lines)


# --- Maximal Good Sets ---
def test_cycle_is_one_good_set():
    family = maximal_good_sets(cycle(5), 2)
    assert [m.vertices for m in family] == [frozenset(range(5))]
    assert replay_trace(cycle(5), 2, family[0].trace) == frozenset(range(5))


def test_two_cycles_give_two_sets():
    family = maximal_good_sets(two_cycles(), 2)
    assert [m.vertices for m in family] == [frozenset(range(5)), frozenset(range(5, 10))]


def test_no_seeds_no_sets():
    assert maximal_good_sets(complete(5), 2) == []


def test_low_degree_vertices_glue_sets():
    two_k4 = complete_edges(4) + complete_edges(4, offset=4)
    apart = maximal_good_sets(graph(8, two_k4), 3)
    assert [m.vertices for m in apart] == [frozenset(range(4)), frozenset(range(4, 8))]

    # a pendant edge can be absorbed into either K4, so both sets merge
    G = graph(10, two_k4 + [(8, 9)])
    family = maximal_good_sets(G, 3)
    assert [m.vertices for m in family] == [frozenset(range(10))]
    assert replay_trace(G, 3, family[0].trace) == frozenset(range(10))
    assert brute_good_closure(G, 3, OracleBudget(seed=11)) == [frozenset(range(10))]


def test_isolated_vertices_never_join():
    G = graph(6, cycle_edges(5))
    family = maximal_good_sets(G, 2)
    assert all(5 not in m.vertices for m in family)


def pendant_edges_on_cycle(pairs):
    """C5 plus `pairs` disjoint edges: every extra vertex has degree 1."""
    edges = cycle_edges(5) + [(5 + 2 * i, 6 + 2 * i) for i in range(pairs)]
    return graph(5 + 2 * pairs, edges)


def timed_family(G, k):
    started = time.perf_counter()
    family = maximal_good_sets(G, k)
    return family, time.perf_counter() - started


def test_low_degree_glue_scales_linearly():
    small, small_time = timed_family(pendant_edges_on_cycle(4_000), 2)
    large, large_time = timed_family(pendant_edges_on_cycle(16_000), 2)
    assert [m.size for m in small] == [8_005]
    assert [m.size for m in large] == [32_005]
    # four times the input; a quadratic glue phase costs sixteen times as much
    assert large_time < 8 * small_time + 0.5


@settings(max_examples=40, deadline=None)
@given(small_graphs(max_n=9), st.sampled_from([2, 3]))
def test_engine_matches_brute_force_closure(G, k):
    engine = sorted((m.vertices for m in maximal_good_sets(G, k)), key=min)
    brute = brute_good_closure(G, k, OracleBudget(max_vertices=12, seed=3))
    assert engine == brute


@settings(max_examples=40, deadline=None)
@given(small_graphs(max_n=11), st.sampled_from([2, 3]), st.integers(min_value=0, max_value=2**32))
def test_family_independent_of_processing_order(G, k, order_seed):
    baseline = [m.vertices for m in maximal_good_sets(G, k)]
    shuffled = [m.vertices for m in maximal_good_sets(G, k, order_seed=order_seed)]
    assert shuffled == baseline


@settings(max_examples=60, deadline=None)
@given(
    st.integers(min_value=1, max_value=30),
    st.floats(min_value=0.0, max_value=1.0),
    st.sampled_from([2, 3, 4]),
    st.integers(min_value=0, max_value=2**32),
    st.integers(min_value=0, max_value=2**32),
)
def test_family_independent_of_order_up_to_thirty(n, density, k, graph_seed, order_seed):
    G = gen_random_with_edges(n, int(density * (n * (n - 1) // 2)), graph_seed)
    baseline = [m.vertices for m in maximal_good_sets(G, k)]
    assert [m.vertices for m in maximal_good_sets(G, k, order_seed=order_seed)] == baseline


@settings(max_examples=40, deadline=None)
@given(small_graphs(max_n=11), st.sampled_from([2, 3]))
def test_every_trace_replays(G, k):
    for m in maximal_good_sets(G, k):
        assert replay_trace(G, k, m.trace) == m.vertices
        assert replay_trace(G, k, parse_trace(serialize_trace(m.trace))) == m.vertices


# --- Edge Counts ---
def test_edges_meeting_examples():
    W = gen_wheel(3, 6)
    assert edges_meeting(W, frozenset(range(6))) == 10
    assert 10 <= (3 - 1) * 6 + 1
    assert edges_meeting(W, frozenset({2})) == 3
    assert edges_meeting(W, frozenset()) == 0


# --- Halving ---
def test_half_drops_last_absorb():
    m = MaximalGoodSet(frozenset({0, 1}), absorb(Seed(0), 1))
    vertices, node = half_subset(cycle(5), 2, m)
    assert vertices == frozenset({0})
    assert node == Seed(0)


def test_half_keeps_larger_merge_side():
    left = path_trace([0, 1, 2])
    right = path_trace([3, 4])
    m = MaximalGoodSet(frozenset(range(5)), merge_via(left, right, 2, 3))
    vertices, _ = half_subset(cycle(8), 2, m)
    assert vertices == frozenset({0, 1, 2})


def test_half_tie_keeps_side_with_smaller_id():
    m = MaximalGoodSet(frozenset({4, 5}), merge_via(Seed(5), Seed(4), 5, 4))
    vertices, _ = half_subset(cycle(8), 2, m)
    assert vertices == frozenset({4})


def test_half_rejects_singleton():
    with pytest.raises(PreconditionError):
        half_subset(cycle(5), 2, MaximalGoodSet(frozenset({0}), Seed(0)))


def test_shrink_into_window():
    C12 = cycle(12)
    m = MaximalGoodSet(frozenset(range(10)), path_trace(list(range(10))))
    shrunk = shrink_to_range(C12, 2, m, 3, 5)
    assert 3 <= len(shrunk) <= 5
    assert shrunk <= m.vertices


def test_shrink_inside_window_is_identity():
    m = MaximalGoodSet(frozenset(range(4)), path_trace([0, 1, 2, 3]))
    assert shrink_to_range(cycle(12), 2, m, 3, 5) == frozenset(range(4))


def test_shrink_rejects_small_set():
    m = MaximalGoodSet(frozenset({0, 1}), path_trace([0, 1]))
    with pytest.raises(PreconditionError):
        shrink_to_range(cycle(12), 2, m, 3, 5)


def test_shrink_rejects_window_halving_can_skip():
    # 4 halves to 2, and no integer size in [2.3, 3.6] is reachable from 4
    m = MaximalGoodSet(frozenset(range(4)), merge_via(path_trace([0, 1]), path_trace([2, 3]), 1, 2))
    with pytest.raises(PreconditionError, match="too narrow"):
        shrink_to_range(cycle(8), 2, m, 2.3, 3.6)


def test_shrink_accepts_tight_window():
    m = MaximalGoodSet(frozenset(range(4)), merge_via(path_trace([0, 1]), path_trace([2, 3]), 1, 2))
    assert shrink_to_range(cycle(8), 2, m, 2, 2) == frozenset({0, 1})


if __name__ == "__main__":
    sys.exit(pytest.main([__file__]))
