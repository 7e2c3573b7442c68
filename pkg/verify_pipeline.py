import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import complete, complete_edges, cycle, cycle_edges, graph, star_with_ears, wheel_with_chord
from src.engines.traces import materialize, parse_trace
from src.graph_core.thresholds import t_threshold
from src.instances.generators import gen_extremal_plus_one, gen_random_with_edges
from src.models import ExtractionResult, OracleBudget
from src.oracle.brute_force import min_order_mindeg_subgraph
from src.pipeline.extraction import extract, greedy_chain, vertex_digest
from src.pipeline.verification import verify_certificate
from src.shared.errors import HypothesisViolation, PreconditionError


def failed_checks(G, k, result):
    return [c.name for c in verify_certificate(G, k, result).failures()]


def k6_with_ears():
    """K6 plus two degree-2 ears on 0-1 and 2-3."""
    return graph(8, complete_edges(6) + [(6, 0), (6, 1), (7, 2), (7, 3)])


# --- Hypothesis ---
def test_rejects_graph_at_threshold():
    with pytest.raises(HypothesisViolation):
        extract(complete(4), 3)


def test_rejects_too_few_vertices():
    with pytest.raises(HypothesisViolation):
        extract(complete(3), 3)


def test_rejects_k_below_two():
    with pytest.raises(PreconditionError):
        extract(complete(5), 1)


# --- Branches ---
def test_cycle_with_chord():
    G = gen_extremal_plus_one(2, 12, seed=5)
    result = extract(G, 2)
    assert result.branch == "large-good-set"
    assert result.order < 12
    assert G.induced_min_degree(result.subgraph) >= 2
    assert failed_checks(G, 2, result) == []

    u, v = [x for x in range(12) if G.degree(x) == 3]
    shortest = min(v - u, 12 - (v - u)) + 1
    best = min_order_mindeg_subgraph(G, 2, OracleBudget(max_vertices=12))
    assert len(best) == shortest
    assert {u, v} <= best
    assert result.order >= len(best)


def test_wheel_with_chord():
    G = wheel_with_chord()
    result = extract(G, 3)
    assert result.branch == "large-good-set"
    assert result.subgraph == [0, 1, 2, 3]
    assert len(result.removed) == 1 and len(result.removed[0]) == 1
    assert result.guarantee.expression == "n/(2k+2)"
    assert result.guarantee.value == pytest.approx(0.75)
    assert len(min_order_mindeg_subgraph(G, 3, OracleBudget())) == 4
    assert failed_checks(G, 3, result) == []


def test_peeled_only():
    # K5 plus a pendant path: the peel alone removes enough
    G = graph(7, complete_edges(5) + [(4, 5), (5, 6)])
    result = extract(G, 2)
    assert result.branch == "peeled-only"
    assert result.subgraph == [0, 1, 2, 3, 4]
    assert result.removed == []
    assert failed_checks(G, 2, result) == []


def test_few_degree_k_vertices_fall_back():
    G = complete(6)
    result = extract(G, 2)
    assert result.branch == "lemma4-fallback"
    assert result.guarantee is None
    assert result.subgraph == list(range(6))
    assert any(e.stage == "branch" and "lemma4_bound" in e.details for e in result.stats)
    assert failed_checks(G, 2, result) == []


def test_main_branch_without_cover():
    G = k6_with_ears()
    result = extract(G, 2)
    assert result.branch == "main"
    assert result.subgraph == list(range(6))
    assert result.certificates.collection == [[6], [7]]
    assert result.certificates.cover is None
    assert result.certificates.independent_set == [0, 1]
    assert result.removed == [[6], [7]]
    assert failed_checks(G, 2, result) == []


def test_main_branch_with_cover():
    G = star_with_ears()
    result = extract(G, 2)
    assert result.branch == "main"
    assert result.certificates.collection == [[5], [6], [7], [8]]
    assert result.certificates.cover.S == [3, 4]
    assert result.certificates.cover.phi_value == 2
    assert result.certificates.independent_set == [0, 1, 3]
    assert result.removed == [[5], [6], [8]]
    assert result.subgraph == [0, 3, 4, 7]
    assert result.guarantee.expression == "alpha*n/(2(k+1)^4*log2(n))"
    assert failed_checks(G, 2, result) == []


def test_greedy_chain_strategy():
    G = k6_with_ears()
    result = extract(G, 2, strategy="greedy-chain")
    assert result.strategy == "greedy-chain"
    assert result.branch == "greedy-chain"
    assert result.guarantee is None
    assert result.subgraph == list(range(6))
    assert failed_checks(G, 2, result) == []


# --- Greedy Chain ---
def test_chain_removes_cycle_component():
    G = graph(9, cycle_edges(5) + complete_edges(4, offset=5))
    result = greedy_chain(G, 2)
    assert result.subgraph == [5, 6, 7, 8]
    assert result.removed == [[0, 1, 2, 3, 4]]
    assert failed_checks(G, 2, result) == []


def test_chain_keeps_graph_without_seeds():
    result = greedy_chain(complete(5), 2)
    assert result.subgraph == list(range(5))
    assert result.removed == []


def test_chain_never_empties_the_graph():
    result = greedy_chain(cycle(5), 2)
    assert result.subgraph == list(range(5))
    assert result.removed == []


def test_chain_needs_min_degree():
    with pytest.raises(PreconditionError):
        greedy_chain(graph(3, [(0, 1), (1, 2)]), 2)


# --- Reports ---
def test_report_round_trip_and_determinism():
    G = star_with_ears()
    first = extract(G, 2)
    second = extract(G, 2)
    assert first.to_report() == second.to_report()
    again = ExtractionResult.from_report(first.to_report())
    assert again == first
    assert again.digests["subgraph"] == vertex_digest([0, 3, 4, 7])


def test_traces_are_in_input_ids():
    # isolated vertex 0 is peeled, so core ids and input ids differ by one
    G = graph(10, cycle_edges(5, offset=1) + complete_edges(4, offset=6))
    result = extract(G, 2, strategy="greedy-chain")
    assert result.subgraph == [6, 7, 8, 9]
    assert result.removed == [[1, 2, 3, 4, 5]]
    assert materialize(parse_trace(result.certificates.traces[0])) == frozenset({1, 2, 3, 4, 5})
    assert failed_checks(G, 2, result) == []


# --- Verification ---
def test_verify_rejects_low_degree_vertex():
    G = wheel_with_chord()
    result = extract(G, 3)
    tampered = result.model_copy(update={"subgraph": sorted(result.subgraph + [5])})
    assert "output minimum degree" in failed_checks(G, 3, tampered)


def test_verify_rejects_adjacent_removed_sets():
    G = wheel_with_chord()
    result = extract(G, 3)
    certificates = result.certificates.model_copy(update={"traces": [["seed 4"], ["seed 5"]]})
    tampered = result.model_copy(update={"removed": [[4], [5]], "certificates": certificates})
    assert "good sets non-adjacent" in failed_checks(G, 3, tampered)


def test_verify_rejects_forged_trace():
    G = wheel_with_chord()
    result = extract(G, 3)
    certificates = result.certificates.model_copy(update={"traces": [["seed 0"]]})
    tampered = result.model_copy(update={"certificates": certificates})
    assert "trace 0 replays" in failed_checks(G, 3, tampered)


def test_verify_rejects_wrong_guarantee():
    G = wheel_with_chord()
    result = extract(G, 3)
    guarantee = result.guarantee.model_copy(update={"value": 2.5})
    tampered = result.model_copy(update={"guarantee": guarantee})
    failures = failed_checks(G, 3, tampered)
    assert "guarantee arithmetic" in failures
    assert "guarantee met" in failures


def test_verify_rejects_other_graph():
    result = extract(wheel_with_chord(), 3)
    assert "input matches" in failed_checks(complete(6), 3, result)


# --- Soundness ---
@st.composite
def hypothesis_graphs(draw):
    k = draw(st.sampled_from([2, 3, 4]))
    n = draw(st.integers(min_value=k + 2, max_value=13))
    room = n * (n - 1) // 2 - (t_threshold(k, n) + 1)
    extra = draw(st.integers(min_value=0, max_value=min(room, 6)))
    seed = draw(st.integers(min_value=0, max_value=2**32))
    return k, gen_random_with_edges(n, t_threshold(k, n) + 1 + extra, seed)


@settings(max_examples=60, deadline=None)
@given(hypothesis_graphs())
def test_every_extraction_verifies(case):
    k, G = case
    result = extract(G, k)
    assert G.induced_min_degree(result.subgraph) >= k
    assert failed_checks(G, k, result) == []
    best = min_order_mindeg_subgraph(G, k, OracleBudget(max_vertices=13))
    assert result.order >= len(best)


@settings(max_examples=30, deadline=None)
@given(hypothesis_graphs())
def test_greedy_chain_strategy_verifies(case):
    k, G = case
    result = extract(G, k, strategy="greedy-chain")
    assert failed_checks(G, k, result) == []


if __name__ == "__main__":
    sys.exit(pytest.main([__file__]))
