import itertools
from typing import Iterable, List, Tuple

import hypothesis.strategies as st
import pytest

from src.graph_core.graph import Graph
from src.models import OracleBudget


# --- Builders ---
def cycle_edges(n: int, offset: int = 0) -> List[Tuple[int, int]]:
    return [(offset + i, offset + (i + 1) % n) for i in range(n)]


def complete_edges(n: int, offset: int = 0) -> List[Tuple[int, int]]:
    return [(offset + u, offset + v) for u, v in itertools.combinations(range(n), 2)]


def graph(n: int, edges: Iterable[Tuple[int, int]]) -> Graph:
    return Graph.from_edges(n, edges)


def cycle(n: int) -> Graph:
    return graph(n, cycle_edges(n))


def complete(n: int) -> Graph:
    return graph(n, complete_edges(n))


def path(n: int) -> Graph:
    return graph(n, [(i, i + 1) for i in range(n - 1)])


def wheel_with_chord() -> Graph:
    """W(1,6): hub 0, rim 1..5, plus the rim chord 1-3."""
    rim = [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]
    return graph(6, [(0, v) for v in range(1, 6)] + rim + [(1, 3)])


def star_with_ears() -> Graph:
    """
    Star 0-{1,2,3,4} with four degree-2 ears 5..8 on the leaf pairs
    (1,2), (2,3), (3,4), (4,1). Removing the ears leaves a tree.
    """
    star = [(0, leaf) for leaf in range(1, 5)]
    ears = [(5, 1), (5, 2), (6, 2), (6, 3), (7, 3), (7, 4), (8, 4), (8, 1)]
    return graph(9, star + ears)


# --- Strategies ---
@st.composite
def small_graphs(draw, min_n: int = 1, max_n: int = 12) -> Graph:
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.sets(st.sampled_from(pairs))) if pairs else set()
    return graph(n, sorted(chosen))


@pytest.fixture
def budget() -> OracleBudget:
    return OracleBudget(max_vertices=12, trial_count=100, seed=7)
