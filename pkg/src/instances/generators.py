import logging
import math
from typing import List, Set, Tuple

import numpy as np

from src.graph_core.graph import Edge, Graph
from src.graph_core.thresholds import t_threshold
from src.models import GenSpec
from src.shared.errors import PreconditionError

logger = logging.getLogger(__name__)

# Pair-index sampling materializes all C(n,2) pairs up to this many.
DENSE_PAIR_LIMIT = 1_000_000


def _wheel_edges(k: int, n: int) -> List[Edge]:
    """K_{k-2} on 0..k-3 joined to the cycle k-2, ..., n-1."""
    apex = range(k - 2)
    cycle = list(range(k - 2, n))
    edges: List[Edge] = [(a, b) for a in apex for b in apex if a < b]
    edges.extend((a, c) for a in apex for c in cycle)
    edges.extend((cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle)))
    return edges


def gen_wheel(k: int, n: int) -> Graph:
    """
    Generalized wheel W(k-2, n) = K_{k-2} + C_{n-k+2}: exactly t_k(n) edges,
    minimum degree k, and no proper subgraph of minimum degree k.
    For k=2 this is the cycle C_n, for k=3 the classic wheel.
    """
    if k < 2:
        raise PreconditionError(f"k must be >= 2, got {k}")
    if n == k + 1:
        raise PreconditionError(f"W({k - 2},{n}) is the complete graph K_{n}; build it directly")
    if n < k + 2:
        raise PreconditionError(f"the wheel needs n >= k+2, got k={k}, n={n}")
    G = Graph.from_edges(n, _wheel_edges(k, n))
    logger.debug(f"[Gen] W({k - 2},{n}): {G.edge_count} edges")
    return G


def gen_extremal_plus_one(k: int, n: int, seed: int) -> Graph:
    """The wheel plus one uniformly random non-edge, t_k(n)+1 edges in total."""
    wheel = gen_wheel(k, n)
    if wheel.edge_count == math.comb(n, 2):
        raise PreconditionError(f"W({k - 2},{n}) is complete, there is no edge to add")
    rng = np.random.default_rng(seed)
    while True:
        u, v = (int(x) for x in rng.integers(0, n, size=2))
        if u != v and not wheel.has_edge(u, v):
            break
    G = Graph.from_edges(n, [*wheel.edges(), (min(u, v), max(u, v))])
    logger.debug(f"[Gen] W({k - 2},{n}) + chord {min(u, v)}-{max(u, v)}")
    return G


def gen_random_with_edges(n: int, m: int, seed: int) -> Graph:
    """Uniform random simple graph on n vertices with exactly m edges."""
    if n < 0 or m < 0:
        raise PreconditionError(f"sizes must be non-negative, got n={n}, m={m}")
    total = math.comb(n, 2)
    if m > total:
        raise PreconditionError(f"{m} edges do not fit on {n} vertices (at most {total})")
    rng = np.random.default_rng(seed)

    if total <= DENSE_PAIR_LIMIT:
        rows, cols = np.triu_indices(n, 1)
        picks = np.sort(rng.choice(total, size=m, replace=False)) if m else np.empty(0, dtype=np.int64)
        edges = [(int(rows[i]), int(cols[i])) for i in picks]
    else:
        chosen: Set[Tuple[int, int]] = set()
        while len(chosen) < m:
            u, v = (int(x) for x in rng.integers(0, n, size=2))
            if u != v:
                chosen.add((min(u, v), max(u, v)))
        edges = sorted(chosen)
    return Graph.from_edges(n, edges)


def generate(spec: GenSpec) -> Graph:
    if spec.kind == "wheel":
        return gen_wheel(spec.k, spec.n)
    if spec.kind == "wheel-plus-one":
        return gen_extremal_plus_one(spec.k, spec.n, spec.seed)
    target = spec.edge_target()
    if spec.kind == "random-hypothesis":
        logger.debug(f"[Gen] random-hypothesis: t_{spec.k}({spec.n}) = {t_threshold(spec.k, spec.n)}, target {target}")
    return gen_random_with_edges(spec.n, target, spec.seed)


def render(spec: GenSpec, G: Graph) -> str:
    """Edge-list text with the generator spec as a header comment."""
    return G.to_edge_list(header=spec.header())
