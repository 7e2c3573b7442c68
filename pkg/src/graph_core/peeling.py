import heapq
import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional

from src.graph_core.graph import Graph, VertexSet
from src.shared.errors import PreconditionError, claim

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PeelResult:
    """Outcome of repeatedly deleting the lowest-id vertex of degree <= k-1."""
    order: List[int]
    removal_degrees: List[int]  # degree of order[i] at the moment it was removed
    core: VertexSet


def peel(G: Graph, k: int, within: Optional[Iterable[int]] = None) -> PeelResult:
    """
    Degeneracy peel of G (or of G[within]) down to its k-core.
    Deterministic: among all vertices of current degree <= k-1 the lowest id
    goes first.
    """
    if k < 0:
        raise PreconditionError(f"k must be non-negative, got {k}")
    n = G.vertex_count
    adjacency = G.adjacency

    if within is None:
        alive = bytearray(b"\x01") * n
        degree = [len(nbrs) for nbrs in adjacency]
        scope: Iterable[int] = range(n)
    else:
        members = sorted(G.check_ids(within))
        alive = bytearray(n)
        for v in members:
            alive[v] = 1
        degree = [0] * n
        for v in members:
            degree[v] = sum(alive[w] for w in adjacency[v])
        scope = members

    heap = [v for v in scope if degree[v] < k]
    heapq.heapify(heap)
    order: List[int] = []
    removal_degrees: List[int] = []
    while heap:
        v = heapq.heappop(heap)
        if not alive[v]:
            continue
        alive[v] = 0
        order.append(v)
        removal_degrees.append(degree[v])
        for w in adjacency[v]:
            if alive[w]:
                degree[w] -= 1
                if degree[w] == k - 1:
                    heapq.heappush(heap, w)

    core = frozenset(v for v in scope if alive[v])
    if order:
        logger.debug(f"[Peel] k={k}: removed {len(order)} vertices, core has {len(core)}")
    return PeelResult(order=order, removal_degrees=removal_degrees, core=core)


def k_core(G: Graph, k: int, within: Optional[Iterable[int]] = None) -> VertexSet:
    """
    The unique maximum vertex set (inside `within`, if given) whose induced
    subgraph has minimum degree >= k. Possibly empty.
    """
    core = peel(G, k, within).core
    if core:
        mindeg = G.induced_min_degree(core)
        claim(mindeg is not None and mindeg >= k, "k-core minimum degree", f"core of order {len(core)} has degree {mindeg} < {k}")
    return core
