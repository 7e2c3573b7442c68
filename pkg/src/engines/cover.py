import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Set

from src.graph_core.graph import Graph, VertexSet
from src.graph_core.peeling import k_core, peel
from src.shared.errors import PreconditionError, claim

logger = logging.getLogger(__name__)


# --- Models ---
@dataclass(frozen=True)
class CoverCertificate:
    """
    S together with the peel order that produced it.
    Every cover of (H, S, k) contains a subgraph of minimum degree k.
    """
    S: VertexSet
    peel_order: List[int] = field(default_factory=list)
    phi_value: int = 0

    def to_lines(self, id_map: Optional[Callable[[int], int]] = None) -> List[str]:
        f = id_map if id_map is not None else (lambda v: v)
        return [
            "S: " + " ".join(str(v) for v in sorted(f(s) for s in self.S)),
            "peel: " + " ".join(str(f(v)) for v in self.peel_order),
        ]


# --- Potential ---
def phi(H: Graph, k: int) -> int:
    """2(k-1) v_H - 2 e_H - sum over deg(w) <= k-1 of (k-1-deg(w))."""
    deficit = sum(k - 1 - d for d in H.degrees() if d <= k - 1)
    return 2 * (k - 1) * H.vertex_count - 2 * H.edge_count - deficit


# --- Construction ---
def build_cover_set(H: Graph, k: int) -> CoverCertificate:
    """
    For H without a subgraph of minimum degree k, builds S within V_{<=k-1}(H),
    |S| <= phi(H), such that every (H, S, k)-cover has such a subgraph.

    Forward pass: peel H to a single vertex, lowest id of degree <= k-1 first.
    Backward pass: restore the vertices in reverse and apply
        S = (S' u I_v) \\ V_k(H_level),
    with I_v = {v} iff deg(v) <= k-2 or v has a neighbor in S'.
    """
    n = H.vertex_count
    if n == 0:
        raise PreconditionError("the cover construction needs at least one vertex")
    if k_core(H, k):
        raise PreconditionError(f"H has a nonempty {k}-core; the cover construction does not apply")

    peeled = peel(H, k)
    order = peeled.order
    claim(len(order) == n, "peel exhausts H", f"{len(order)} of {n} vertices peeled")

    adjacency = H.adjacency
    alive = bytearray(n)
    degree = [0] * n
    base = order[-1]
    alive[base] = 1
    S: Set[int] = {base}

    v_count, e_count = 1, 0
    deficit = k - 1
    phi_level = 2 * (k - 1) * v_count - 2 * e_count - deficit
    claim(len(S) <= phi_level, "cover size within phi", "base level")

    for i in range(n - 2, -1, -1):
        v = order[i]
        nbrs = [w for w in adjacency[v] if alive[w]]
        d = len(nbrs)
        claim(d == peeled.removal_degrees[i] and d <= k - 1, "peel order", f"vertex {v} has degree {d} at its level")

        previous_phi = phi_level
        alive[v] = 1
        degree[v] = d
        v_count += 1
        e_count += d
        deficit += k - 1 - d
        for w in nbrs:
            old = degree[w]
            degree[w] = old + 1
            if old <= k - 1:
                deficit -= k - 1 - old
            if old + 1 <= k - 1:
                deficit += k - 1 - (old + 1)
        phi_level = 2 * (k - 1) * v_count - 2 * e_count - deficit

        low_neighbors = sum(1 for w in nbrs if degree[w] <= k - 1)
        step = (k - 1) - d + low_neighbors
        claim(phi_level - previous_phi == step and step >= 0, "phi recurrence", f"level of vertex {v}: {previous_phi} -> {phi_level}")

        if d <= k - 2 or any(w in S for w in nbrs):
            if d == k - 1 and low_neighbors == 0:
                # the neighbor that put v into S has degree exactly k here and leaves S
                claim(any(w in S and degree[w] == k for w in nbrs), "degree-k neighbour expelled", f"vertex {v}")
            S.add(v)
        for w in nbrs:
            if degree[w] == k:
                S.discard(w)

        claim(len(S) <= phi_level, "cover size within phi", f"|S|={len(S)} > phi={phi_level} at vertex {v}")

    claim(phi_level == phi(H, k), "phi bookkeeping", f"{phi_level} vs {phi(H, k)}")
    claim(S <= set(H.vertices_at_most(k - 1)), "S within low-degree vertices")
    claim(phi_level <= 2 * (k - 1) * n - 2 * H.edge_count, "phi upper bound")
    logger.info(f"[Cover] k={k}: |S|={len(S)} <= phi={phi_level} on {n} vertices")
    return CoverCertificate(S=frozenset(S), peel_order=list(order), phi_value=phi_level)


def is_cover(Ht: Graph, H: Graph, S: VertexSet, k: int, embedding: Optional[Sequence[int]] = None) -> bool:
    """
    True iff Ht contains H (under `embedding`, identity by default) and every
    vertex of Ht of degree <= k-1 is the image of a vertex of V(H) \\ S.
    """
    if embedding is None:
        if H.vertex_count > Ht.vertex_count:
            return False
        emb: Sequence[int] = range(H.vertex_count)
    else:
        emb = list(embedding)
        if len(emb) != H.vertex_count:
            raise PreconditionError(f"embedding has {len(emb)} entries for {H.vertex_count} vertices")
        if len(set(emb)) != len(emb):
            raise PreconditionError("embedding is not injective")
        if any(not 0 <= x < Ht.vertex_count for x in emb):
            raise PreconditionError("embedding leaves the vertex range of the cover")

    for u, v in H.edges():
        if not Ht.has_edge(emb[u], emb[v]):
            return False
    allowed = {emb[v] for v in range(H.vertex_count) if v not in S}
    for x in range(Ht.vertex_count):
        if Ht.degree(x) <= k - 1 and x not in allowed:
            return False
    return True
