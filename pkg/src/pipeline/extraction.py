import hashlib
import logging
import math
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from src.engines.conflict import (
    build_collection,
    build_conflict_graph,
    check_consumer_condition,
    greedy_independent_set,
    neighbor_families,
)
from src.engines.cover import build_cover_set
from src.engines.goodsets import edges_meeting, maximal_good_sets, shrink_node
from src.engines.observability import StageRecorder
from src.engines.traces import materialize, serialize_trace
from src.graph_core.graph import Graph, VertexSet, induced_subgraph
from src.graph_core.peeling import k_core, peel
from src.graph_core.thresholds import alpha, size_bound, t_threshold, threshold_formula, within_slack
from src.models import Branch, Certificates, CoverRecord, ExtractionResult, Guarantee, Strategy
from src.shared.errors import HypothesisViolation, PreconditionError, claim

logger = logging.getLogger(__name__)


# --- Guarantees ---
GUARANTEE_FORMULAS: Dict[str, Callable[[int, int], float]] = {
    "n/(4(k+1)^5*log2(n))": lambda k, n: float(size_bound(k, n, "main")),
    "n/(2k+2)": lambda k, n: n / (2 * k + 2),
    "alpha*n/(2(k+1)^4*log2(n))": lambda k, n: alpha(k) * n / (2 * (k + 1) ** 4 * math.log2(n)),
}


def make_guarantee(expression: str, k: int, n: int) -> Guarantee:
    formula = GUARANTEE_FORMULAS.get(expression)
    if formula is None:
        raise PreconditionError(f"unknown guarantee expression {expression!r}")
    return Guarantee(expression=expression, value=formula(k, n))


def vertex_digest(vertices: Iterable[int]) -> str:
    payload = " ".join(str(v) for v in sorted(vertices))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


# --- Greedy Chain ---
RemovedSet = Tuple[List[int], List[str]]  # (vertex ids, serialized trace), both in the caller's ids


def _chain(G: Graph, k: int, recorder: StageRecorder, lift: Sequence[int]) -> Tuple[List[int], List[RemovedSet]]:
    """
    H_0 = G; H_{i+1} = H_i - C for the first maximal good set C of H_i whose
    removal leaves a nonempty graph of minimum degree >= k.
    Returns the surviving vertices and the removed sets, mapped through `lift`.
    """
    alive = list(range(G.vertex_count))
    removed: List[RemovedSet] = []
    rounds = 0
    while True:
        H = G if len(alive) == G.vertex_count else induced_subgraph(G, alive)
        family = maximal_good_sets(H, k)
        pick = None
        for m in family:
            if m.size >= H.vertex_count:
                continue
            inside: Dict[int, int] = {}
            for u in m.vertices:
                for w in H.neighbors(u):
                    if w not in m.vertices:
                        inside[w] = inside.get(w, 0) + 1
            if all(H.degree(w) - c >= k for w, c in inside.items()):
                pick = m
                break
        rounds += 1
        if pick is None:
            break

        def to_caller(v: int, alive=alive) -> int:
            return lift[alive[v]]

        removed.append((sorted(to_caller(v) for v in pick.vertices), serialize_trace(pick.trace, to_caller)))
        alive = [alive[v] for v in range(H.vertex_count) if v not in pick.vertices]

    recorder.record("chain", rounds=rounds, removed_sets=len(removed), order=len(alive))
    return [lift[v] for v in alive], removed


def greedy_chain(G: Graph, k: int) -> ExtractionResult:
    """Baseline: strip maximal good sets one at a time while the rest keeps minimum degree k."""
    if k < 2:
        raise PreconditionError(f"k must be >= 2, got {k}")
    mindeg = G.min_degree()
    if mindeg is None or mindeg < k:
        raise PreconditionError(f"greedy_chain needs minimum degree >= {k}, got {mindeg}; peel first")

    recorder = StageRecorder("GreedyChain")
    recorder.record("input", n=G.vertex_count, m=G.edge_count)
    kept, removed = _chain(G, k, recorder, range(G.vertex_count))
    return _assemble(G, k, "greedy-chain", "greedy-chain", kept, removed, None, Certificates(), recorder)


# --- Extraction Pipeline ---
def check_hypothesis(G: Graph, k: int) -> int:
    """Returns t_k(n) when n >= k+1 and e >= t_k(n)+1, raises HypothesisViolation otherwise."""
    if k < 2:
        raise PreconditionError(f"k must be >= 2, got {k}")
    n, m = G.vertex_count, G.edge_count
    if n <= k:
        raise HypothesisViolation(f"need n >= k+1 vertices, got n={n} for k={k}")
    t = t_threshold(k, n)
    if m <= t:
        raise HypothesisViolation(f"need at least t_{k}({n})+1 = {t + 1} edges, got {m}")
    return t


def extract(G: Graph, k: int, strategy: Strategy = "theorem3") -> ExtractionResult:
    """
    Subgraph of minimum degree >= k on at most n - n/(4(k+1)^5 log2 n)
    vertices, for any graph with t_k(n)+1 edges, together with the
    certificates that let `verify_certificate` recheck the run.
    """
    t = check_hypothesis(G, k)
    n, m = G.vertex_count, G.edge_count
    recorder = StageRecorder("Pipeline")
    recorder.record("input", n=n, m=m, k=k, threshold=t, strategy=strategy)

    # 1. peel, keeping e >= t_k(n')+1 on every level
    peeled = peel(G, k)
    n_level, e_level = n, m
    for v, d in zip(peeled.order, peeled.removal_degrees):
        n_level -= 1
        e_level -= d
        claim(e_level >= threshold_formula(k, n_level) + 1, "peel induction", f"after removing {v}: {e_level} edges on {n_level} vertices")
    core_ids = sorted(peeled.core)
    claim(len(core_ids) >= k + 2, "peel induction", f"core of order {len(core_ids)}")
    G1 = induced_subgraph(G, core_ids)
    n1, e1 = G1.vertex_count, G1.edge_count
    recorder.record("peel", removed=len(peeled.order), order=n1, edges=e1)

    def lift(vertices: Iterable[int]) -> List[int]:
        return sorted(core_ids[v] for v in vertices)

    if strategy == "greedy-chain":
        kept, removed = _chain(G1, k, recorder, core_ids)
        return _assemble(G, k, strategy, "greedy-chain", kept, removed, None, Certificates(), recorder)

    main_bound = size_bound(k, n, "main")
    if n - n1 >= main_bound:
        recorder.record("branch", branch="peeled-only", bound=main_bound)
        guarantee = make_guarantee("n/(4(k+1)^5*log2(n))", k, n)
        return _assemble(G, k, strategy, "peeled-only", core_ids, [], guarantee, Certificates(), recorder)

    # 2. few vertices of degree k
    a = alpha(k)
    census = len(G1.vertices_of_degree(k))
    recorder.record("census", degree_k=census, threshold=a * n1)
    if census < a * n1:
        recorder.record("branch", branch="lemma4-fallback", lemma4_bound=size_bound(k, n1, "lemma4"))
        kept, removed = _chain(G1, k, recorder, core_ids)
        return _assemble(G, k, strategy, "lemma4-fallback", kept, removed, None, Certificates(), recorder)

    # 3. maximal good sets, and the large-set case
    family = maximal_good_sets(G1, k)
    largest = max((s.size for s in family), default=0)
    recorder.record("goodsets", count=len(family), covered=sum(s.size for s in family), largest=largest)
    large = next((s for s in family if s.size * (k + 1) >= n1), None)
    if large is not None:
        node = shrink_node(large, n1 / (2 * k + 2), n1 / (k + 1))
        C = materialize(node)
        claim(edges_meeting(G1, C) <= (k - 1) * len(C) + 1, "good-set edge budget", f"halved set of size {len(C)}")
        rest = k_core(G1, k, within=(v for v in range(n1) if v not in C))
        claim(bool(rest), "core survives removal", f"removing {len(C)} of {n1} vertices leaves an empty {k}-core")
        recorder.record("branch", branch="large-good-set", source_size=large.size, removed=len(C), order=len(rest))
        removed = [(lift(C), serialize_trace(node, core_ids.__getitem__))]
        guarantee = make_guarantee("n/(2k+2)", k, n)
        return _assemble(G, k, strategy, "large-good-set", lift(rest), removed, guarantee, Certificates(), recorder)

    # 4. collection, the leftover graph H and its cover set
    coll = build_collection(family, n1, k)
    in_collection = set()
    for member in coll.members:
        in_collection.update(member.vertices)
    rest_ids = [v for v in range(n1) if v not in in_collection]
    H = induced_subgraph(G1, rest_ids)
    v_H, e_H = H.vertex_count, H.edge_count
    claim(
        e_H >= threshold_formula(k, v_H) - len(coll) + 1,
        "edge accounting for H",
        f"e(H)={e_H}, v(H)={v_H}, |collection|={len(coll)}",
    )
    recorder.record("collection", bucket=coll.bucket_index, sets=len(coll), covered=coll.total_size, dropped=coll.dropped is not None)
    recorder.record("leftover", order=v_H, edges=e_H)

    cover_record: Optional[CoverRecord] = None
    S: VertexSet = frozenset()
    if not k_core(H, k):
        cert = build_cover_set(H, k)
        S = frozenset(rest_ids[s] for s in cert.S)
        slack_bound = 2 * (k - 1) * v_H - 2 * e_H
        claim(len(S) <= slack_bound, "cover set size", f"|S|={len(S)} > 2(k-1)v_H - 2e_H = {slack_bound}")
        claim(slack_bound <= 2 * len(coll) + k * k, "cover set size", f"{slack_bound} > 2|C|+k^2 = {2 * len(coll) + k * k}")
        cover_record = CoverRecord(
            S=lift(S),
            peel_order=[core_ids[rest_ids[v]] for v in cert.peel_order],
            phi_value=cert.phi_value,
        )
    recorder.record("cover", size=len(S), phi=cover_record.phi_value if cover_record else None)

    # 5. families, conflicts and the independent set
    fams = neighbor_families(G1, coll, S, k)
    conflicts = build_conflict_graph(coll, fams)
    claim(
        2 * len(conflicts.edges) <= len(coll) * ((k + 1) ** 4 - 1),
        "conflict edge chain",
        f"{len(conflicts.edges)} edges on {len(coll)} members",
    )
    chosen = greedy_independent_set(conflicts)
    claim(check_consumer_condition(fams, chosen) is None, "single chosen neighbour")
    claim(len(chosen) >= math.ceil(len(coll) / (k + 1) ** 4), "independent set size", f"{len(chosen)} of {len(coll)}")
    removed_total = sum(coll.members[i].size for i in chosen)
    claim(
        within_slack(a * n1 / (2 * (k + 1) ** 4 * math.log2(n1)), removed_total),
        "removed volume",
        f"{removed_total} vertices removed",
    )
    recorder.record("conflicts", edges=len(conflicts.edges), truncated=len(fams.truncated), chosen=len(chosen), removed=removed_total)

    # 6. final assembly
    dropped = set()
    for i in chosen:
        dropped.update(coll.members[i].vertices)
    rest = k_core(G1, k, within=(v for v in range(n1) if v not in dropped))
    claim(bool(rest), "single chosen neighbour", "the remainder has an empty k-core")

    removed = [(lift(coll.members[i].vertices), serialize_trace(coll.members[i].trace, core_ids.__getitem__)) for i in chosen]
    certificates = Certificates(
        collection=[lift(member.vertices) for member in coll.members],
        cover=cover_record,
        independent_set=list(chosen),
    )
    guarantee = make_guarantee("alpha*n/(2(k+1)^4*log2(n))", k, n)
    return _assemble(G, k, strategy, "main", lift(rest), removed, guarantee, certificates, recorder)


# --- Assembly ---
def _assemble(
    G: Graph,
    k: int,
    strategy: Strategy,
    branch: Branch,
    kept: List[int],
    removed: List[RemovedSet],
    guarantee: Optional[Guarantee],
    certificates: Certificates,
    recorder: StageRecorder,
) -> ExtractionResult:
    n = G.vertex_count
    subgraph = sorted(kept)
    mindeg = G.induced_min_degree(subgraph)
    claim(mindeg is not None and mindeg >= k, "end-to-end soundness", f"output of order {len(subgraph)} has minimum degree {mindeg}")
    core = k_core(G, k)
    claim(all(v in core for v in subgraph), "k-core containment")
    if guarantee is not None:
        claim(within_slack(guarantee.value, n - len(subgraph)), "branch guarantee", f"{n - len(subgraph)} removed < {guarantee.value}")
    if branch in ("peeled-only", "large-good-set", "main"):
        bound = size_bound(k, n, "main")
        claim(within_slack(bound, n - len(subgraph)), "theorem bound", f"{n - len(subgraph)} removed < {bound}")

    certificates.traces = [trace for _, trace in removed]
    digests = {"subgraph": vertex_digest(subgraph)}
    for index, (vertices, _) in enumerate(removed):
        digests[f"removed[{index}]"] = vertex_digest(vertices)

    recorder.record("output", branch=branch, order=len(subgraph), removed_sets=len(removed))
    logger.info(f"[Pipeline] k={k}, n={n}: branch {branch}, output order {len(subgraph)}")
    return ExtractionResult(
        k=k,
        n=n,
        m=G.edge_count,
        strategy=strategy,
        branch=branch,
        subgraph=subgraph,
        removed=[vertices for vertices, _ in removed],
        guarantee=guarantee,
        certificates=certificates,
        digests=digests,
        stats=list(recorder.events),
    )
