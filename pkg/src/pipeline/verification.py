import logging
import math
from typing import Dict, List, Optional, Set

from src.engines.conflict import neighbor_families
from src.engines.cover import phi
from src.engines.goodsets import edges_meeting
from src.engines.traces import parse_trace, replay_trace
from src.graph_core.graph import Graph, induced_subgraph
from src.graph_core.peeling import k_core
from src.graph_core.thresholds import alpha, size_bound, within_slack
from src.models import ExtractionResult, VerificationReport
from src.pipeline.extraction import GUARANTEE_FORMULAS, vertex_digest
from src.shared.errors import PreconditionError

logger = logging.getLogger(__name__)

THEOREM_BRANCHES = ("peeled-only", "large-good-set", "main")
CHAIN_BRANCHES = ("lemma4-fallback", "greedy-chain")


def verify_certificate(G: Graph, k: int, r: ExtractionResult) -> VerificationReport:
    """
    Rechecks an extraction result against G from scratch. Nothing computed
    during the run is trusted: the k-core, every trace, the leftover graph
    and the conflict families are rebuilt here. Failures are report entries.
    """
    report = VerificationReport()
    n = G.vertex_count

    report.add("input matches", r.k == k and r.n == n and r.m == G.edge_count, f"report k={r.k} n={r.n} m={r.m}, graph n={n} m={G.edge_count}")
    mentioned = list(r.subgraph)
    for vertices in r.removed:
        mentioned.extend(vertices)
    out_of_range = [v for v in mentioned if not 0 <= v < n]
    report.add("vertex ids in range", not out_of_range, f"{out_of_range[:5]}")
    if out_of_range:
        return report

    # --- Output ---
    subgraph = set(r.subgraph)
    report.add("output nonempty", bool(subgraph))
    mindeg = G.induced_min_degree(subgraph)
    report.add("output minimum degree", mindeg is not None and mindeg >= k, f"minimum degree {mindeg}, need {k}")
    core = k_core(G, k)
    report.add("output within k-core", subgraph <= core, f"{len(subgraph - core)} vertices outside the {k}-core")
    overlap = [v for vertices in r.removed for v in vertices if v in subgraph]
    report.add("removed sets disjoint from output", not overlap, f"{overlap[:5]}")

    digests_ok = r.digests.get("subgraph") == vertex_digest(r.subgraph) and all(
        r.digests.get(f"removed[{i}]") == vertex_digest(vertices) for i, vertices in enumerate(r.removed)
    )
    report.add("digests", digests_ok)

    # --- Guarantee ---
    removed_count = n - len(subgraph)
    if r.branch in THEOREM_BRANCHES:
        if r.guarantee is None:
            report.add("guarantee present", False, f"branch {r.branch} must state a guarantee")
        else:
            formula = GUARANTEE_FORMULAS.get(r.guarantee.expression)
            expected = formula(k, n) if formula is not None and n >= 2 else None
            report.add(
                "guarantee arithmetic",
                expected is not None and math.isclose(expected, r.guarantee.value, rel_tol=1e-12),
                f"{r.guarantee.expression} = {expected}, report says {r.guarantee.value}",
            )
            report.add("guarantee met", within_slack(r.guarantee.value, removed_count), f"{removed_count} removed")
        if n >= 2:
            bound = size_bound(k, n, "main")
            report.add("theorem bound", within_slack(bound, removed_count), f"{removed_count} removed, bound {bound:.6f}")
    else:
        report.add("no guarantee on fallback branches", r.guarantee is None)

    # --- Removed good sets ---
    core_ids = sorted(core)
    position: Dict[int, int] = {v: i for i, v in enumerate(core_ids)}
    G1 = induced_subgraph(G, core_ids)
    outside_core = [v for vertices in r.removed for v in vertices if v not in position]
    report.add("removed sets within k-core", not outside_core, f"{outside_core[:5]}")
    if outside_core:
        return report
    removed_local = [frozenset(position[v] for v in vertices) for vertices in r.removed]
    report.add("one trace per removed set", len(r.certificates.traces) == len(r.removed))

    sequential = r.branch in CHAIN_BRANCHES
    alive: Set[int] = set(range(G1.vertex_count))
    for index, (C, lines) in enumerate(zip(removed_local, r.certificates.traces)):
        host = G1 if not sequential or len(alive) == G1.vertex_count else induced_subgraph(G1, sorted(alive))
        if host is G1:
            local = position
        else:
            host_ids = sorted(alive)
            local = {core_ids[v]: i for i, v in enumerate(host_ids)}
        C_host = frozenset(local[core_ids[v]] for v in C if core_ids[v] in local)
        try:
            trace = parse_trace(lines, id_map=local.__getitem__)
            rebuilt = replay_trace(host, k, trace)
            report.add(f"trace {index} replays", rebuilt == C_host, f"rebuilt {len(rebuilt)} vertices, removed set has {len(C)}")
        except (PreconditionError, KeyError) as e:
            report.add(f"trace {index} replays", False, str(e))
        meeting = edges_meeting(host, C_host)
        report.add(f"set {index} edge budget", meeting <= (k - 1) * len(C) + 1, f"meets {meeting} edges, size {len(C)}")
        if sequential:
            alive -= C

    _check_disjoint(report, G1, removed_local, adjacency_too=not sequential)

    if r.branch == "main":
        _check_main_certificates(report, G1, k, r, position)

    logger.info(f"[Verify] {len(report.checks)} checks, {len(report.failures())} failed")
    return report


def _check_disjoint(report: VerificationReport, G1: Graph, sets: List[frozenset], adjacency_too: bool) -> None:
    owner: Dict[int, int] = {}
    clash: Optional[str] = None
    for index, C in enumerate(sets):
        for v in C:
            if v in owner and clash is None:
                clash = f"vertex {v} in sets {owner[v]} and {index}"
            owner[v] = index
    report.add("good sets disjoint", clash is None, clash or "")
    if not adjacency_too:
        return
    cross: Optional[str] = None
    for index, C in enumerate(sets):
        for u in C:
            for w in G1.neighbors(u):
                other = owner.get(w)
                if other is not None and other != index and cross is None:
                    cross = f"edge {u}-{w} joins sets {index} and {other}"
    report.add("good sets non-adjacent", cross is None, cross or "")


def _check_main_certificates(report: VerificationReport, G1: Graph, k: int, r: ExtractionResult, position: Dict[int, int]) -> None:
    certs = r.certificates
    n1 = G1.vertex_count
    try:
        members = [frozenset(position[v] for v in vertices) for vertices in certs.collection]
    except KeyError as e:
        report.add("collection within k-core", False, f"vertex {e}")
        return

    sizes = [len(m) for m in members]
    total = sum(sizes)
    report.add("collection nonempty", bool(members))
    if not members:
        return
    report.add("collection upper bound", total < n1, f"{total} >= {n1}")
    report.add("collection lower bound", within_slack(alpha(k) * n1 / math.log2(n1), total), f"total {total}")
    report.add("collection dyadic ratio", max(sizes) <= 2 * min(sizes), f"sizes {min(sizes)}..{max(sizes)}")

    chosen = certs.independent_set
    valid_indices = all(0 <= i < len(members) for i in chosen) and len(set(chosen)) == len(chosen)
    report.add("independent set indices", valid_indices)
    if not valid_indices:
        return
    chosen_sets = [members[i] for i in chosen]
    removed_local = [frozenset(position[v] for v in vertices) for vertices in r.removed]
    report.add("removed sets are the chosen members", chosen_sets == removed_local)
    report.add("independent set size", len(chosen) >= math.ceil(len(members) / (k + 1) ** 4), f"{len(chosen)} of {len(members)}")

    in_collection: Set[int] = set()
    for m in members:
        in_collection |= m
    rest_ids = [v for v in range(n1) if v not in in_collection]
    H = induced_subgraph(G1, rest_ids)
    h_position = {v: i for i, v in enumerate(rest_ids)}

    S_local: List[int] = []
    if certs.cover is None:
        report.add("H has a k-core when S is empty", bool(k_core(H, k)))
    else:
        try:
            S_local = [position[v] for v in certs.cover.S]
            S_in_H = [h_position[v] for v in S_local]
        except KeyError as e:
            report.add("S within H", False, f"vertex {e}")
            return
        report.add("H has an empty k-core", not k_core(H, k))
        potential = phi(H, k)
        report.add("|S| <= phi(H)", len(S_in_H) <= potential, f"|S|={len(S_in_H)}, phi={potential}")
        report.add("phi matches", certs.cover.phi_value == potential, f"report {certs.cover.phi_value}, recomputed {potential}")
        low = [s for s in S_in_H if H.degree(s) > k - 1]
        report.add("S within low-degree vertices of H", not low, f"{low[:5]}")
        report.add("cover set size", len(S_in_H) <= 2 * len(members) + k * k, f"|S|={len(S_in_H)}")

    fams = neighbor_families(G1, members, S_local, k)
    picked = set(chosen)
    crowded = next((s for s, family in fams.families.items() if sum(1 for i in family if i in picked) > 1), None)
    report.add("single chosen neighbour", crowded is None, f"vertex {crowded} sees two chosen sets")

    dropped: Set[int] = set()
    for C in chosen_sets:
        dropped |= C
    report.add("remainder has a k-core", bool(k_core(G1, k, within=(v for v in range(n1) if v not in dropped))))
