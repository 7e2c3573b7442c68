"""
Command-line surface: python -m src.cli <command> ...

Exit codes: 0 ok, 1 verification failed, 2 usage, 3 hypothesis violation,
4 precondition failure, 5 internal claim violation, 6 I/O error.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from src.engines.cover import build_cover_set
from src.engines.goodsets import maximal_good_sets
from src.engines.traces import serialize_trace
from src.graph_core.graph import Graph, load_graph
from src.graph_core.peeling import k_core
from src.instances.generators import generate, render
from src.models import ExtractionResult, GenSpec, OracleBudget, RunConfig
from src.oracle.brute_force import brute_good_closure, min_order_mindeg_subgraph, random_cover_check
from src.pipeline.bench import run_bench, tsv_header, tsv_row
from src.pipeline.extraction import extract
from src.pipeline.verification import verify_certificate
from src.shared.config import get_settings
from src.shared.db import get_engine
from src.shared.errors import ExitCode, MinDegreeError, exit_code_for
from src.shared.logger import configure_logging

logger = logging.getLogger(__name__)


# --- Argument Parsing ---
def _add_input_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--k", type=int, required=True)
    parser.add_argument("--in", dest="input_path", help="edge-list file ('-' for stdin)")
    parser.add_argument("--gen-kind", choices=["wheel", "wheel-plus-one", "random-fixed-edges", "random-hypothesis"])
    parser.add_argument("--n", type=int, help="vertex count for --gen-kind")
    parser.add_argument("--edges", type=int, help="edge count (random-fixed-edges) or extra edges (random-hypothesis)")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--report", dest="report_path", help="write the report here instead of stdout")


def _add_budget_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--max-vertices", type=int)
    parser.add_argument("--trials", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mindeg", description="Small subgraphs of minimum degree k in dense graphs.")
    parser.add_argument("--verbose", "-v", action="store_true", help="debug logging on stderr")
    subparsers = parser.add_subparsers(dest="command", required=True)

    p = subparsers.add_parser("extract", help="Run the extraction pipeline and print its report.")
    _add_input_args(p)
    p.add_argument("--strategy", choices=["theorem3", "greedy-chain"], default="theorem3")

    p = subparsers.add_parser("kcore", help="Print the k-core.")
    _add_input_args(p)

    p = subparsers.add_parser("goodsets", help="Print the maximal good sets.")
    _add_input_args(p)
    p.add_argument("--emit-traces", action="store_true")

    p = subparsers.add_parser("cover", help="Build the cover set of a graph with empty k-core.")
    _add_input_args(p)
    _add_budget_args(p)

    p = subparsers.add_parser("oracle", help="Exhaustive minimum subgraph and naive good-set closure.")
    _add_input_args(p)
    _add_budget_args(p)

    p = subparsers.add_parser("gen", help="Generate an instance as edge-list text.")
    p.add_argument("--kind", required=True, choices=["wheel", "wheel-plus-one", "random-fixed-edges", "random-hypothesis"])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--edges", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", dest="report_path", help="write the edge list here instead of stdout")

    p = subparsers.add_parser("verify", help="Recheck an extract report against its graph.")
    _add_input_args(p)
    p.add_argument("--report-in", dest="certificate_path", required=True)

    p = subparsers.add_parser("bench", help="Run a declared instance grid.")
    p.add_argument("--grid", choices=["small", "acceptance"], default="small")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--db", dest="bench_db", help="SQLite ledger (default from MINDEG_BENCH_DB)")
    p.add_argument("--no-db", action="store_true")
    p.add_argument("--seed", type=int)
    p.add_argument("--report", dest="report_path", help="write the TSV rows here instead of stdout")
    p.add_argument("--k", type=int, default=2, help=argparse.SUPPRESS)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    settings = get_settings()
    seed = args.seed if getattr(args, "seed", None) is not None else settings.seed
    gen: Optional[GenSpec] = None
    if args.command == "gen":
        gen = GenSpec(kind=args.kind, k=args.k, n=args.n, edges=args.edges, seed=seed)
    elif getattr(args, "gen_kind", None) is not None:
        if args.n is None:
            raise ValueError("--gen-kind needs --n")
        gen = GenSpec(kind=args.gen_kind, k=args.k, n=args.n, edges=args.edges, seed=seed)

    budget = OracleBudget.from_settings(
        max_vertices=getattr(args, "max_vertices", None),
        trial_count=getattr(args, "trials", None),
        seed=seed,
    )
    bench_db = None
    if args.command == "bench" and not args.no_db:
        bench_db = args.bench_db or settings.bench_db
    return RunConfig(
        command=args.command,
        k=args.k,
        input_path=getattr(args, "input_path", None),
        gen=gen,
        strategy=getattr(args, "strategy", "theorem3"),
        seed=seed,
        report_path=getattr(args, "report_path", None),
        certificate_path=getattr(args, "certificate_path", None),
        budget=budget,
        emit_traces=getattr(args, "emit_traces", False),
        grid=getattr(args, "grid", "small"),
        workers=getattr(args, "workers", 1),
        bench_db=bench_db,
    )


# --- Commands ---
def _load_input(config: RunConfig) -> Graph:
    if config.gen is not None:
        return generate(config.gen)
    if config.input_path == "-":
        return load_graph(sys.stdin.read())
    return load_graph(Path(config.input_path).read_text(encoding="utf-8"))


def _dump(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _emit(config: RunConfig, text: str) -> None:
    if config.report_path is None:
        sys.stdout.write(text)
        return
    # write-then-rename so a report file is never half written
    target = Path(config.report_path)
    partial = target.with_name(target.name + ".partial")
    partial.write_text(text, encoding="utf-8")
    partial.replace(target)


def _label_map(G: Graph) -> Optional[List[str]]:
    """Input label of every id, or None when each label is its own id."""
    labels = list(G.labels)
    if all(label == str(v) for v, label in enumerate(labels)):
        return None
    return labels


def run(config: RunConfig) -> int:
    k = config.k

    if config.command == "gen":
        G = generate(config.gen)
        _emit(config, render(config.gen, G))
        return ExitCode.OK

    if config.command == "bench":
        engine = get_engine(config.bench_db) if config.bench_db else None
        lines = [tsv_header()]
        for row in run_bench(config.grid, config.seed, config.workers, engine):
            lines.append(tsv_row(row))
        _emit(config, "\n".join(lines) + "\n")
        return ExitCode.OK

    G = _load_input(config)

    if config.command == "extract":
        result = extract(G, k, config.strategy).model_copy(update={"labels": _label_map(G)})
        _emit(config, result.to_report())
        return ExitCode.OK

    if config.command == "kcore":
        core = k_core(G, k)
        _emit(config, _dump({"command": "kcore", "k": k, "order": len(core), "core": sorted(core), "labels": _label_map(G)}))
        return ExitCode.OK

    if config.command == "goodsets":
        family = maximal_good_sets(G, k)
        sets = []
        for m in family:
            entry: Dict[str, Any] = {"size": m.size, "vertices": sorted(m.vertices)}
            if config.emit_traces:
                entry["trace"] = serialize_trace(m.trace)
            sets.append(entry)
        _emit(config, _dump({"command": "goodsets", "k": k, "count": len(family), "sets": sets, "labels": _label_map(G)}))
        return ExitCode.OK

    if config.command == "cover":
        cert = build_cover_set(G, k)
        payload: Dict[str, Any] = {
            "command": "cover",
            "k": k,
            "S": sorted(cert.S),
            "peel_order": cert.peel_order,
            "phi": cert.phi_value,
            "certificate": cert.to_lines(),
            "check": None,
            "labels": _label_map(G),
        }
        if G.vertex_count <= config.budget.max_vertices:
            payload["check"] = random_cover_check(G, cert.S, k, config.budget).model_dump()
        _emit(config, _dump(payload))
        return ExitCode.OK

    if config.command == "oracle":
        best = min_order_mindeg_subgraph(G, k, config.budget)
        payload = {
            "command": "oracle",
            "k": k,
            "seed": config.budget.seed,
            "minimum": sorted(best) if best is not None else None,
            "good_sets": None,
            "labels": _label_map(G),
        }
        if G.vertex_count <= config.budget.max_vertices:
            payload["good_sets"] = [sorted(s) for s in brute_good_closure(G, k, config.budget)]
        _emit(config, _dump(payload))
        return ExitCode.OK

    if config.command == "verify":
        result = ExtractionResult.from_report(Path(config.certificate_path).read_text(encoding="utf-8"))
        report = verify_certificate(G, k, result)
        _emit(config, report.model_dump_json(indent=2) + "\n")
        return ExitCode.OK if report.passed else ExitCode.FAILURE

    raise ValueError(f"unknown command {config.command!r}")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging("DEBUG" if args.verbose else get_settings().log_level)
    try:
        config = config_from_args(args)
    except (ValidationError, ValueError) as e:
        sys.stderr.write(f"mindeg: {e}\n")
        return int(ExitCode.USAGE)

    try:
        return int(run(config))
    except (MinDegreeError, OSError) as e:
        code = exit_code_for(e)
        sys.stderr.write(f"mindeg: {type(e).__name__}: {e}\n")
        return int(code)
    except ValidationError as e:
        # malformed report passed to verify
        sys.stderr.write(f"mindeg: {e}\n")
        return int(ExitCode.PRECONDITION)


if __name__ == "__main__":
    sys.exit(main())
