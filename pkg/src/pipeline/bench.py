import logging
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Iterator, List, Optional, Tuple

from sqlalchemy.engine import Engine

from src.graph_core.thresholds import size_bound
from src.instances.generators import generate
from src.models import GenSpec
from src.pipeline.extraction import extract
from src.pipeline.verification import verify_certificate
from src.shared.db import BenchRecord, create_db_and_tables, record_bench_row

logger = logging.getLogger(__name__)

TSV_COLUMNS = ("grid", "kind", "k", "n", "m", "seed", "branch", "output_order", "bound", "sqrt_bound", "runtime_seconds", "verified")


# --- Grids ---
def bench_grid(grid: str, seed: int) -> List[GenSpec]:
    """Declared instance lists; `small` runs in seconds, `acceptance` holds the 2^20-vertex cases."""
    if grid == "small":
        specs = []
        for k in (2, 3, 4):
            for n in (12, 24, 40):
                specs.append(GenSpec(kind="wheel-plus-one", k=k, n=n, seed=seed))
                specs.append(GenSpec(kind="random-hypothesis", k=k, n=n, seed=seed, edges=n // 4))
        return specs
    if grid == "acceptance":
        return [
            GenSpec(kind="wheel-plus-one", k=2, n=2**20, seed=seed),
            GenSpec(kind="wheel-plus-one", k=3, n=2**20, seed=seed),
        ]
    raise ValueError(f"unknown bench grid {grid!r}")


# --- Instances ---
def run_instance(grid: str, spec: GenSpec) -> BenchRecord:
    G = generate(spec)
    started = time.perf_counter()
    result = extract(G, spec.k)
    runtime = time.perf_counter() - started
    report = verify_certificate(G, spec.k, result)
    if not report.passed:
        logger.error(f"[Bench] {spec.header()}: verification failed on {[c.name for c in report.failures()]}")
    return BenchRecord(
        grid=grid,
        kind=spec.kind,
        k=spec.k,
        n=G.vertex_count,
        m=G.edge_count,
        seed=spec.seed,
        branch=result.branch,
        output_order=result.order,
        bound=float(size_bound(spec.k, G.vertex_count, "main")),
        sqrt_bound=int(size_bound(spec.k, G.vertex_count, "sqrt")),
        runtime_seconds=round(runtime, 6),
        verified=report.passed,
    )


def _run_indexed(job: Tuple[str, GenSpec]) -> BenchRecord:
    return run_instance(*job)


def iter_bench(grid: str, seed: int, workers: int = 1) -> Iterator[BenchRecord]:
    """Rows in grid order; with workers > 1 instances run in a process pool."""
    jobs = [(grid, spec) for spec in bench_grid(grid, seed)]
    if workers <= 1:
        for job in jobs:
            yield _run_indexed(job)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(_run_indexed, jobs)


def run_bench(grid: str, seed: int, workers: int = 1, engine: Optional[Engine] = None) -> List[BenchRecord]:
    if engine is not None:
        create_db_and_tables(engine)
    rows = []
    for row in iter_bench(grid, seed, workers):
        if engine is not None:
            row = record_bench_row(engine, row)
        logger.info(f"[Bench] {row.kind} k={row.k} n={row.n}: {row.branch}, order {row.output_order}, {row.runtime_seconds:.3f}s")
        rows.append(row)
    return rows


def tsv_header() -> str:
    return "\t".join(TSV_COLUMNS)


def tsv_row(row: BenchRecord) -> str:
    return "\t".join(str(getattr(row, column)) for column in TSV_COLUMNS)
