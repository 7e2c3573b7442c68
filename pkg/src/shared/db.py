from datetime import datetime
from pathlib import Path
from typing import List, Optional

from sqlalchemy.engine import Engine
from sqlmodel import Field, Session, SQLModel, create_engine, select  # type: ignore

# --- Database Models ---


class BenchRecord(SQLModel, table=True):
    """One bench instance: what was run, which branch fired and how far it got."""
    id: Optional[int] = Field(default=None, primary_key=True)
    grid: str                       # small | acceptance
    kind: str                       # generator kind of the instance
    k: int
    n: int
    m: int
    seed: int
    branch: str
    output_order: int
    bound: float                    # removable count promised by the main bound
    sqrt_bound: int                 # the sqrt(n/6k^3) baseline
    runtime_seconds: float
    verified: bool = False
    created_at: datetime = Field(default_factory=datetime.utcnow)


# --- Database Setup ---
def get_engine(path: str) -> Engine:
    if path != ":memory:":
        Path(path).parent.mkdir(parents=True, exist_ok=True)
    return create_engine(f"sqlite:///{path}")


def create_db_and_tables(engine: Engine) -> None:
    SQLModel.metadata.create_all(engine)


def record_bench_row(engine: Engine, row: BenchRecord) -> BenchRecord:
    """Commits a single row in its own session."""
    with Session(engine) as session:
        session.add(row)
        session.commit()
        session.refresh(row)
        return row


def bench_rows(engine: Engine, grid: Optional[str] = None) -> List[BenchRecord]:
    with Session(engine) as session:
        query = select(BenchRecord)
        if grid is not None:
            query = query.where(BenchRecord.grid == grid)
        return list(session.exec(query.order_by(BenchRecord.id)).all())
