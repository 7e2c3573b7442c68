import os
from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv  # type: ignore
from pydantic import BaseModel, Field


class Settings(BaseModel):
    """
    Environment-backed defaults. CLI flags override every field.
    """
    oracle_max_vertices: int = Field(default=12, ge=1, description="Vertex cap for exhaustive oracles.")
    oracle_trials: int = Field(default=100, ge=1, description="Random covers per cover check.")
    seed: int = Field(default=0, ge=0, lt=2**64, description="Default 64-bit seed.")
    bench_db: str = Field(default="storage/bench.db", description="SQLite ledger for bench rows.")
    log_level: str = Field(default="WARNING")

    @classmethod
    def from_env(cls, env_file: Optional[str] = None) -> "Settings":
        """Loads `env_file` (default: the nearest .env) without overriding set variables."""
        load_dotenv(env_file)
        values = {}
        env_map = {
            "MINDEG_ORACLE_MAX_VERTICES": "oracle_max_vertices",
            "MINDEG_ORACLE_TRIALS": "oracle_trials",
            "MINDEG_SEED": "seed",
            "MINDEG_BENCH_DB": "bench_db",
            "MINDEG_LOG_LEVEL": "log_level",
        }
        for env_key, field in env_map.items():
            raw = os.environ.get(env_key)
            if raw is not None and raw != "":
                values[field] = raw
        return cls.model_validate(values)


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings.from_env()
