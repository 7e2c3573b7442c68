import math
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

from src.engines.observability import StageEvent
from src.graph_core.thresholds import threshold_formula

REPORT_VERSION = 1

Branch = Literal["peeled-only", "large-good-set", "main", "lemma4-fallback", "greedy-chain"]
Strategy = Literal["theorem3", "greedy-chain"]
GenKind = Literal["wheel", "wheel-plus-one", "random-fixed-edges", "random-hypothesis"]
Command = Literal["extract", "kcore", "goodsets", "cover", "oracle", "gen", "verify", "bench"]


# --- Oracle & Generation ---
class OracleBudget(BaseModel):
    """Caps for exhaustive search and randomized checks."""
    max_vertices: int = Field(default=12, ge=1, description="Exhaustive ops refuse larger graphs.")
    trial_count: int = Field(default=100, ge=0, description="Random trials per check.")
    seed: int = Field(default=0, ge=0, lt=2**64, description="Single source of randomness.")

    @classmethod
    def from_settings(cls, **overrides) -> "OracleBudget":
        from src.shared.config import get_settings
        settings = get_settings()
        values = {
            "max_vertices": settings.oracle_max_vertices,
            "trial_count": settings.oracle_trials,
            "seed": settings.seed,
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls.model_validate(values)


class GenSpec(BaseModel):
    kind: GenKind
    k: int = Field(ge=2)
    n: int = Field(ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)
    edges: Optional[int] = Field(
        default=None,
        ge=0,
        description="random-fixed-edges: the edge count. random-hypothesis: edges beyond t_k(n)+1.",
    )

    @model_validator(mode="after")
    def _check_sizes(self) -> "GenSpec":
        if self.kind != "random-fixed-edges" and self.n < self.k + 1:
            raise ValueError(f"{self.kind} needs n >= k+1, got k={self.k}, n={self.n}")
        if self.kind == "random-fixed-edges" and self.edges is None:
            raise ValueError("random-fixed-edges needs an edge count")
        if self.edge_target() is not None and self.edge_target() > math.comb(self.n, 2):
            raise ValueError(f"{self.edge_target()} edges do not fit on {self.n} vertices")
        return self

    def edge_target(self) -> Optional[int]:
        """Edge count of the random kinds; None for the wheel kinds."""
        if self.kind == "random-fixed-edges":
            return self.edges
        if self.kind == "random-hypothesis":
            return threshold_formula(self.k, self.n) + 1 + (self.edges or 0)
        return None

    def header(self) -> str:
        parts = [f"gen kind={self.kind}", f"k={self.k}", f"n={self.n}", f"seed={self.seed}"]
        if self.edges is not None:
            parts.append(f"edges={self.edges}")
        return " ".join(parts)


class CoverCheckResult(BaseModel):
    passed: bool
    trials_run: int
    seed: int
    failing_trial: Optional[int] = None
    counterexample: Optional[str] = None  # edge-list text with a provenance header


# --- Extraction Certificates ---
class Guarantee(BaseModel):
    """Claimed number of removable vertices, with the formula that produced it."""
    expression: str
    value: float


class CoverRecord(BaseModel):
    S: List[int]
    peel_order: List[int]
    phi_value: int


class Certificates(BaseModel):
    traces: List[List[str]] = Field(default_factory=list, description="One trace per removed good set.")
    collection: List[List[int]] = Field(default_factory=list)
    cover: Optional[CoverRecord] = None
    independent_set: List[int] = Field(default_factory=list, description="Indices into `collection`.")


class ExtractionResult(BaseModel):
    """
    Outcome of one extraction, in the ids of the input graph. This is also
    the machine-readable run report.
    """
    report_version: int = REPORT_VERSION
    k: int
    n: int
    m: int
    strategy: Strategy
    branch: Branch
    subgraph: List[int]
    removed: List[List[int]] = Field(default_factory=list)
    guarantee: Optional[Guarantee] = None
    certificates: Certificates = Field(default_factory=Certificates)
    digests: Dict[str, str] = Field(default_factory=dict)
    stats: List[StageEvent] = Field(default_factory=list)
    labels: Optional[List[str]] = None  # input label of each id, when labels are not the ids themselves

    @property
    def order(self) -> int:
        return len(self.subgraph)

    def to_report(self) -> str:
        return self.model_dump_json(indent=2) + "\n"

    @classmethod
    def from_report(cls, text: str) -> "ExtractionResult":
        return cls.model_validate_json(text)


# --- Verification ---
class CheckResult(BaseModel):
    name: str
    passed: bool
    detail: str = ""


class VerificationReport(BaseModel):
    checks: List[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(CheckResult(name=name, passed=bool(passed), detail=detail))


# --- CLI ---
INPUT_COMMANDS = ("extract", "kcore", "goodsets", "cover", "oracle", "verify")


class RunConfig(BaseModel):
    command: Command
    k: int = Field(default=2, ge=2)
    input_path: Optional[str] = None
    gen: Optional[GenSpec] = None
    strategy: Strategy = "theorem3"
    seed: int = Field(default=0, ge=0, lt=2**64)
    report_path: Optional[str] = None
    certificate_path: Optional[str] = None
    budget: OracleBudget = Field(default_factory=OracleBudget)
    emit_traces: bool = False
    grid: Literal["small", "acceptance"] = "small"
    workers: int = Field(default=1, ge=1)
    bench_db: Optional[str] = None

    @model_validator(mode="after")
    def _check_sources(self) -> "RunConfig":
        if self.command == "gen":
            if self.gen is None:
                raise ValueError("gen needs a generator spec")
        elif self.command in INPUT_COMMANDS:
            sources = (self.input_path is not None) + (self.gen is not None)
            if sources != 1:
                raise ValueError(f"{self.command} needs exactly one input source (--in or --gen-kind)")
        if self.command == "verify" and self.certificate_path is None:
            raise ValueError("verify needs --report-in with an extract report")
        return self
