import logging
from typing import Dict, List, Union

from pydantic import BaseModel, Field

logger = logging.getLogger("pipeline")

Scalar = Union[int, float, str, bool, None]


# --- Models ---
class StageEvent(BaseModel):
    stage: str  # e.g. "peel", "census", "goodsets", "collection", "cover"
    details: Dict[str, Scalar] = Field(default_factory=dict)


# --- Engine ---
class StageRecorder:
    """
    Audit trail of one extraction run. Events carry no timestamps so the
    resulting report is reproducible byte for byte.
    """
    def __init__(self, run_label: str = "extract"):
        self.run_label = run_label
        self.events: List[StageEvent] = []

    def record(self, stage: str, **details: Scalar) -> StageEvent:
        event = StageEvent(stage=stage, details=details)
        self.events.append(event)
        summary = ", ".join(f"{key}={value}" for key, value in details.items())
        logger.info(f"[{self.run_label}] {stage}: {summary}")
        return event
