from enum import IntEnum
from typing import Optional


# --- Exceptions ---
class MinDegreeError(Exception):
    """Root of every error raised by the toolkit."""


class GraphFormatError(MinDegreeError, ValueError):
    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        prefix = f"line {line_number}: " if line_number is not None else ""
        super().__init__(f"{prefix}{message}")


class PreconditionError(MinDegreeError, ValueError):
    """An operation was called outside its documented domain."""


class HypothesisViolation(PreconditionError):
    """The input does not satisfy n >= k+1 and e >= t_k(n)+1."""


class BudgetExceeded(PreconditionError):
    """An exhaustive oracle refused a graph above its vertex cap."""


class TraceRuleViolation(PreconditionError):
    def __init__(self, message: str, step_index: int):
        self.step_index = step_index
        super().__init__(f"step {step_index}: {message}")


class ClaimViolation(MinDegreeError, AssertionError):
    """
    An internal claim assertion failed.
    These indicate implementation bugs, never valid outcomes.
    """
    def __init__(self, claim: str, detail: str = ""):
        self.claim = claim
        self.detail = detail
        super().__init__(f"{claim} violated: {detail}" if detail else f"{claim} violated")


def claim(condition: bool, name: str, detail: str = "") -> None:
    if not condition:
        raise ClaimViolation(name, detail)


# --- Exit Codes (documented CLI contract) ---
class ExitCode(IntEnum):
    OK = 0
    FAILURE = 1
    USAGE = 2
    HYPOTHESIS = 3
    PRECONDITION = 4
    INTERNAL = 5
    IO = 6


def exit_code_for(exc: BaseException) -> ExitCode:
    # Order matters: subclasses first.
    if isinstance(exc, HypothesisViolation):
        return ExitCode.HYPOTHESIS
    if isinstance(exc, ClaimViolation):
        return ExitCode.INTERNAL
    if isinstance(exc, (PreconditionError, GraphFormatError)):
        return ExitCode.PRECONDITION
    if isinstance(exc, OSError):
        return ExitCode.IO
    return ExitCode.INTERNAL
