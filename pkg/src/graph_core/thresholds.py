import math
from typing import Literal, Union

from src.shared.errors import PreconditionError

BoundKind = Literal["main", "sqrt", "lemma4"]


def threshold_formula(k: int, n: int) -> int:
    """(k-1)(n-k+2) + C(k-2, 2), evaluated for any n."""
    return (k - 1) * (n - k + 2) + math.comb(k - 2, 2)


def t_threshold(k: int, n: int) -> int:
    """
    t_k(n). One edge more than this forces a subgraph of minimum degree k.
    Defined for n >= k+1 only; below that the statement is wrong or vacuous.
    """
    if k < 2:
        raise PreconditionError(f"k must be >= 2, got {k}")
    if n <= k:
        raise PreconditionError(f"t_k(n) needs n >= k+1, got k={k}, n={n}")
    return threshold_formula(k, n)


def alpha(k: int) -> float:
    """Fraction of degree-k vertices separating the two cases of the main argument."""
    return 1.0 / (2 * k + 2)


def size_bound(k: int, n: int, which: BoundKind = "main") -> Union[float, int]:
    """
    Number of vertices a bound promises can be removed (the caller subtracts
    it from n).

    main   -> n / (4 (k+1)^5 log2 n)
    sqrt   -> floor(sqrt(n / 6k^3)), the 1990 baseline
    lemma4 -> (1 - 2 alpha k) n / (8 k^2), the few-degree-k quantity
    """
    if n < 2:
        raise PreconditionError(f"size_bound needs n >= 2, got {n}")
    if which == "main":
        return n / (4 * (k + 1) ** 5 * math.log2(n))
    if which == "sqrt":
        # floor(sqrt(x)) == isqrt(floor(x)) for x >= 0
        return math.isqrt(n // (6 * k**3))
    if which == "lemma4":
        return (1 - 2 * alpha(k) * k) * n / (8 * k**2)
    raise PreconditionError(f"unknown bound kind {which!r}")


def within_slack(value: float, limit: float, rel: float = 1e-9) -> bool:
    """value <= limit, allowing a relative slack for log-valued quantities."""
    return value <= limit + rel * max(1.0, abs(limit))
