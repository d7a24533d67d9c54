"""
Counting lower bound on the number of exact-routing invocations.

A routing built from c invocations of an exact router with fixed glue can
realise at most m_c^(2n) * C_n^c demand graphs on n terminals, while there
are (2n - 1)!! perfect matchings. This module evaluates both sides exactly
for small n and through summed log-factorials for large n, finds the
smallest covering c and checks the chain of estimates that shows c must
grow like log n / log log n.
"""

import logging
import math
from functools import lru_cache
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .config import ERROR_MESSAGES, get_settings
from .models import BoundReport, ChainStep

logger = logging.getLogger(__name__)

# comparisons of summed logarithms
LOG_TOLERANCE = 1e-9


class BoundDomainError(ValueError):
    """Raised for arguments outside a formula's domain."""
    pass


def _require(value: int, minimum: int, name: str = "n") -> None:
    if value < minimum:
        key = "c_positive" if name == "c" else "n_positive"
        raise BoundDomainError(ERROR_MESSAGES[key].format(n=value, c=value, minimum=minimum))


def double_factorial(n: int) -> int:
    """n * (n - 2) * ... down to 1 or 2; 1 for n <= 0."""
    return math.prod(range(n, 0, -2))


def catalan(n: int) -> int:
    """
    The n-th Catalan number, binom(2n, n) / (n + 1).

    Args:
        n: Nonnegative integer

    Returns:
        Exact value

    Raises:
        BoundDomainError: If n < 0
    """
    _require(n, 0)
    return math.comb(2 * n, n) // (n + 1)


def matching_glue_bound(c: int) -> int:
    """
    Bound m_c = (2c)! / (2^c c!) * 2c on the ways c invocations can be glued.

    Args:
        c: Number of invocations, at least 1

    Returns:
        Exact value, equal to (2c - 1)!! * 2c

    Raises:
        BoundDomainError: If c < 1
    """
    _require(c, 1, "c")
    return math.factorial(2 * c) // (2**c * math.factorial(c)) * 2 * c


def demand_graph_count(n: int) -> int:
    """Number (2n)! / (n! 2^n) of perfect matchings on 2n points."""
    _require(n, 1)
    return math.factorial(2 * n) // (math.factorial(n) * 2**n)


@lru_cache(maxsize=256)
def log_factorial(n: int) -> float:
    """Natural log of n!, summed term by term."""
    if n < 2:
        return 0.0
    return math.fsum(np.log(np.arange(2, n + 1, dtype=np.float64)))


def log_catalan(n: int) -> float:
    return log_factorial(2 * n) - 2 * log_factorial(n) - math.log(n + 1)


def log_matching_glue_bound(c: int) -> float:
    _require(c, 1, "c")
    return log_factorial(2 * c) - c * math.log(2) - log_factorial(c) + math.log(2 * c)


def log_demand_graph_count(n: int) -> float:
    _require(n, 1)
    return log_factorial(2 * n) - log_factorial(n) - n * math.log(2)


def solvable_capacity_log(n: int, c: int) -> float:
    """
    Natural log of m_c^(2n) * C_n^c.

    Args:
        n: Terminal-count parameter, at least 1
        c: Invocation count, at least 1

    Returns:
        2n * ln(m_c) + c * ln(C_n)
    """
    _require(n, 1)
    _require(c, 1, "c")
    return 2 * n * log_matching_glue_bound(c) + c * log_catalan(n)


def solvable_covers_total(n: int, c: int, exact: Optional[bool] = None) -> bool:
    """
    Whether m_c^(2n) * C_n^c >= (2n - 1)!!.

    Args:
        n: Terminal-count parameter
        c: Invocation count
        exact: Compare big integers instead of logarithms (defaults to
            exact for n up to the configured limit)

    Returns:
        True when the solvable capacity covers every demand graph
    """
    if exact is None:
        exact = n <= get_settings().exact_bound_limit
    if exact:
        _require(n, 1)
        return matching_glue_bound(c) ** (2 * n) * catalan(n) ** c >= demand_graph_count(n)
    return solvable_capacity_log(n, c) >= log_demand_graph_count(n)


def min_invocations(n: int, exact: Optional[bool] = None) -> int:
    """
    Smallest c >= 1 whose solvable capacity covers all demand graphs.

    Args:
        n: Terminal-count parameter, at least 2
        exact: Passed to solvable_covers_total

    Returns:
        The minimal invocation count
    """
    _require(n, 2)
    c = 1
    while not solvable_covers_total(n, c, exact):
        c += 1
    logger.debug(f"min_invocations({n}) = {c}")
    return c


def invocation_threshold(n: int) -> int:
    """floor(ln n / (4 ln ln n)) - 2, the growth rate the counting argument forces."""
    _require(n, 3)
    return math.floor(math.log(n) / (4 * math.log(math.log(n)))) - 2


def chain_invocations(n: int) -> int:
    """
    Invocation count floor(ln n / (4 ln ln n)) at which the chain is evaluated.

    No offset of 2 is subtracted here, unlike :func:`invocation_threshold`, so
    the chain can be evaluated from n near 10^4 on. The quotient is only used
    where ln ln n >= 1 (n >= 16); below that it is inflated by the small
    denominator and n is reported as too small.

    Raises:
        BoundDomainError: If ln ln n < 1 or the count is below one
    """
    _require(n, 1)
    if n < 3 or math.log(math.log(n)) < 1:
        raise BoundDomainError(ERROR_MESSAGES["n_too_small"].format(c=0))
    c = math.floor(math.log(n) / (4 * math.log(math.log(n))))
    if c < 1:
        raise BoundDomainError(ERROR_MESSAGES["n_too_small"].format(c=c))
    return c


def _step(name: str, lhs: float, rhs: float, strict: bool = False) -> ChainStep:
    holds = lhs < rhs - LOG_TOLERANCE if strict else lhs <= rhs + LOG_TOLERANCE
    return ChainStep(name=name, lhs=lhs, rhs=rhs, strict=strict, holds=holds)


def verify_chain(n: int, c: Optional[int] = None) -> BoundReport:
    """
    Evaluate the estimates behind the lower bound at (n, c) in log space.

    Args:
        n: Terminal-count parameter
        c: Invocation count (defaults to floor(ln n / (4 ln ln n)))

    Returns:
        BoundReport with every chain step and the coverage verdict; exact
        values are attached when n is within the exact limit

    Raises:
        BoundDomainError: If n is too small for c >= 1, or c < 1
    """
    _require(n, 1)
    if c is None:
        c = chain_invocations(n)
    _require(c, 1, "c")

    log_mc = log_matching_glue_bound(c)
    log_cn = log_catalan(n)
    log_solvable = solvable_capacity_log(n, c)
    log_total = log_demand_graph_count(n)
    ln2 = math.log(2)

    steps = [
        _step("m_c <= 2^(c-1) c! 2c", log_mc,
              (c - 1) * ln2 + log_factorial(c) + math.log(2 * c)),
        _step("2^(c-1) c! 2c <= 2^c (c+1)!",
              (c - 1) * ln2 + log_factorial(c) + math.log(2 * c),
              c * ln2 + log_factorial(c + 1)),
        _step("(c+1)! <= e ((c+2)/e)^(c+2)", log_factorial(c + 1),
              1 + (c + 2) * (math.log(c + 2) - 1)),
        _step("m_c <= (2(c+2)/e)^(c+2)", log_mc, (c + 2) * (math.log(2 * (c + 2)) - 1)),
        _step("C_n <= 4^n", log_cn, n * math.log(4)),
        _step("m_c^(2n) C_n^c <= (4(c+2)/e)^((c+2)2n)", log_solvable,
              (c + 2) * 2 * n * (math.log(4 * (c + 2)) - 1)),
        _step("m_c^(2n) C_n^c < (2n-1)!!", log_solvable, log_total, strict=True),
    ]

    limit = get_settings().exact_bound_limit
    verdict = solvable_covers_total(n, c)
    report = BoundReport(
        n=n,
        c=c,
        log_solvable=log_solvable,
        log_total=log_total,
        verdict=verdict,
        chain_steps=steps,
        catalan=catalan(n) if n <= limit else None,
        matching_glue=matching_glue_bound(c) if c <= limit else None,
        total=demand_graph_count(n) if n <= limit else None,
    )
    logger.info(f"Chain at n={n}, c={c}: holds={report.chain_holds}, covered={verdict}")
    return report


def noncrossing(blocks: Sequence[Sequence[int]]) -> bool:
    """True when no a1 < b1 < a2 < b2 has a1, a2 in one block and b1, b2 in another."""
    for x, first in enumerate(blocks):
        for second in blocks[x + 1 :]:
            for a1 in first:
                for a2 in first:
                    if a2 <= a1:
                        continue
                    inside = [b for b in second if a1 < b < a2]
                    outside = [b for b in second if b < a1 or b > a2]
                    if inside and outside:
                        return False
    return True


def set_partitions(items: Sequence[int]) -> Iterator[List[Tuple[int, ...]]]:
    """Yields every partition of ``items`` into nonempty blocks."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in set_partitions(rest):
        yield [(first,)] + partition
        for index, block in enumerate(partition):
            yield partition[:index] + [(first,) + block] + partition[index + 1 :]


def noncrossing_partitions(n: int) -> List[List[Tuple[int, ...]]]:
    """All noncrossing partitions of {1, ..., n}, by brute force."""
    _require(n, 0)
    return [p for p in set_partitions(range(1, n + 1)) if noncrossing(p)]


def perfect_matchings(items: Sequence[int]) -> Iterator[List[Tuple[int, int]]]:
    """Yields all perfect matchings of ``items``."""
    items = list(items)
    if not items:
        yield []
        return
    first = items.pop(0)
    for index, other in enumerate(items):
        for matching in perfect_matchings(items[:index] + items[index + 1 :]):
            yield [(first, other)] + matching


def invocation_scan(nmax: int) -> pd.DataFrame:
    """
    Minimal invocation counts for n = 2, 4, 8, ... up to ``nmax``.

    Args:
        nmax: Largest n scanned, at least 2

    Returns:
        DataFrame with columns n, min_invocations, threshold, log_solvable,
        log_total
    """
    _require(nmax, 2)
    rows = []
    n = 2
    while n <= nmax:
        c = min_invocations(n)
        rows.append({
            "n": n,
            "min_invocations": c,
            "threshold": invocation_threshold(n) if n >= 3 else None,
            "log_solvable": solvable_capacity_log(n, c),
            "log_total": log_demand_graph_count(n),
        })
        n *= 2
    logger.info(f"Scanned {len(rows)} values of n up to {nmax}")
    return pd.DataFrame(rows)
