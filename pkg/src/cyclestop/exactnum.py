"""Exact integer and rational combinatorics.

Binomial coefficients, Stirling numbers of the second kind, and the two
alternating Stirling sums plus the binomial-ratio sum that the graph and
matroid checks reduce to.  Everything here is exact: counts are Python
ints, ratios are ``fractions.Fraction`` values in lowest terms.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction

__all__ = [
    "binomial",
    "stirling2",
    "alt_stirling_sum_a",
    "alt_stirling_sum_b",
    "binom_ratio_sum",
]


def binomial(n: int, k: int) -> int:
    """Binomial coefficient C(n, k).

    Defined for n >= 0; returns 0 when k is outside [0, n] so that sums
    over out-of-range indices vanish term by term.
    """
    if n < 0:
        raise ValueError(f"binomial requires n >= 0, got n={n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


# Rows of the Stirling triangle, _stirling_rows[n][k] = S(n, k).  Rows are
# appended under the lock and never mutated afterwards, so lock-free reads
# of completed rows are safe.
_stirling_rows: list[list[int]] = [[1]]
_stirling_lock = threading.Lock()


def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind S(n, k).

    Counts the partitions of an n-element set into exactly k nonempty
    blocks, via the triangular recurrence

        S(n, k) = k * S(n-1, k) + S(n-1, k-1)

    with S(0, 0) = 1.  Out-of-triangle arguments (k > n) give 0; negative
    arguments raise ValueError.
    """
    if n < 0 or k < 0:
        raise ValueError(f"stirling2 requires n, k >= 0, got n={n}, k={k}")
    if k > n:
        return 0
    if n >= len(_stirling_rows):
        with _stirling_lock:
            while len(_stirling_rows) <= n:
                prev = _stirling_rows[-1]
                r = len(_stirling_rows)
                row = [0] * (r + 1)
                for j in range(1, r):
                    row[j] = j * prev[j] + prev[j - 1]
                row[r] = 1
                _stirling_rows.append(row)
    return _stirling_rows[n][k]


def alt_stirling_sum_a(n: int) -> int:
    """Signed Stirling sum with weight (k-1)!, equal to 0 for all n >= 2.

    Computes sum_{k=1}^{n} (-1)^(k-1) (k-1)! S(n, k).  The cancellation of
    this sum is what makes the non-split contributions drop out of the
    partition form of the split-count aggregate.
    """
    if n < 2:
        raise ValueError(f"alt_stirling_sum_a requires n >= 2, got n={n}")
    return sum(
        (-1) ** (k - 1) * math.factorial(k - 1) * stirling2(n, k)
        for k in range(1, n + 1)
    )


def alt_stirling_sum_b(n: int) -> int:
    """Signed Stirling sum with weight (k-2)!, equal to n - 1 for n >= 1.

    Computes sum_{k=2}^{n} (-1)^k (k-2)! S(n, k); the empty sum at n = 1
    is 0.  This is the scalar identity behind the average stopping-time
    value on connected graphs.
    """
    if n < 1:
        raise ValueError(f"alt_stirling_sum_b requires n >= 1, got n={n}")
    return sum(
        (-1) ** k * math.factorial(k - 2) * stirling2(n, k)
        for k in range(2, n + 1)
    )


def binom_ratio_sum(n: int, m: int) -> Fraction:
    """Exact value of sum_{t=0}^{m} C(m, t) / C(n, t) for 0 <= m <= n.

    Closed form: (n + 1) / (n + 1 - m).  The sum itself is returned (the
    closed form lives in the tests), as it is the building block for
    expected stopping times.
    """
    if not 0 <= m <= n:
        raise ValueError(f"binom_ratio_sum requires 0 <= m <= n, got m={m}, n={n}")
    return sum(
        (Fraction(binomial(m, t), binomial(n, t)) for t in range(m + 1)),
        start=Fraction(0),
    )
