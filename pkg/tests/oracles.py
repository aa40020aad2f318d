"""Independent oracles used by the test suite.

These deliberately avoid the code paths they check: combinatorial
recurrences and brute-force formulas only.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache


def fdb_coefficient_closed_form(alpha) -> int:
    """Classical composition-derivative coefficient: nu! / prod_j (alpha_j! (j!)^alpha_j)."""
    alpha = tuple(alpha)
    nu = sum(j * a for j, a in enumerate(alpha, start=1))
    denom = 1
    for j, a in enumerate(alpha, start=1):
        denom *= math.factorial(a) * math.factorial(j) ** a
    num = math.factorial(nu)
    assert num % denom == 0
    return num // denom


@lru_cache(maxsize=None)
def bell_number(nu: int) -> int:
    """Bell numbers by the recurrence B(n+1) = sum_k C(n,k) B(k)."""
    if nu == 0:
        return 1
    n = nu - 1
    return sum(math.comb(n, k) * bell_number(k) for k in range(n + 1))


@lru_cache(maxsize=None)
def partition_count(n: int, k: int) -> int:
    """Partitions of n into exactly k parts: p(n,k) = p(n-1,k-1) + p(n-k,k)."""
    if n == 0 and k == 0:
        return 1
    if n <= 0 or k <= 0 or k > n:
        return 0
    return partition_count(n - 1, k - 1) + partition_count(n - k, k)


def hockey_stick_lhs(p: int, q: int) -> Fraction:
    """sum_{j=0..q} (j+p)!/j! by direct summation."""
    return sum((Fraction(math.factorial(j + p), math.factorial(j)) for j in range(q + 1)), Fraction(0))


def hockey_stick_rhs(p: int, q: int) -> Fraction:
    """(q+p+1)! / (q! (p+1))."""
    return Fraction(math.factorial(q + p + 1), math.factorial(q) * (p + 1))
