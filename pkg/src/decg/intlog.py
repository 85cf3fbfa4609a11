"""Exact integer comparisons against powers of e.

Floating-point log() is untrustworthy exactly where it matters here: when an
integer sits next to a power of e.  These helpers bracket e by the rational
partial sums of its series, so every verdict is certified by two exact
Fraction comparisons.  The bracket width is below 1e-47, far tighter than the
distance from any relevant power of e to its nearest integer.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .errors import PrecisionLoss

_SERIES_TERMS = 40


@lru_cache(maxsize=1)
def _e_bounds() -> tuple[Fraction, Fraction]:
    # lo = sum_{j<=J} 1/j!,  remainder < 2/(J+1)!
    lo = Fraction(1)
    term = Fraction(1)
    for j in range(1, _SERIES_TERMS + 1):
        term /= j
        lo += term
    hi = lo + 2 * term / (_SERIES_TERMS + 1)
    return lo, hi


def floor_ln(n: int) -> int:
    """Largest m >= 0 with e**m <= n, for an integer n >= 1."""
    if n < 1:
        raise ValueError(f"floor_ln requires n >= 1, got {n}")
    lo, hi = _e_bounds()
    m = 0
    lom = Fraction(1)
    him = Fraction(1)
    while True:
        lon, hin = lom * lo, him * hi
        if hin <= n:
            m += 1
            lom, him = lon, hin
            continue
        if lon > n:
            return m
        raise PrecisionLoss(f"cannot certify floor_ln({n}) at m={m + 1}")


def ceil_exp(j: int) -> int:
    """Smallest integer N with N >= e**j, for j >= 0."""
    if j < 0:
        raise ValueError(f"ceil_exp requires j >= 0, got {j}")
    lo, hi = _e_bounds()
    loj = lo**j
    c = math.ceil(hi**j)
    if Fraction(c - 1) < loj:
        return c
    raise PrecisionLoss(f"cannot certify ceil_exp({j})")
