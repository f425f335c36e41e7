"""Partition counts, conformal weights h_{p,r} and truncated character series."""

from __future__ import annotations

from functools import lru_cache

from .algebra import Rational, rational


@lru_cache(maxsize=None)
def partition_count(n: int) -> int:
    """Number of partitions of ``n`` (Euler's pentagonal recurrence)."""
    if n < 0:
        return 0
    if n == 0:
        return 1
    total = 0
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        if g1 > n:
            break
        sign = 1 if k % 2 else -1
        total += sign * partition_count(n - g1)
        g2 = k * (3 * k + 1) // 2
        if g2 <= n:
            total += sign * partition_count(n - g2)
        k += 1
    return total


def partition_p2(n: int) -> int:
    """Pairs of partitions of total size ``n``: ``sum_i P(n-i) P(i)``."""
    if n < 0:
        return 0
    return sum(partition_count(n - i) * partition_count(i) for i in range(n + 1))


def p2_series(N: int) -> list[int]:
    return [partition_p2(n) for n in range(N + 1)]


def h_pr(p: int, r: int, c_L) -> Rational:
    """``(1 - p^2)(c_L - 2)/24 + p(p - 1) + p(1 - r)/2``."""
    if p < 1 or r < 1:
        raise ValueError("p and r must be positive integers")
    return h_pr_any(p, r, c_L)


def h_pr_any(p: int, r: int, c_L) -> Rational:
    """Same formula without the positivity check (``r`` may be zero or negative)."""
    c_L = rational(c_L)
    return (1 - p * p) * (c_L - 2) / 24 + p * (p - 1) + rational(p * (1 - r)) / 2


def times_one_minus_q(series: list[int], k: int) -> list[int]:
    """Multiply a truncated series by ``(1 - q^k)``."""
    return [a - (series[n - k] if n >= k else 0) for n, a in enumerate(series)]


def shift(series: list[int], k: int) -> list[int]:
    """Multiply by ``q^k`` keeping the truncation length."""
    return ([0] * k + series)[: len(series)] if k >= 0 else series[-k:] + [0] * (-k)


def verma_dims(N: int) -> list[int]:
    return p2_series(N)


def hv_irr_character(N: int, p: int | None) -> list[int]:
    """Graded dims of L^H(h, h_I): full Verma if irreducible, else ``(1 - q^p)`` times it."""
    s = p2_series(N)
    return s if p is None else times_one_minus_q(s, p)


def w22_irr_character(N: int, p: int | None, r: int | None) -> list[int]:
    """Graded dims of L^{W(2,2)}(h, h_W) from the character formulas."""
    s = p2_series(N)
    if p is None:
        return s
    s = times_one_minus_q(s, p)
    if r is not None:
        s = times_one_minus_q(s, r * p)
    return s


def telescoping_series(p: int, N: int) -> list[int]:
    """Truncation of ``sum_{i>=0} q^{ip} (1 - q^p)`` at order ``N``."""
    out = [0] * (N + 1)
    for i in range(N // p + 1):
        out[i * p] += 1
        if (i + 1) * p <= N:
            out[(i + 1) * p] -= 1
    return out


def telescoping_holds(p: int, N: int) -> bool:
    """Check that summing the shifted ``(1 - q^p)`` characters recovers the Verma character."""
    total = [0] * (N + 1)
    base = times_one_minus_q(p2_series(N), p)
    for i in range(N // p + 1):
        for n, a in enumerate(shift(base, i * p)):
            total[n] += a
    return telescoping_series(p, N) == [1] + [0] * N and total == p2_series(N)
