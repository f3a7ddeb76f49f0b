"""Bernoulli numbers (B_1 = -1/2) and Bernoulli polynomials."""

from __future__ import annotations

import threading
from fractions import Fraction
from math import comb


class BernoulliCache:
    """Grow-only memo of B_0, B_1, ... built from the binomial recurrence.

    Readers index the list without locking; a list element is published by
    ``append`` only once fully computed, so a reader never sees a partial value.
    """

    def __init__(self):
        self.table: list[Fraction] = [Fraction(1)]
        self._lock = threading.Lock()

    def get(self, n: int) -> Fraction:
        if n < 0:
            raise ValueError("n must be >= 0")
        table = self.table
        if n < len(table):
            return table[n]
        with self._lock:
            while len(table) <= n:
                m = len(table)
                # sum_{k=0}^{m} binom(m+1, k) B_k = 0
                if m >= 3 and m % 2:
                    table.append(Fraction(0))
                    continue
                acc = sum((comb(m + 1, k) * table[k] for k in range(m) if table[k]), Fraction(0))
                table.append(-acc / (m + 1))
        return table[n]


_CACHE = BernoulliCache()


def bernoulli_number(n: int) -> Fraction:
    return _CACHE.get(n)


def bernoulli_poly(n: int, x):
    """``B_n(x) = sum_k binom(n, k) B_k x^(n-k)``, exact for rational or surd ``x``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    # Horner in x over the coefficients binom(n,k) B_k (k = n - power)
    acc = None
    for power in range(n, -1, -1):
        c = comb(n, n - power) * bernoulli_number(n - power)
        acc = c if acc is None else acc * x + c
    if n == 0 and not isinstance(x, (int, Fraction)):
        return x * 0 + acc
    return acc
