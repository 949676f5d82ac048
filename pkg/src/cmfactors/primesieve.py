"""Segmented sieve of Eratosthenes and a smallest-prime-factor table.

The sieve supplies the prime stream for scans (odd-only, numpy segments
sized to stay cache-resident).  The SPF table backs the arithmetic
functions phi, mu^2 and tau and exact factorization for the statistics
module; its bound defaults to 2*10^4, enough for the divisor decomposition
at scan bounds up to 10^8.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_SEGMENT_SIZE = 1 << 18
DEFAULT_SPF_BOUND = 2 * 10**4


def _simple_sieve(limit: int) -> np.ndarray:
    """All primes <= limit by a plain sieve (used for base primes and tests)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


@dataclass(frozen=True)
class PrimeRange:
    """Half-open-by-value prime source: yields exactly the primes in [lo, hi]."""

    lo: int
    hi: int
    segment_size: int = DEFAULT_SEGMENT_SIZE

    def __post_init__(self):
        if not (2 <= self.lo <= self.hi):
            raise ValueError("need 2 <= lo <= hi")
        if self.segment_size < 8:
            raise ValueError("segment_size too small")

    def __iter__(self):
        return iter(self.segments_flat())

    def segments_flat(self):
        for seg in self.segments():
            yield from seg.tolist()

    def segments(self):
        """Numpy arrays of primes, one per sieve segment, in increasing order."""
        lo, hi = self.lo, self.hi
        base = _simple_sieve(math.isqrt(hi))
        if lo <= 2 <= hi:
            yield np.array([2], dtype=np.int64)
        # Odd-only segments: each mask slot i represents the odd number low + 2i.
        low = max(lo, 3)
        if low % 2 == 0:
            low += 1
        span = 2 * self.segment_size
        odd_base = base[1:] if len(base) and base[0] == 2 else base
        while low <= hi:
            high = min(low + span, hi + 1)  # exclusive
            count = (high - low + 1) // 2
            mask = np.ones(count, dtype=bool)
            for p in odd_base.tolist():
                p2 = p * p
                if p2 >= high:
                    break
                start = max(p2, ((low + p - 1) // p) * p)
                if start % 2 == 0:
                    start += p
                if start < high:
                    mask[(start - low) // 2 :: p] = False
            seg = low + 2 * np.flatnonzero(mask).astype(np.int64)
            if len(seg):
                yield seg
            low = high if high % 2 == 1 else high + 1


def primes_upto(x: int, segment_size: int = DEFAULT_SEGMENT_SIZE):
    """Ordered stream of the primes <= x."""
    if x < 2:
        raise ValueError("x must be at least 2")
    return PrimeRange(2, x, segment_size).segments_flat()


def primes_array(x: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> np.ndarray:
    """All primes <= x as one int64 array."""
    if x < 2:
        raise ValueError("x must be at least 2")
    segs = list(PrimeRange(2, x, segment_size).segments())
    if not segs:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(segs)


class SpfTable:
    """Smallest-prime-factor table for exact factorization up to a bound."""

    def __init__(self, bound: int = DEFAULT_SPF_BOUND):
        if bound < 2:
            raise ValueError("bound must be at least 2")
        self.bound = bound
        spf = np.zeros(bound + 1, dtype=np.int64)
        for i in range(2, math.isqrt(bound) + 1):
            if spf[i] == 0:
                sl = spf[i * i :: i]
                sl[sl == 0] = i
        untouched = spf == 0
        untouched[:2] = False
        idx = np.flatnonzero(untouched)
        spf[idx] = idx
        self._spf = spf

    def _check(self, n: int):
        if n < 1:
            raise ValueError("n must be positive")
        if n > self.bound:
            raise ValueError(
                f"n={n} exceeds the factor table bound {self.bound}; "
                "build a larger SpfTable"
            )

    def factorize(self, n: int) -> list[tuple[int, int]]:
        """Prime factorization as (prime, exponent) pairs, increasing primes."""
        self._check(n)
        spf = self._spf
        out = []
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out

    def euler_phi(self, n: int) -> int:
        self._check(n)
        result = n
        for p, _ in self.factorize(n):
            result = result // p * (p - 1)
        return result

    def moebius_sq(self, n: int) -> int:
        self._check(n)
        return 1 if all(e == 1 for _, e in self.factorize(n)) else 0

    def tau(self, n: int) -> int:
        self._check(n)
        result = 1
        for _, e in self.factorize(n):
            result *= e + 1
        return result

    def divisors(self, n: int) -> list[int]:
        """All positive divisors, unsorted."""
        self._check(n)
        divs = [1]
        for p, e in self.factorize(n):
            divs = [d * p**j for d in divs for j in range(e + 1)]
        return divs


_default_table: SpfTable | None = None


def default_table(min_bound: int = DEFAULT_SPF_BOUND) -> SpfTable:
    """Shared SPF table, grown on demand."""
    global _default_table
    if _default_table is None or _default_table.bound < min_bound:
        _default_table = SpfTable(max(min_bound, DEFAULT_SPF_BOUND))
    return _default_table


def factorize(n: int, table: SpfTable | None = None) -> list[tuple[int, int]]:
    return (table or default_table()).factorize(n)


def euler_phi(n: int, table: SpfTable | None = None) -> int:
    return (table or default_table()).euler_phi(n)


def moebius_sq(n: int, table: SpfTable | None = None) -> int:
    return (table or default_table()).moebius_sq(n)


def tau(n: int, table: SpfTable | None = None) -> int:
    return (table or default_table()).tau(n)
