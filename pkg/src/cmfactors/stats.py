"""Aggregation and the empirical checks built on the per-prime records.

Covers the mergeable scan accumulator, the exact divisor decomposition of
sum d_p, the Brun-Titchmarsh prime-element counter, the Schur and Wintner
mean-value sums, the squarefree restriction inequality, and the tail table
for the normal size of d_p.  Identity checks use exact integer or rational
arithmetic; only diagnostic ratios go through floating point.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from multiprocessing import Pool
from typing import Callable, Iterable, NamedTuple

import numpy as np
from scipy.integrate import quad

from .cornacchia import INERT, RAMIFIED, SPLIT, solve_norm, splitting_type
from .eccurve import CmCurve
from .frobenius import PrimeRecord, dp_ep
from .primesieve import SpfTable, primes_array, primes_upto
from .quadorder import OrderDesc, QuadInt, conj, norm, units

CHUNK_PRIMES = 1 << 16


class Checkpoint(NamedTuple):
    x: int
    sum_dp: int
    sum_ep: int
    pi_x: int


@dataclass
class SumAccumulator:
    """Mergeable aggregate over a contiguous range of prime values.

    Covers primes p with x_lo <= p <= x_processed.  Merging contiguous
    accumulators is exactly equivalent to one monolithic accumulation,
    field for field, checkpoints included.
    """

    x_lo: int
    x_processed: int
    sum_dp: int = 0
    sum_ep: int = 0
    count_ord: int = 0
    count_ss: int = 0
    count_bad: int = 0
    count_small: int = 0
    hist_dp: dict[int, int] = field(default_factory=dict)
    checkpoints: list[Checkpoint] = field(default_factory=list)

    @property
    def pi_x(self) -> int:
        return self.count_ord + self.count_ss + self.count_bad + self.count_small

    def accumulate(self, rec: PrimeRecord) -> None:
        self.sum_dp += rec.d_p
        self.sum_ep += rec.e_p
        if rec.kind == "ord":
            self.count_ord += 1
        elif rec.kind == "ss":
            self.count_ss += 1
        elif rec.kind == "bad":
            self.count_bad += 1
        else:
            self.count_small += 1
        self.hist_dp[rec.d_p] = self.hist_dp.get(rec.d_p, 0) + 1

    def snapshot(self, x: int) -> None:
        self.checkpoints.append(Checkpoint(x, self.sum_dp, self.sum_ep, self.pi_x))


def merge(a: SumAccumulator, b: SumAccumulator) -> SumAccumulator:
    """Combine two accumulators over adjacent ranges (in either argument order)."""
    if b.x_lo < a.x_lo:
        a, b = b, a
    if b.x_lo != a.x_processed + 1:
        raise ValueError(
            f"ranges [{a.x_lo},{a.x_processed}] and [{b.x_lo},{b.x_processed}] "
            "are not contiguous"
        )
    hist = dict(a.hist_dp)
    for k, v in b.hist_dp.items():
        hist[k] = hist.get(k, 0) + v
    shifted = [
        Checkpoint(c.x, c.sum_dp + a.sum_dp, c.sum_ep + a.sum_ep, c.pi_x + a.pi_x)
        for c in b.checkpoints
    ]
    return SumAccumulator(
        x_lo=a.x_lo,
        x_processed=b.x_processed,
        sum_dp=a.sum_dp + b.sum_dp,
        sum_ep=a.sum_ep + b.sum_ep,
        count_ord=a.count_ord + b.count_ord,
        count_ss=a.count_ss + b.count_ss,
        count_bad=a.count_bad + b.count_bad,
        count_small=a.count_small + b.count_small,
        hist_dp=hist,
        checkpoints=a.checkpoints + shifted,
    )


@dataclass
class ScanResult:
    accumulator: SumAccumulator
    records: list[PrimeRecord] | None


def _scan_chunk(
    curve: CmCurve,
    primes_chunk: list[int],
    lo: int,
    hi: int,
    seed,
    chunk_index: int,
    checkpoints: tuple[int, ...],
    keep_records: bool,
):
    rng = random.Random(f"{seed}:{chunk_index}")
    acc = SumAccumulator(x_lo=lo, x_processed=hi)
    recs: list[PrimeRecord] | None = [] if keep_records else None
    pending = sorted(x for x in checkpoints if lo <= x <= hi)
    ci = 0
    for p in primes_chunk:
        while ci < len(pending) and pending[ci] < p:
            acc.snapshot(pending[ci])
            ci += 1
        rec = dp_ep(p, curve, rng)
        acc.accumulate(rec)
        if recs is not None:
            recs.append(rec)
    while ci < len(pending):
        acc.snapshot(pending[ci])
        ci += 1
    return acc, recs


def _scan_chunk_star(args):
    return _scan_chunk(*args)


def scan(
    curve: CmCurve,
    x_max: int,
    seed=0,
    checkpoints: Iterable[int] = (),
    workers: int = 1,
    keep_records: bool = True,
    chunk_primes: int = CHUNK_PRIMES,
) -> ScanResult:
    """Fold dp_ep over all primes <= x_max.

    Primes are processed in fixed-size chunks with per-chunk RNG streams,
    so the record stream is reproducible regardless of worker count.
    """
    if x_max < 2:
        raise ValueError("x_max must be at least 2")
    cps = tuple(sorted(set(int(x) for x in checkpoints)))
    primes = primes_array(x_max).tolist()
    jobs = []
    lo = 2
    for i in range(0, max(len(primes), 1), chunk_primes):
        chunk = primes[i : i + chunk_primes]
        hi = x_max if i + chunk_primes >= len(primes) else int(chunk[-1])
        jobs.append((curve, chunk, lo, hi, seed, len(jobs), cps, keep_records))
        lo = hi + 1
    if workers > 1 and len(jobs) > 1:
        with Pool(min(workers, len(jobs))) as pool:
            parts = list(pool.imap(_scan_chunk_star, jobs))
    else:
        parts = [_scan_chunk(*job) for job in jobs]
    acc, recs = parts[0]
    for nxt_acc, nxt_recs in parts[1:]:
        acc = merge(acc, nxt_acc)
        if recs is not None:
            recs.extend(nxt_recs)
    return ScanResult(acc, recs)


def decomposition_check(
    curve: CmCurve,
    x: int,
    seed=0,
    records: list[PrimeRecord] | None = None,
) -> tuple[int, int, bool]:
    """Exact identity sum_{p<=x} d_p = sum_{d<=2 sqrt x} phi(d) #{good p: d | d_p}.

    Counts divisors of every good record's d_p, weights by phi, and compares
    with the direct sum; returns (lhs, rhs, lhs == rhs).
    """
    if records is None:
        records = scan(curve, x, seed=seed).records
    table = SpfTable(max(2 * math.isqrt(x) + 2, 16))
    lhs = 0
    div_counts: dict[int, int] = {}
    for rec in records:
        if rec.kind == "bad" or rec.p > x:
            continue
        lhs += rec.d_p
        for d in table.divisors(rec.d_p):
            div_counts[d] = div_counts.get(d, 0) + 1
    rhs = sum(table.euler_phi(d) * c for d, c in div_counts.items())
    return lhs, rhs, lhs == rhs


# --- Brun-Titchmarsh prime-element counting ---------------------------------


def _ramified_generator(order: OrderDesc, p: int) -> QuadInt:
    g = order.g
    if p == 2:
        return QuadInt(1, 1, order) if g == -1 else QuadInt(0, 1, order)
    # Odd ramified prime is |g| for g = 1 mod 4; sqrt(g) = 2*omega - 1.
    return QuadInt(-1, 2, order)


def prime_elements_above(p: int, order: OrderDesc) -> list[QuadInt]:
    """Generators (one per prime ideal over p), not expanded by units."""
    st = splitting_type(p, order)
    if st == SPLIT:
        pi0 = solve_norm(p, order)
        return [pi0, conj(pi0)]
    if st == RAMIFIED:
        return [_ramified_generator(order, p)]
    return [QuadInt(p, 0, order)]


def qi_divides(mu: QuadInt, z: QuadInt) -> bool:
    """Whether mu divides z in the order: z * conj(mu) = 0 mod Nm(mu)."""
    n = norm(mu)
    if n == 0:
        raise ValueError("division by zero element")
    q = z * conj(mu)
    return q.a % n == 0 and q.b % n == 0


def phi_element(mu: QuadInt) -> int:
    """Phi of the principal ideal (mu): the unit count of O_K / mu O_K."""
    if not mu.order.is_maximal():
        raise ValueError("maximal orders only")
    n = norm(mu)
    if n == 0:
        raise ValueError("Phi of the zero ideal is undefined")
    result = n
    for p, _ in _factor_small(n):
        for gen in prime_elements_above(p, mu.order):
            if qi_divides(gen, mu):
                np_ = norm(gen)
                result = result // np_ * (np_ - 1)
    return result


def _factor_small(n: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def comaximal(mu: QuadInt, alpha: QuadInt) -> bool:
    """No prime ideal divides both (mu) and (alpha)."""
    n = norm(mu)
    if n == 0 or norm(alpha) == 0:
        return False
    for p, _ in _factor_small(math.gcd(n, norm(alpha))):
        for gen in prime_elements_above(p, mu.order):
            if qi_divides(gen, mu) and qi_divides(gen, alpha):
                return False
    return True


def bt_counter(x: int, mu: QuadInt, alpha: QuadInt) -> int:
    """#{prime elements pi: Nm(pi) <= x, pi = alpha (mod mu)}.

    Associates count separately; inert and ramified prime elements are
    included when their norms fit.
    """
    order = mu.order
    if not order.is_maximal():
        raise ValueError("maximal orders only")
    if alpha.order != order:
        raise ValueError("mu and alpha must live in the same order")
    if norm(mu) >= x:
        raise ValueError("need Nm(mu) < x")
    if not comaximal(mu, alpha):
        raise ValueError("(mu) and (alpha) must be comaximal")
    us = units(order)
    count = 0
    for p in primes_upto(x):
        st = splitting_type(p, order)
        if st == INERT:
            if p * p > x:
                continue
            gens = [QuadInt(p, 0, order)]
        elif st == SPLIT:
            pi0 = solve_norm(p, order)
            gens = [pi0, conj(pi0)]
        else:
            gens = [_ramified_generator(order, p)]
        for gen in gens:
            for u in us:
                if qi_divides(mu, u * gen - alpha):
                    count += 1
    return count


def bt_ratio(x: int, mu: QuadInt, alpha: QuadInt) -> float:
    """count * Phi(mu) * log(x / Nm(mu)) / x, the bounded Brun-Titchmarsh ratio."""
    count = bt_counter(x, mu, alpha)
    return count * phi_element(mu) * math.log(x / norm(mu)) / x


# --- Multiplicative-sum diagnostics ------------------------------------------


def _phi_sieve(t: int) -> np.ndarray:
    phi = np.arange(t + 1, dtype=np.int64)
    for p in range(2, t + 1):
        if phi[p] == p:  # p prime
            phi[p::p] -= phi[p::p] // p
    return phi


def _squarefree_sieve(t: int) -> np.ndarray:
    sq = np.ones(t + 1, dtype=bool)
    for p in range(2, math.isqrt(t) + 1):
        sq[p * p :: p * p] = False
    return sq


EXACT_SUM_BOUND = 20000


def schur_sum(t: int, exact: bool | None = None):
    """sum_{m<=t} m^4 / phi(m)^4; exact Fraction for small t, float beyond."""
    if t < 1:
        raise ValueError("t must be positive")
    if t > 10**7:
        raise ValueError("t beyond the supported range")
    if exact is None:
        exact = t <= EXACT_SUM_BOUND
    phi = _phi_sieve(t)
    if exact:
        return sum(Fraction(m, int(phi[m])) ** 4 for m in range(1, t + 1))
    ratios = np.arange(t + 1, dtype=np.float64)
    ratios[1:] /= phi[1:]
    return float(np.sum(ratios[1:] ** 4))


def wintner_sum(Z: int, exact: bool | None = None):
    """sum_{d<=Z} mu^2(d) phi(d) / d^2."""
    if Z < 1:
        raise ValueError("Z must be positive")
    if exact is None:
        exact = Z <= EXACT_SUM_BOUND
    phi = _phi_sieve(Z)
    sq = _squarefree_sieve(Z)
    if exact:
        return sum(
            Fraction(int(phi[d]), d * d) for d in range(1, Z + 1) if sq[d]
        )
    ds = np.arange(Z + 1, dtype=np.float64)
    terms = np.zeros(Z + 1)
    terms[1:] = phi[1:] / ds[1:] ** 2
    terms[~sq] = 0.0
    return float(terms[1:].sum())


def wintner_slope(Z: int) -> float:
    """wintner_sum(Z) / log Z; stabilizes because the summand has a mean value."""
    if Z < 2:
        raise ValueError("Z must be at least 2")
    return float(wintner_sum(Z, exact=False)) / math.log(Z)


# --- Squarefree restriction inequality ---------------------------------------


class TrivlemResult(NamedTuple):
    lhs: Fraction
    rhs: Fraction
    holds: bool


def trivlem_check(
    g: Callable[[int], Fraction] | dict[int, Fraction],
    k: int,
    t: int,
    table: SpfTable | None = None,
) -> TrivlemResult:
    """Exact check of the coprime-restriction lower bound for multiplicative g.

    lhs = sum over squarefree n <= t coprime to k of prod_{p|n} g(p);
    rhs = (prod_{p|k} (1 + g(p))^-1) * (same sum without the coprimality).
    Returns both sides and whether lhs >= rhs.
    """
    if table is None or table.bound < t:
        table = SpfTable(max(t, max(k, 2), 16))
    if callable(g):
        gfun = g
    else:
        gfun = lambda p: g.get(p, Fraction(0))
    lhs = Fraction(0)
    total = Fraction(0)
    for n in range(1, t + 1):
        fac = table.factorize(n)
        if any(e > 1 for _, e in fac):
            continue
        val = Fraction(1)
        for p, _ in fac:
            val *= gfun(p)
        total += val
        if math.gcd(n, k) == 1:
            lhs += val
    rhs = total
    for p, _ in table.factorize(k):
        rhs /= 1 + gfun(p)
    return TrivlemResult(lhs, rhs, lhs >= rhs)


# --- Tail table for the normal size of d_p -----------------------------------


def duke_tail(
    records: list[PrimeRecord],
    thresholds: Iterable[float],
    xs: Iterable[int] | None = None,
) -> list[tuple[int, float, int, int, float]]:
    """Rows (x, T, #{good p <= x: d_p > T}, #good p <= x, fraction)."""
    recs = sorted((r for r in records if r.kind != "bad"), key=lambda r: r.p)
    if xs is None:
        xs = [recs[-1].p] if recs else []
    rows = []
    for x in xs:
        good = [r for r in recs if r.p <= x]
        denom = len(good)
        for T in thresholds:
            num = sum(1 for r in good if r.d_p > T)
            rows.append((x, T, num, denom, num / denom if denom else 0.0))
    return rows


# --- Logarithmic integral -----------------------------------------------------


def li(y: float, rel_tol: float = 1e-9) -> float:
    """Li(y) = integral from 2 to y of dt / log t, by adaptive quadrature.

    Substituting t = e^u and integrating over unit panels keeps the
    quadrature well conditioned out to very large y.
    """
    if y <= 2:
        return 0.0
    lo = math.log(2.0)
    hi = math.log(y)
    total = 0.0
    u = lo
    while u < hi:
        v = min(u + 1.0, hi)
        val, _ = quad(lambda w: math.exp(w) / w, u, v, epsrel=rel_tol, epsabs=0.0)
        total += val
        u = v
    return total
