"""Per-prime classification and invariant factors via Frobenius arithmetic.

For a good ordinary prime, the Frobenius element pi_p has norm p; the group
order is Nm(pi_p - 1) and the first invariant factor is the content of
pi_p - 1.  Cornacchia only pins pi_p down to a unit multiple, so the right
candidate is selected by testing candidate orders and exponents against
random points.  Supersingular primes need no group work at all: d_p <= 2,
with d_p = 2 exactly when the division cubic splits.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .cornacchia import SPLIT, solve_norm, splitting_type
from .eccurve import CmCurve, _scalar_mul, cubic_splits, negate, random_point
from .oracle import count_points, group_structure
from .quadorder import QuadInt, conj, content, trace, units

BAD = "bad"
ORDINARY = "ord"
SUPERSINGULAR = "ss"
SMALL = "small"

KINDS = (BAD, ORDINARY, SUPERSINGULAR, SMALL)

MAX_SAMPLE_POINTS = 32


class AmbiguousFrobenius(RuntimeError):
    """Unit disambiguation failed; carries the offending prime."""

    def __init__(self, p: int):
        super().__init__(f"ambiguous Frobenius candidates at p={p}")
        self.p = p


@dataclass(frozen=True, slots=True)
class PrimeRecord:
    """One prime's worth of results; zeros where a field does not apply."""

    p: int
    kind: str
    a_p: int
    pi_a: int
    pi_b: int
    N: int
    d_p: int
    e_p: int


def classify(p: int, curve: CmCurve) -> str:
    if p in curve.bad_primes:
        return BAD
    if p <= 3:
        return SMALL
    if splitting_type(p, curve.order) == SPLIT:
        return ORDINARY
    return SUPERSINGULAR


def _default_rng(p: int) -> random.Random:
    return random.Random(f"cmfactors:{p}")


def frobenius_at(p: int, curve: CmCurve, rng=None) -> tuple[QuadInt, int]:
    """The Frobenius element (up to conjugation) and N = #E(F_p).

    Candidates are the unit multiples of a norm-p element; each claims a
    group order N_u = p + 1 - Tr(u pi0) and, via the content of u pi0 - 1,
    a full structure (d_u, e_u).  Random points kill wrong claims: first by
    the cheap order test (p+1)P = t_u P, then, among survivors, by the
    claimed exponent e_u P = infinity.  If sampling stalls, an exact point
    count settles it; only an impossible mismatch raises.
    """
    if rng is None:
        rng = _default_rng(p)
    pi0 = solve_norm(p, curve.order)
    if pi0 is None:
        raise ValueError(f"p={p} is not ordinary for {curve.label}")
    cands = []
    for u in units(curve.order):
        c = u * pi0
        t = trace(c)
        n = p + 1 - t
        d = content(c - 1)
        cands.append((c, t, n, d, n // d))
    # Full d-torsion forces d | p - 1 (Weil pairing); prune impossible claims.
    cands = [cd for cd in cands if (p - 1) % cd[3] == 0]
    a = curve.A % p
    for _ in range(MAX_SAMPLE_POINTS):
        if len(cands) <= 1:
            break
        P = random_point(curve, p, rng)
        R = _scalar_mul(p + 1, P, a, p)
        cache: dict[int, object] = {}
        survivors = []
        for cd in cands:
            t = cd[1]
            s = cache.get(abs(t))
            if s is None:
                s = _scalar_mul(abs(t), P, a, p)
                cache[abs(t)] = s
            if R == (s if t >= 0 else negate(s, p)):
                survivors.append(cd)
        cands = survivors
        if len(cands) <= 1:
            break
        cands = [cd for cd in cands if _scalar_mul(cd[4], P, a, p) is None]
    if len(cands) == 1:
        return cands[0][0], cands[0][2]
    # Sampling cannot separate claims whose exponents divide each other's
    # orders; the exact count is a last-resort discriminator.
    n_true = count_points(curve, p)
    matches = [cd for cd in cands if cd[2] == n_true]
    if len(matches) == 1:
        return matches[0][0], matches[0][2]
    raise AmbiguousFrobenius(p)


def dp_ep(p: int, curve: CmCurve, rng=None) -> PrimeRecord:
    """The full per-prime record: reduction type, a_p, pi_p, N, d_p, e_p."""
    kind = classify(p, curve)
    if kind == BAD:
        return PrimeRecord(p, BAD, 0, 0, 0, 0, 0, 0)
    if kind == SMALL:
        d, e = group_structure(curve, p)
        n = d * e
        return PrimeRecord(p, SMALL, p + 1 - n, 0, 0, n, d, e)
    if kind == ORDINARY:
        pi, n = frobenius_at(p, curve, rng)
        d = content(pi - 1)
        return PrimeRecord(p, ORDINARY, trace(pi), pi.a, pi.b, n, d, n // d)
    # Supersingular: N = p + 1 and d_p <= 2; full 2-torsion needs 4 | p + 1,
    # so the cubic can only split when p = 3 (mod 4).
    n = p + 1
    d = 2 if p % 4 == 3 and cubic_splits(curve, p) else 1
    return PrimeRecord(p, SUPERSINGULAR, 0, 0, 0, n, d, n // d)


def conjugation_invariant(pi: QuadInt) -> bool:
    """content(pi - 1) is blind to the conjugation ambiguity of pi."""
    return content(pi - 1) == content(conj(pi) - 1)


def validate_curve(curve: CmCurve, pmax: int = 1000) -> list[tuple[int, int, int]]:
    """Cross-check Frobenius-derived a_p against oracle point counts.

    Returns (p, a_p_pipeline, a_p_oracle) for every good p <= pmax where
    the two disagree; an empty list certifies the curve entry.  This is the
    validation gate that makes the curve table trustworthy data.
    """
    from .primesieve import primes_upto

    mismatches = []
    for p in primes_upto(pmax):
        if p in curve.bad_primes:
            continue
        n_oracle = count_points(curve, p)
        try:
            rec = dp_ep(p, curve)
        except AmbiguousFrobenius:
            # A mislabelled order leaves no consistent candidate at all.
            mismatches.append((p, None, p + 1 - n_oracle))
            continue
        if rec.N != n_oracle or rec.a_p != p + 1 - n_oracle:
            mismatches.append((p, rec.a_p, p + 1 - n_oracle))
    return mismatches
