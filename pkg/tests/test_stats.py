import math
import random
from fractions import Fraction

import pytest

from cmfactors.eccurve import get_curve
from cmfactors.primesieve import SpfTable
from cmfactors.quadorder import QuadInt, maximal_orders, norm, order, phi_ideal
from cmfactors.stats import (
    _scan_chunk,
    bt_counter,
    bt_ratio,
    comaximal,
    decomposition_check,
    duke_tail,
    li,
    merge,
    phi_element,
    scan,
    schur_sum,
    trivlem_check,
    wintner_slope,
    wintner_sum,
)

O1 = order(-1)


# --- scan and accumulator -----------------------------------------------------


def test_scan_example_to_20(curve_d4):
    res = scan(curve_d4, 20)
    assert res.accumulator.sum_dp == 16
    by_p = {r.p: r.d_p for r in res.records}
    assert by_p == {2: 0, 3: 2, 5: 2, 7: 2, 11: 2, 13: 2, 17: 4, 19: 2}


def test_scan_example_to_4(curve_d4):
    res = scan(curve_d4, 4)
    assert res.accumulator.sum_dp == 2
    assert [(r.p, r.kind) for r in res.records] == [(2, "bad"), (3, "small")]


def test_scan_rejects_tiny_bound(curve_d4):
    with pytest.raises(ValueError):
        scan(curve_d4, 1)


def test_merge_equals_monolithic(curve_d4):
    x = 2 * 10**4
    mono = scan(curve_d4, x, seed=5)
    chunked = scan(curve_d4, x, seed=5, chunk_primes=512)
    assert chunked.accumulator == mono.accumulator
    assert chunked.records == mono.records


def test_merge_random_chunkings(curve_d4):
    x = 10**5
    rng = random.Random(17)
    reference = scan(curve_d4, x, seed=0, checkpoints=[100, 5000]).accumulator
    for _ in range(4):
        acc = scan(
            curve_d4,
            x,
            seed=0,
            checkpoints=[100, 5000],
            chunk_primes=rng.randint(500, 9000),
        ).accumulator
        assert acc == reference


def test_merge_commutative_associative(curve_d4):
    primes = [p for p in range(2, 200) if all(p % q for q in range(2, p))]
    cut1, cut2 = 20, 100
    part = lambda lo, hi, idx: _scan_chunk(
        curve_d4, [p for p in primes if lo <= p <= hi], lo, hi, 0, idx, (), False
    )[0]
    a = part(2, cut1, 0)
    b = part(cut1 + 1, cut2, 1)
    c = part(cut2 + 1, 199, 2)
    assert merge(a, b) == merge(b, a)
    assert merge(merge(a, b), c) == merge(a, merge(b, c))
    with pytest.raises(ValueError):
        merge(a, c)


def test_accumulator_consistency(curve_d4):
    acc = scan(curve_d4, 10**4, checkpoints=[10, 100, 1000]).accumulator
    assert acc.sum_dp == sum(d * c for d, c in acc.hist_dp.items())
    assert acc.pi_x == 1229
    xs = [c.x for c in acc.checkpoints]
    assert xs == sorted(xs)
    for earlier, later in zip(acc.checkpoints, acc.checkpoints[1:]):
        assert later.sum_dp >= earlier.sum_dp
        assert later.sum_ep >= earlier.sum_ep


def test_checkpoint_values(curve_d4):
    acc = scan(curve_d4, 100, checkpoints=[20, 100]).accumulator
    assert acc.checkpoints[0] == (20, 16, 34, 8)
    assert acc.checkpoints[1].pi_x == 25


def test_parallel_scan_matches_serial(curve_d4):
    serial = scan(curve_d4, 5 * 10**4, seed=2, checkpoints=[10**4])
    parallel = scan(curve_d4, 5 * 10**4, seed=2, checkpoints=[10**4], workers=3,
                    chunk_primes=701)
    serial_chunked = scan(curve_d4, 5 * 10**4, seed=2, checkpoints=[10**4],
                          chunk_primes=701)
    assert parallel.records == serial_chunked.records
    assert parallel.accumulator == serial_chunked.accumulator
    # Chunking choices never change the values, only the rng streams.
    assert parallel.records == serial.records
    assert parallel.accumulator == serial.accumulator


# --- decomposition identity ----------------------------------------------------


def test_decomposition_example_20(curve_d4):
    lhs, rhs, equal = decomposition_check(curve_d4, 20)
    assert (lhs, rhs, equal) == (16, 16, True)


def test_decomposition_example_4(curve_d4):
    lhs, rhs, equal = decomposition_check(curve_d4, 4)
    assert (lhs, rhs, equal) == (2, 2, True)


def test_decomposition_exact_at_1e4():
    for label in ("j1728-D4", "j-3375-D7"):
        curve = get_curve(label)
        lhs, rhs, equal = decomposition_check(curve, 10**4)
        assert equal, (label, lhs, rhs)


def test_decomposition_reuses_records(curve_d4):
    records = scan(curve_d4, 2000).records
    lhs, rhs, equal = decomposition_check(curve_d4, 2000, records=records)
    assert equal
    assert lhs == sum(r.d_p for r in records)


# --- Brun-Titchmarsh countering -------------------------------------------------


def test_bt_examples():
    mu = QuadInt(3, 0, O1)
    one = QuadInt(1, 0, O1)
    assert bt_counter(50, mu, one) == 5
    assert bt_counter(10, mu, one) == 0
    assert bt_counter(10, QuadInt(1, 0, O1), one) == 16


def test_bt_preconditions():
    mu = QuadInt(3, 0, O1)
    with pytest.raises(ValueError):
        bt_counter(5, mu, QuadInt(1, 0, O1))  # Nm(mu) not < x
    with pytest.raises(ValueError):
        bt_counter(50, mu, QuadInt(3, 3, O1))  # not comaximal
    with pytest.raises(ValueError):
        bt_counter(50, QuadInt(3, 0, order(-3, 2)), QuadInt(1, 0, order(-3, 2)))


def test_comaximal():
    assert comaximal(QuadInt(3, 0, O1), QuadInt(1, 0, O1))
    assert not comaximal(QuadInt(2, 0, O1), QuadInt(1, 1, O1))  # both even norm


def test_phi_element_matches_phi_ideal():
    for od in maximal_orders()[:5]:
        for d in (1, 2, 3, 4, 5, 6, 9, 10, 12):
            assert phi_element(QuadInt(d, 0, od)) == phi_ideal(d, od)


def test_phi_element_split_prime():
    # (2+i) has norm 5, a degree-one prime: Phi = 4.
    assert phi_element(QuadInt(2, 1, O1)) == 4


def test_bt_ratio_bounded():
    # Diagnostic shadow of the upper bound: frozen family, frozen bound.
    one = QuadInt(1, 0, O1)
    for mu_coords in [(2, 0), (3, 0), (4, 0), (1, 1), (2, 1)]:
        mu = QuadInt(*mu_coords, O1)
        assert bt_ratio(2000, mu, one) <= 8.0


# --- Schur and Wintner sums -----------------------------------------------------


def test_schur_examples():
    assert schur_sum(1) == 1
    assert schur_sum(3) == Fraction(353, 16)


def test_schur_exact_vs_float():
    exact = schur_sum(2000, exact=True)
    approx = schur_sum(2000, exact=False)
    assert abs(float(exact) - approx) < 1e-9 * approx


def test_schur_growth_is_linear():
    r4 = schur_sum(10**4, exact=False) / 10**4
    r5 = schur_sum(10**5, exact=False) / 10**5
    assert abs(r5 / r4 - 1) < 0.05


def test_wintner_examples():
    assert wintner_sum(2) == Fraction(5, 4)
    # Direct summation oracle over d <= 10.
    table = SpfTable(10)
    expected = Fraction(0)
    for d in range(1, 11):
        if table.moebius_sq(d):
            expected += Fraction(table.euler_phi(d), d * d)
    assert expected == Fraction(16319, 8820)
    assert wintner_sum(10) == expected


def test_wintner_slope_stability():
    r5 = wintner_slope(10**5)
    r6 = wintner_slope(10**6)
    assert 0.9 <= r6 / r5 <= 1.1


# --- squarefree restriction inequality -------------------------------------------


def test_trivlem_example():
    res = trivlem_check(lambda p: Fraction(1), 2, 4)
    assert res.lhs == 2
    assert res.rhs == Fraction(3, 2)
    assert res.holds


def test_trivlem_k1_is_equality():
    res = trivlem_check(lambda p: Fraction(1, 3), 1, 50)
    assert res.lhs == res.rhs
    assert res.holds


def test_trivlem_randomized():
    rng = random.Random(7)
    table = SpfTable(1000)
    primes = [p for p in range(2, 1001) if all(p % q for q in range(2, math.isqrt(p) + 1))]
    for _ in range(200):
        gmap = {p: Fraction(rng.randint(0, 8), 4) for p in primes}
        k = rng.randint(1, 100)
        t = rng.randint(1, 1000)
        res = trivlem_check(lambda p: gmap[p], k, t, table=table)
        assert res.holds


# --- tail table -------------------------------------------------------------------


def test_duke_tail_examples(curve_d4):
    records = scan(curve_d4, 20).records
    rows = duke_tail(records, [1, 3, math.sqrt(20) + 1])
    by_T = {row[1]: row for row in rows}
    assert by_T[1][4] == 1.0
    assert by_T[3][2] == 1 and by_T[3][3] == 7
    assert by_T[math.sqrt(20) + 1][4] == 0.0


def test_duke_tail_multiple_checkpoints(curve_d4):
    records = scan(curve_d4, 100).records
    rows = duke_tail(records, [2], xs=[20, 100])
    assert [r[0] for r in rows] == [20, 100]
    for _, _, num, den, frac in rows:
        assert 0 <= num <= den
        assert frac == num / den


# --- logarithmic integral ----------------------------------------------------------


def _li_series(y: float) -> float:
    """Independent oracle: li(y) = gamma + ln ln y + sum (ln y)^n / (n n!)."""
    gamma = 0.5772156649015328606
    def li_point(v):
        L = math.log(v)
        total = gamma + math.log(L)
        term = 1.0
        for n in range(1, 400):
            term *= L / n
            add = term / n
            total += add
            if add < 1e-17 * abs(total) and n > L:
                break
        return total
    return li_point(y) - li_point(2.0)


@pytest.mark.parametrize("y", [10.0, 1e4, 1e8, 1e12, 1e14])
def test_li_quadrature_matches_series(y):
    assert abs(li(y) - _li_series(y)) <= 1e-8 * _li_series(y)


def test_sum_ep_ratio_strictly_inside_unit_interval(curve_d4):
    acc = scan(curve_d4, 10**4, checkpoints=[10**4]).accumulator
    cp = acc.checkpoints[0]
    ratio = cp.sum_ep / li(float(cp.x) ** 2)
    assert 0.0 < ratio < 1.0
