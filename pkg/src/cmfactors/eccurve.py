"""Short-Weierstrass arithmetic over F_p and the table of thirteen CM curves.

Points are affine (x, y) tuples with None standing for the point at
infinity.  The curve table ships as a human-readable data file; it is data,
not ground truth, and the test suite revalidates every entry against
brute-force point counts.
"""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .cornacchia import NoRoot, sqrt_mod
from .quadorder import ORDER_PARAMS, OrderDesc, order

Point = tuple[int, int] | None
INFINITY: Point = None


@dataclass(frozen=True)
class CmCurve:
    """y^2 = x^3 + A x + B with CM by `order`, plus its model-level bad primes."""

    label: str
    A: int
    B: int
    order: OrderDesc
    bad_primes: frozenset[int]

    def __post_init__(self):
        if 4 * self.A**3 + 27 * self.B**2 == 0:
            raise ValueError("singular model: 4A^3 + 27B^2 = 0")

    def rhs(self, x: int, p: int) -> int:
        return (x * x % p * x + self.A * x + self.B) % p


def model_bad_primes(A: int, B: int) -> frozenset[int]:
    """Primes where the short-Weierstrass model is singular.

    2 is always bad (every y^2 = cubic model is singular in characteristic
    2); odd primes are bad exactly when they divide 4A^3 + 27B^2.
    """
    disc = abs(4 * A**3 + 27 * B**2)
    bad = {2}
    while disc % 2 == 0:
        disc //= 2
    d = 3
    while d * d <= disc:
        if disc % d == 0:
            bad.add(d)
            while disc % d == 0:
                disc //= d
        d += 2
        if d > 10**6:
            raise ValueError("model discriminant too large to factor")
    if disc > 1:
        bad.add(disc)
    return frozenset(bad)


def custom_curve(A: int, B: int, g: int, f: int = 1, label: str | None = None) -> CmCurve:
    """User-supplied model; the caller claims CM by the (g, f) order.

    The claim is enforced by the same validation gate as the shipped table
    (see frobenius.validate_curve); a wrong (g, f) fails loudly there.
    """
    if label is None:
        label = f"custom-{A}-{B}"
    return CmCurve(label, A, B, order(g, f), model_bad_primes(A, B))


def _parse_table(text: str) -> list[CmCurve]:
    curves = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 6:
            raise ValueError(f"malformed curve record: {line!r}")
        label, a_s, b_s, g_s, f_s, bad_s = parts
        A, B, g, f = int(a_s), int(b_s), int(g_s), int(f_s)
        bad = frozenset(int(t) for t in bad_s.split(","))
        if bad != model_bad_primes(A, B):
            raise ValueError(f"bad-prime set for {label} disagrees with the model")
        curves.append(CmCurve(label, A, B, order(g, f), bad))
    return curves


def load_table(path: str | None = None) -> list[CmCurve]:
    """The curve table, from the packaged data file or an override path."""
    if path is None:
        text = resources.files(__package__).joinpath("data/curves.txt").read_text()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    curves = _parse_table(text)
    if path is None:
        pairs = {(c.order.g, c.order.f) for c in curves}
        if pairs != set(ORDER_PARAMS):
            raise ValueError("packaged table does not cover the thirteen orders")
    return curves


_TABLE: list[CmCurve] | None = None


def curve_table() -> list[CmCurve]:
    global _TABLE
    if _TABLE is None:
        _TABLE = load_table()
    return _TABLE


def get_curve(label: str, table: list[CmCurve] | None = None) -> CmCurve:
    """Look a curve up by exact label or by its D-suffix alias (e.g. 'D4')."""
    curves = table if table is not None else curve_table()
    for c in curves:
        if c.label == label:
            return c
    for c in curves:
        if c.label.rsplit("-", 1)[-1] == label:
            return c
    raise KeyError(f"no curve labelled {label!r}")


def is_on_curve(P: Point, curve: CmCurve, p: int) -> bool:
    if P is None:
        return True
    x, y = P
    return (y * y - curve.rhs(x, p)) % p == 0


def _add(P: Point, Q: Point, a: int, p: int) -> Point:
    """Group law with pre-reduced a = A mod p; no input validation."""
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        s = (3 * x1 * x1 + a) * pow(2 * y1, -1, p) % p
    else:
        s = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (s * s - x1 - x2) % p
    return (x3, (s * (x1 - x3) - y1) % p)


def _scalar_mul(n: int, P: Point, a: int, p: int) -> Point:
    if P is None or n == 0:
        return None
    R: Point = None
    Q = P
    while n:
        if n & 1:
            R = _add(R, Q, a, p)
        n >>= 1
        if n:
            Q = _add(Q, Q, a, p)
    return R


def add(P: Point, Q: Point, curve: CmCurve, p: int) -> Point:
    """Group law with infinity as identity."""
    if p <= 3 or p in curve.bad_primes:
        raise ValueError(f"p={p} is not usable for curve arithmetic on {curve.label}")
    if not (is_on_curve(P, curve, p) and is_on_curve(Q, curve, p)):
        raise ValueError("point is not on the curve")
    return _add(P, Q, curve.A % p, p)


def scalar_mul(n: int, P: Point, curve: CmCurve, p: int) -> Point:
    """n*P by double-and-add, n >= 0."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if p <= 3 or p in curve.bad_primes:
        raise ValueError(f"p={p} is not usable for curve arithmetic on {curve.label}")
    if not is_on_curve(P, curve, p):
        raise ValueError("point is not on the curve")
    return _scalar_mul(n, P, curve.A % p, p)


def negate(P: Point, p: int) -> Point:
    if P is None:
        return None
    return (P[0], (-P[1]) % p)


def random_point(curve: CmCurve, p: int, rng) -> Point:
    """A random affine point: rejection-sample x, pick a root by a coin toss."""
    if p <= 3 or p in curve.bad_primes:
        raise ValueError(f"p={p} is not usable for curve arithmetic on {curve.label}")
    while True:
        x = rng.randrange(p)
        t = curve.rhs(x, p)
        if t == 0:
            return (x, 0)
        try:
            y = sqrt_mod(t, p)
        except NoRoot:
            continue
        if rng.getrandbits(1):
            y = p - y
        return (x, y)


def _poly_mulmod(u, v, f1, f0, p):
    """(u*v) mod (x^3 + f1 x + f0) for degree-<3 polys as coefficient triples."""
    u0, u1, u2 = u
    v0, v1, v2 = v
    c0 = u0 * v0
    c1 = u0 * v1 + u1 * v0
    c2 = u0 * v2 + u1 * v1 + u2 * v0
    c3 = u1 * v2 + u2 * v1
    c4 = u2 * v2
    # Reduce x^4 = -f1 x^2 - f0 x, x^3 = -f1 x - f0.
    c2 -= c4 * f1
    c1 -= c4 * f0 + c3 * f1
    c0 -= c3 * f0
    return (c0 % p, c1 % p, c2 % p)


def _cubic_root_count(A: int, B: int, p: int) -> int:
    """Distinct roots of x^3 + Ax + B in F_p via gcd(x^p - x, f)."""
    f1, f0 = A % p, B % p
    # x^p mod f by square-and-multiply.
    result = (1, 0, 0)
    base = (0, 1, 0)
    n = p
    while n:
        if n & 1:
            result = _poly_mulmod(result, base, f1, f0, p)
        n >>= 1
        if n:
            base = _poly_mulmod(base, base, f1, f0, p)
    # gcd(f, x^p - x): degree of the gcd counts the distinct roots.
    r0, r1, r2 = result
    r1 = (r1 - 1) % p
    u = [f0, f1, 0, 1]  # cubic, monic
    v = [r0, r1, r2]
    while True:
        while v and v[-1] == 0:
            v.pop()
        if not v:
            return len(u) - 1
        inv = pow(v[-1], -1, p)
        v = [c * inv % p for c in v]
        if len(v) == 1:
            return 0
        # u mod v
        u = u[:]
        for i in range(len(u) - 1, len(v) - 2, -1):
            c = u[i]
            if c:
                off = i - (len(v) - 1)
                for k in range(len(v)):
                    u[off + k] = (u[off + k] - c * v[k]) % p
        u, v = v, u[: len(v) - 1]


def cubic_splits(curve: CmCurve, p: int) -> bool:
    """True iff x^3 + Ax + B has three roots in F_p (all 2-torsion rational)."""
    if p <= 3 or p in curve.bad_primes:
        raise ValueError(f"p={p} is not usable for curve arithmetic on {curve.label}")
    # The cubic is squarefree mod good p; a nonsquare discriminant means
    # exactly one root, otherwise zero or three.
    disc = (-4 * curve.A**3 - 27 * curve.B**2) % p
    if pow(disc, (p - 1) // 2, p) == p - 1:
        return False
    return _cubic_root_count(curve.A, curve.B, p) == 3
