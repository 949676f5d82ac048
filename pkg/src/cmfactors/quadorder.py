"""Exact arithmetic in the class-number-one imaginary quadratic orders.

There are nine imaginary quadratic fields Q(sqrt(g)) of class number one and
thirteen class-number-one orders inside them (conductors 1, 2 or 3).  This
module implements elements of those orders in the integral basis {1, beta}
with beta = f*omega, together with norm, trace, conjugation, content,
the Kronecker symbol, the unit-group tables, and the two counting formulas

    Phi(d) = #(O_K / d O_K)^x          (Euler product over primes dividing d)
    r(m)   = w * sum_{e | m} (Delta/e)  (lattice points of norm m)

Everything here is pure and immutable; values can be shared freely across
worker processes.
"""
from __future__ import annotations

import math

# The nine class-number-one field parameters g (squarefree, negative).
FIELD_PARAMS = (-1, -2, -3, -7, -11, -19, -43, -67, -163)

# The thirteen class-number-one orders as (g, conductor) pairs.
ORDER_PARAMS = (
    (-1, 1), (-1, 2),
    (-2, 1),
    (-3, 1), (-3, 2), (-3, 3),
    (-7, 1), (-7, 2),
    (-11, 1),
    (-19, 1),
    (-43, 1),
    (-67, 1),
    (-163, 1),
)

# qi_mul coefficient contract: results must stay below 2^63 in magnitude.
COEFF_LIMIT = 1 << 63


class OrderDesc:
    """An imaginary quadratic order of class number one.

    Attributes:
        g: field parameter (squarefree negative integer).
        f: conductor (1, 2 or 3).
        delta: discriminant of the field K = Q(sqrt(g)).
        disc: discriminant of the order itself, f^2 * delta.
        w: number of roots of unity in K.
        beta_trace, beta_norm: trace and norm of the basis element
            beta = f*omega, so that beta^2 = beta_trace*beta - beta_norm.
    """

    __slots__ = ("g", "f", "delta", "disc", "w", "beta_trace", "beta_norm")

    def __init__(self, g: int, f: int = 1):
        if (g, f) not in _ORDER_SET:
            raise ValueError(f"(g={g}, f={f}) is not a class-number-one order")
        self.g = g
        self.f = f
        self.delta = g if g % 4 == 1 else 4 * g
        self.disc = f * f * self.delta
        if (g, f) == (-1, 1):
            self.w = 4
        elif (g, f) == (-3, 1):
            self.w = 6
        else:
            self.w = 2
        if g % 4 == 1:
            # omega = (1 + sqrt(g))/2, so Tr(omega) = 1, Nm(omega) = (1-g)/4.
            self.beta_trace = f
            self.beta_norm = f * f * (1 - g) // 4
        else:
            # omega = sqrt(g).
            self.beta_trace = 0
            self.beta_norm = f * f * (-g)

    def is_maximal(self) -> bool:
        return self.f == 1

    def __eq__(self, other):
        return isinstance(other, OrderDesc) and (self.g, self.f) == (other.g, other.f)

    def __hash__(self):
        return hash((self.g, self.f))

    def __repr__(self):
        return f"OrderDesc(g={self.g}, f={self.f})"

    def __reduce__(self):
        return (order, (self.g, self.f))


_ORDER_SET = frozenset(ORDER_PARAMS)
_ORDER_CACHE: dict[tuple[int, int], OrderDesc] = {}


def order(g: int, f: int = 1) -> OrderDesc:
    """Interned accessor for the thirteen supported orders."""
    key = (g, f)
    desc = _ORDER_CACHE.get(key)
    if desc is None:
        desc = OrderDesc(g, f)
        _ORDER_CACHE[key] = desc
    return desc


def all_orders() -> list[OrderDesc]:
    return [order(g, f) for g, f in ORDER_PARAMS]


def maximal_orders() -> list[OrderDesc]:
    return [order(g, 1) for g in FIELD_PARAMS]


class QuadInt:
    """Element a + b*beta of an order, in the integral basis {1, beta}."""

    __slots__ = ("a", "b", "order")

    def __init__(self, a: int, b: int, order: OrderDesc):
        self.a = a
        self.b = b
        self.order = order

    def __eq__(self, other):
        return (
            isinstance(other, QuadInt)
            and self.a == other.a
            and self.b == other.b
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.a, self.b, self.order))

    def __repr__(self):
        return f"QuadInt({self.a}, {self.b}, g={self.order.g}, f={self.order.f})"

    def _coerce(self, other) -> "QuadInt":
        if isinstance(other, QuadInt):
            if other.order != self.order:
                raise ValueError("mixed orders in arithmetic")
            return other
        if isinstance(other, int):
            return QuadInt(other, 0, self.order)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadInt(self.a + o.a, self.b + o.b, self.order)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadInt(self.a - o.a, self.b - o.b, self.order)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadInt(o.a - self.a, o.b - self.b, self.order)

    def __neg__(self):
        return QuadInt(-self.a, -self.b, self.order)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return qi_mul(self, o)

    __rmul__ = __mul__


def qi_mul(x: QuadInt, y: QuadInt) -> QuadInt:
    """Product in the common order; beta^2 expands via beta's minimal polynomial."""
    if x.order != y.order:
        raise ValueError("mixed orders in qi_mul")
    od = x.order
    bd = x.b * y.b
    a = x.a * y.a - bd * od.beta_norm
    b = x.a * y.b + x.b * y.a + bd * od.beta_trace
    if not (-COEFF_LIMIT < a < COEFF_LIMIT and -COEFF_LIMIT < b < COEFF_LIMIT):
        raise OverflowError("qi_mul result exceeds the 64-bit coefficient range")
    return QuadInt(a, b, od)


def norm(x: QuadInt) -> int:
    od = x.order
    return x.a * x.a + x.a * x.b * od.beta_trace + x.b * x.b * od.beta_norm


def trace(x: QuadInt) -> int:
    return 2 * x.a + x.b * x.order.beta_trace


def conj(x: QuadInt) -> QuadInt:
    return QuadInt(x.a + x.b * x.order.beta_trace, -x.b, x.order)


def content(x: QuadInt) -> int:
    """Largest rational integer d with x in d*O; gcd of the basis coordinates."""
    if x.a == 0 and x.b == 0:
        raise ValueError("content of zero is undefined")
    return math.gcd(abs(x.a), abs(x.b))


_VALID_DELTAS = frozenset(g if g % 4 == 1 else 4 * g for g in FIELD_PARAMS)


def kronecker(delta: int, n: int) -> int:
    """Kronecker symbol (delta/n) for the nine supported field discriminants."""
    if delta not in _VALID_DELTAS:
        raise ValueError(f"{delta} is not a supported field discriminant")
    if n < 1:
        raise ValueError("n must be positive")
    a = delta
    result = 1
    while n % 2 == 0:
        if a % 2 == 0:
            return 0
        n //= 2
        if a % 8 in (3, 5):
            result = -result
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _trial_factor(n: int) -> list[tuple[int, int]]:
    factors = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            factors.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        factors.append((n, 1))
    return factors


def phi_ideal(d: int, order: OrderDesc) -> int:
    """Phi(d) = #(O_K/dO_K)^x = d^2 prod_{l|d} (1 - 1/l)(1 - (Delta/l)/l)."""
    if not order.is_maximal():
        raise ValueError("phi_ideal is defined for maximal orders only")
    if d < 1:
        raise ValueError("d must be positive")
    result = d * d
    for ell, _ in _trial_factor(d):
        chi = kronecker(order.delta, ell)
        result = result * (ell - 1) * (ell - chi) // (ell * ell)
    return result


def rep_count(m: int, order: OrderDesc) -> int:
    """r(m) = w * sum_{e|m} (Delta/e): lattice points (X, Y) with Nm(X+Y*omega) = m."""
    if not order.is_maximal():
        raise ValueError("rep_count uses the field discriminant; maximal orders only")
    if m < 1:
        raise ValueError("m must be positive")
    total = 1
    for p, e in _trial_factor(m):
        chi = kronecker(order.delta, p)
        if chi == 1:
            total *= e + 1
        elif chi == -1:
            if e % 2 == 1:
                return 0
        # chi == 0 contributes the single j=0 term, factor 1
    return order.w * total


def rep_count_bruteforce(m: int, order: OrderDesc) -> int:
    """Exhaustive count of (X, Y) with Nm(X + Y*omega) = m.

    Independent oracle for rep_count: walks lattice rows directly instead of
    using the divisor-sum formula.
    """
    if not order.is_maximal():
        raise ValueError("maximal orders only")
    if m < 1:
        raise ValueError("m must be positive")
    if m > 10**6:
        raise ValueError("enumeration bound is 10^6")
    g = order.g
    count = 0
    if g % 4 == 1:
        # Nm = X^2 + XY + Y^2 (1-g)/4; 4*Nm = (2X + Y)^2 + |g| Y^2.
        ymax = math.isqrt(4 * m // -g)
        for y in range(-ymax, ymax + 1):
            t = 4 * m + g * y * y
            s = math.isqrt(t)
            if s * s != t:
                continue
            for sign in ((s, -s) if s else (0,)):
                if (sign - y) % 2 == 0:
                    count += 1
    else:
        # Nm = X^2 + |g| Y^2.
        ymax = math.isqrt(m // -g)
        for y in range(-ymax, ymax + 1):
            t = m + g * y * y
            s = math.isqrt(t)
            if s * s != t:
                continue
            count += 1 if s == 0 else 2
    return count


def units(order: OrderDesc) -> list[QuadInt]:
    """The w roots of unity of the order, closed under negation."""
    if order.w == 4:
        coords = [(1, 0), (0, 1), (-1, 0), (0, -1)]
    elif order.w == 6:
        # Powers of omega: 1, w, w-1, -1, -w, 1-w.
        coords = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)]
    else:
        coords = [(1, 0), (-1, 0)]
    return [QuadInt(a, b, order) for a, b in coords]
