"""Exact arithmetic in the real cyclotomic field Q(cos(pi/m)).

Elements are stored in the power basis of the algebraic integer
``g = 2 cos(pi/m)``: a vector of integer numerators over one positive common
denominator, reduced modulo the (monic, integral) minimal polynomial of ``g``.
Signs are decided exactly: zero is read off the canonical form, everything
else by integer interval evaluation at increasing binary precision.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import mpmath

from .errors import DomainError, UsageError

__all__ = [
    "FieldContext",
    "CycloReal",
    "field_new",
    "cosmul",
    "sign",
    "totient",
    "chebyshev_sin_poly",
    "chebyshev_cos_poly",
]

# starting precision (bits) of the interval refinement; affects speed only
_START_PREC = int(os.environ.get("RANK2POLYGONS_SIGN_PRECISION", "64"))


# --- small dense polynomial helpers (coefficient lists, low degree first) ---

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _pmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _psub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def _pdivmod(a, b):
    a = [Fraction(x) for x in _trim(a)]
    b = [Fraction(x) for x in _trim(b)]
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        c = a[-1] / b[-1]
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[k + i] -= c * y
        a = _trim(a)
    return _trim(q), a


def _pgcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, r
    lead = Fraction(a[-1])
    return [Fraction(x) / lead for x in a]


def _peval(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def chebyshev_sin_poly(k: int) -> list[int]:
    """Integer polynomial Q_k with sin(k t)/sin(t) = Q_k(2 cos t)."""
    prev, cur = [0], [1]
    if k == 0:
        return prev
    for _ in range(k - 1):
        prev, cur = cur, _psub(_pmul([0, 1], cur), prev)
    return cur


def chebyshev_cos_poly(k: int) -> list[int]:
    """Integer polynomial P_k with 2 cos(k t) = P_k(2 cos t)."""
    prev, cur = [2], [0, 1]
    if k == 0:
        return prev
    for _ in range(k - 1):
        prev, cur = cur, _psub(_pmul([0, 1], cur), prev)
    return cur


def totient(n: int) -> int:
    result, k, x = n, 2, n
    while k * k <= x:
        if x % k == 0:
            while x % k == 0:
                x //= k
            result -= result // k
        k += 1
    if x > 1:
        result -= result // x
    return result


def _odd_prime_factors(n: int) -> list[int]:
    out, k = [], 3
    while n % 2 == 0:
        n //= 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 2
    if n > 1:
        out.append(n)
    return out


def _minimal_polynomial(m: int) -> tuple[int, ...]:
    # Q_m vanishes at 2cos(k pi/m), 0<k<m (sin(k pi) = 0); P_m + 2 singles out odd k.
    common = _pgcd(chebyshev_sin_poly(m), _psub(chebyshev_cos_poly(m), [-2]))
    # odd k sharing an odd prime p with m are roots of Q_{m/p}
    for p in _odd_prime_factors(m):
        shared = _pgcd(common, chebyshev_sin_poly(m // p))
        if len(shared) > 1:
            common, rem = _pdivmod(common, shared)
            assert not rem
    lead = common[-1]
    coeffs = [c / lead for c in common]
    if any(c.denominator != 1 for c in coeffs):
        raise ArithmeticError(f"minimal polynomial for m={m} is not integral")
    return tuple(int(c) for c in coeffs)


class FieldContext:
    """The field Q(cos(pi/m)) with generator g = 2 cos(pi/m).

    Build instances through :func:`field_new`, which caches one context per m
    so that identity comparison of contexts is meaningful.
    """

    __slots__ = ("m", "degree", "minpoly", "_reduce", "_enclosures", "_cos", "__weakref__")

    def __init__(self, m: int):
        if m < 3:
            raise DomainError(f"dihedral order must be >= 3, got {m}")
        self.m = m
        self.minpoly = _minimal_polynomial(m)
        self.degree = len(self.minpoly) - 1
        if self.degree != totient(2 * m) // 2:
            raise ArithmeticError(f"degree mismatch for m={m}")
        d = self.degree
        # x^k mod minpoly for d <= k <= 2d-2, integral because minpoly is monic
        table = {}
        for k in range(d, 2 * d - 1):
            r = [0] * k + [1]
            for top in range(k, d - 1, -1):
                c = r[top]
                if c:
                    for i in range(d):
                        r[top - d + i] -= c * self.minpoly[i]
                    r[top] = 0
            table[k] = tuple(r[:d])
        self._reduce = table
        self._enclosures: dict[int, tuple[list[int], list[int]]] = {}
        self._cos: list[CycloReal] | None = None

    def __repr__(self):
        return f"FieldContext(m={self.m}, degree={self.degree})"

    def __reduce__(self):
        return (field_new, (self.m,))

    # -- constructors ------------------------------------------------------
    def zero(self) -> "CycloReal":
        return CycloReal._raw(self, (0,) * self.degree, 1)

    def one(self) -> "CycloReal":
        return self.rational(1)

    def rational(self, q) -> "CycloReal":
        q = Fraction(q)
        return CycloReal._raw(self, (q.numerator,) + (0,) * (self.degree - 1), q.denominator)

    def generator(self) -> "CycloReal":
        if self.degree == 1:
            return self.rational(-self.minpoly[0])
        return CycloReal._raw(self, (0, 1) + (0,) * (self.degree - 2), 1)

    def from_coeffs(self, coeffs) -> "CycloReal":
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) != self.degree:
            raise UsageError(f"expected {self.degree} coefficients, got {len(coeffs)}")
        den = math.lcm(*(c.denominator for c in coeffs)) if coeffs else 1
        return CycloReal(self, tuple(int(c * den) for c in coeffs), den)

    def coerce(self, x) -> "CycloReal":
        if isinstance(x, CycloReal):
            if x.ctx is not self:
                raise UsageError(f"mixed fields: m={x.ctx.m} and m={self.m}")
            return x
        if isinstance(x, (int, Rational)):
            return self.rational(x)
        raise UsageError(f"cannot coerce {type(x).__name__} into {self!r}")

    def cos(self, t: int) -> "CycloReal":
        """cos(t pi/m) as a field element."""
        if self._cos is None:
            g = self.generator()
            table = [self.one(), g * Fraction(1, 2)]
            for _ in range(2, 2 * self.m):
                table.append(g * table[-1] - table[-2])
            self._cos = table
        return self._cos[t % (2 * self.m)]

    # -- certified enclosures of g^i --------------------------------------
    def enclosure(self, prec: int) -> tuple[list[int], list[int]]:
        """Integer bounds lo[i] <= g^i * 2^prec <= hi[i] for i < degree."""
        cached = self._enclosures.get(prec)
        if cached is not None:
            return cached
        with mpmath.workprec(prec + 40):
            approx = 2 * mpmath.cos(mpmath.pi / self.m)
            G = int(mpmath.floor(approx * mpmath.mpf(2) ** prec))
        scale = 1 << prec
        d = self.degree

        def scaled_value(num):
            # minpoly(num / 2^prec) * 2^(prec*d)
            return sum(c * num**i * scale ** (d - i) for i, c in enumerate(self.minpoly))

        lo_v, hi_v = scaled_value(G), scaled_value(G + 1)
        if lo_v == 0 or hi_v == 0 or (lo_v > 0) == (hi_v > 0):
            raise ArithmeticError(f"root isolation failed for m={self.m} at {prec} bits")
        lo, hi = [scale], [scale]
        for i in range(1, d):
            shift = prec * (i - 1)
            lo.append((G**i) >> shift)
            hi.append(-((-((G + 1) ** i)) >> shift))
        self._enclosures[prec] = (lo, hi)
        return lo, hi


@lru_cache(maxsize=None)
def field_new(m: int) -> FieldContext:
    """Return the (cached) field context for dihedral order ``m``."""
    return FieldContext(m)


class CycloReal:
    """An exact element of Q(cos(pi/m)) in canonical form."""

    __slots__ = ("ctx", "num", "den")

    def __init__(self, ctx: FieldContext, num: tuple[int, ...], den: int = 1):
        if len(num) != ctx.degree:
            raise UsageError(f"coefficient vector of length {len(num)} for degree {ctx.degree}")
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = tuple(-x for x in num), -den
        g = math.gcd(den, *num)
        if g > 1:
            num, den = tuple(x // g for x in num), den // g
        self.ctx = ctx
        self.num = tuple(num)
        self.den = den

    @classmethod
    def _raw(cls, ctx, num, den):
        obj = object.__new__(cls)
        obj.ctx, obj.num, obj.den = ctx, num, den
        return obj

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self.den) for x in self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    # -- ring operations -----------------------------------------------------
    def _other(self, other):
        if isinstance(other, CycloReal):
            if other.ctx is not self.ctx:
                raise UsageError(f"mixed fields: m={self.ctx.m} and m={other.ctx.m}")
            return other
        if isinstance(other, (int, Rational)):
            return self.ctx.rational(other)
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return CycloReal(self.ctx, tuple(a + b for a, b in zip(self.num, other.num)), self.den)
        d1, d2 = self.den, other.den
        return CycloReal(self.ctx, tuple(a * d2 + b * d1 for a, b in zip(self.num, other.num)), d1 * d2)

    __radd__ = __add__

    def __neg__(self):
        return CycloReal._raw(self.ctx, tuple(-a for a in self.num), self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            return CycloReal(self.ctx, tuple(a * other for a in self.num), self.den)
        if isinstance(other, Rational) and not isinstance(other, CycloReal):
            return CycloReal(self.ctx, tuple(a * other.numerator for a in self.num),
                             self.den * other.denominator)
        other = self._other(other)
        if other is NotImplemented:
            return other
        ctx = self.ctx
        d = ctx.degree
        if d == 1:
            return CycloReal(ctx, (self.num[0] * other.num[0],), self.den * other.den)
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(self.num):
            if x:
                for j, y in enumerate(other.num):
                    if y:
                        prod[i + j] += x * y
        out = prod[:d]
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c:
                for i, r in enumerate(ctx._reduce[k]):
                    if r:
                        out[i] += c * r
        return CycloReal(ctx, tuple(out), self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "CycloReal":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        ctx = self.ctx
        if ctx.degree == 1:
            return CycloReal(ctx, (self.den,), self.num[0])
        # extended Euclid: s*a + t*minpoly = 1
        r0, r1 = list(ctx.minpoly), _trim(self.num)
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1))
        c = Fraction(r1[0])
        coeffs = [Fraction(x) / c for x in s1] + [0] * ctx.degree
        return ctx.from_coeffs(coeffs[: ctx.degree]) * self.den

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, CycloReal):
            other = Fraction(other)
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / other)
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    # -- order ---------------------------------------------------------------
    def sign(self) -> int:
        return sign(self)

    def __eq__(self, other):
        if isinstance(other, CycloReal):
            return self.ctx is other.ctx and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Rational)):
            return self.is_rational() and Fraction(self.num[0], self.den) == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(Fraction(self.num[0], self.den))
        return hash((self.ctx.m, self.num, self.den))

    def __lt__(self, other):
        return sign(self - other) < 0

    def __le__(self, other):
        return sign(self - other) <= 0

    def __gt__(self, other):
        return sign(self - other) > 0

    def __ge__(self, other):
        return sign(self - other) >= 0

    def __abs__(self):
        return -self if sign(self) < 0 else self

    def __bool__(self):
        return not self.is_zero()

    def __float__(self):
        if self.ctx.degree == 1:
            return self.num[0] / self.den
        prec = 80
        lo, hi = self.ctx.enclosure(prec)
        mid = sum(n * (l + h) for n, l, h in zip(self.num, lo, hi))
        return float(Fraction(mid, 2 * self.den << prec))

    def to_mpf(self, dps: int = 50):
        with mpmath.workdps(dps + 10):
            g = 2 * mpmath.cos(mpmath.pi / self.ctx.m)
            val = sum(mpmath.mpf(n) * g**i for i, n in enumerate(self.num)) / self.den
        return val

    def __repr__(self):
        terms = ", ".join(str(c) for c in self.coeffs)
        return f"CycloReal(m={self.ctx.m}, [{terms}] ~ {float(self):.12g})"

    # -- serialization -------------------------------------------------------
    def to_json(self) -> dict:
        return {"coeffs": [str(c) for c in self.coeffs], "approx": float(f"{float(self):.17g}")}

    @classmethod
    def from_json(cls, ctx: FieldContext, data) -> "CycloReal":
        coeffs = data["coeffs"] if isinstance(data, dict) else data
        return ctx.from_coeffs([Fraction(c) for c in coeffs])


def cosmul(ctx: FieldContext, t: int) -> CycloReal:
    """The exact field element cos(t pi / m)."""
    return ctx.cos(t)


def sign(x: CycloReal) -> int:
    """Certified sign of ``x``: -1, 0 or 1."""
    num = x.num
    if not any(num):
        return 0
    ctx = x.ctx
    if ctx.degree == 1:
        return 1 if num[0] > 0 else -1
    prec = _START_PREC
    while True:
        lo_t, hi_t = ctx.enclosure(prec)
        lo = hi = 0
        for n, l, h in zip(num, lo_t, hi_t):
            if n > 0:
                lo += n * l
                hi += n * h
            elif n < 0:
                lo += n * h
                hi += n * l
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        prec *= 2
