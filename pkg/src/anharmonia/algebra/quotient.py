"""Quotient rings K[y]/(m(y)) and rational-function interpolation."""
from __future__ import annotations

from ..errors import IncompatibleRingError
from .poly import Poly, RatFun, poly_gcd
from .rings import CyclotomicField, Ring

__all__ = ["QuotientRing", "QElem", "interpolate", "rational_interpolate"]


class QuotientRing(Ring):
    """K[y]/(m); a generic root of m.  Only ring operations are provided."""

    is_field = False

    def __init__(self, modulus: Poly):
        if modulus.degree < 1:
            raise ValueError("modulus must have positive degree")
        self.modulus = modulus.monic()
        self.base = modulus.ring
        self.var = modulus.var
        self.name = f"{self.base.name}[{self.var}]/({self.modulus})"

    def convert(self, x):
        if isinstance(x, QElem):
            if x.ring != self:
                raise IncompatibleRingError(f"{x.ring} is not {self}")
            return x
        if isinstance(x, Poly) and x.var == self.var and x.ring == self.base:
            return QElem(x % self.modulus, self)
        return QElem(Poly.const(self.base.convert(x), self.base, self.var), self)

    def gen(self) -> "QElem":
        return self.convert(Poly.gen(self.base, self.var))


class QElem:
    __slots__ = ("rep", "ring")

    def __init__(self, rep: Poly, ring: QuotientRing):
        self.rep = rep
        self.ring = ring

    def _c(self, other):
        try:
            return self.ring.convert(other)
        except (TypeError, ValueError):
            return None

    def __add__(self, other):
        other = self._c(other)
        if other is None:
            return NotImplemented
        return QElem(self.rep + other.rep, self.ring)

    __radd__ = __add__

    def __neg__(self):
        return QElem(-self.rep, self.ring)

    def __sub__(self, other):
        other = self._c(other)
        if other is None:
            return NotImplemented
        return QElem(self.rep - other.rep, self.ring)

    def __rsub__(self, other):
        other = self._c(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._c(other)
        if other is None:
            return NotImplemented
        return QElem((self.rep * other.rep) % self.ring.modulus, self.ring)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = self.ring.one
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        other = self._c(other)
        if other is None:
            return NotImplemented
        return self.rep == other.rep

    def __hash__(self):
        return hash(self.rep)

    def __bool__(self):
        return not self.rep.is_zero()

    def __str__(self):
        return f"[{self.rep}]"

    __repr__ = __str__


# ---------------------------------------------------------------------------
# interpolation
# ---------------------------------------------------------------------------
def interpolate(xs, ys, ring: Ring, var: str = "T") -> Poly:
    """Newton interpolation: the polynomial of degree < len(xs) through the points."""
    n = len(xs)
    coef = [ring.convert(y) for y in ys]
    xs = [ring.convert(x) for x in xs]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = Poly.const(coef[-1], ring, var)
    T = Poly.gen(ring, var)
    for i in range(n - 2, -1, -1):
        out = out * (T - xs[i]) + coef[i]
    return out


def rational_interpolate(xs, ys, num_deg: int, den_deg: int, ring: Ring, var: str = "T") -> RatFun | None:
    """Cauchy interpolation: A/B with deg A <= num_deg, deg B <= den_deg through the points.

    Needs exactly num_deg + den_deg + 1 points with distinct abscissae.
    Returns None when no such function exists.
    """
    if len(xs) != num_deg + den_deg + 1:
        raise ValueError("need num_deg + den_deg + 1 sample points")
    if ring.name == "QQ" or isinstance(ring, CyclotomicField):
        from .modular import rational_interpolate_modular

        out = rational_interpolate_modular(xs, ys, num_deg, den_deg, ring, var)
        if not isinstance(out, str):
            return out
    if ring.name == "QQ":
        return _rational_interpolate_mpq(xs, ys, num_deg, den_deg, var)
    L = interpolate(xs, ys, ring, var)
    T = Poly.gen(ring, var)
    M = Poly.const(1, ring, var)
    for x in xs:
        M = M * (T - ring.convert(x))
    r0, r1 = M, L
    t0, t1 = Poly.const(0, ring, var), Poly.const(1, ring, var)
    while r1.degree > num_deg:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        t0, t1 = t1, t0 - q * t1
    if t1.is_zero() or t1.degree > den_deg:
        return None
    if poly_gcd(t1, M).degree > 0:
        return None
    return RatFun(r1, t1)


# dense mpq fast path for QQ: lists low -> high, no trailing zeros
def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _sub(a, b):
    out = [x for x in a] + [0] * max(0, len(b) - len(a))
    for i, y in enumerate(b):
        out[i] -= y
    return _trim(out)


def _mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _divmod(a, b):
    a = list(a)
    q = [0] * max(0, len(a) - len(b) + 1)
    inv = 1 / b[-1]
    while len(a) >= len(b) and a:
        c = a[-1] * inv
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[i + k] -= c * y
        a.pop()
        _trim(a)
    return _trim(q), a


def _rational_interpolate_mpq(xs, ys, num_deg, den_deg, var):
    from fractions import Fraction

    import gmpy2

    from .rings import QQ

    def mpq(v):
        v = Fraction(v)
        return gmpy2.mpq(v.numerator, v.denominator)

    X = [mpq(x) for x in xs]
    coef = [mpq(y) for y in ys]
    n = len(X)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (X[i] - X[i - j])
    L = [coef[-1]]
    for i in range(n - 2, -1, -1):
        L = _sub(_mul(L, [-X[i], gmpy2.mpq(1)]), [-coef[i]])
    L = _trim(L)
    M = [gmpy2.mpq(1)]
    for x in X:
        M = _mul(M, [-x, gmpy2.mpq(1)])
    r0, r1 = M, L
    t0, t1 = [], [gmpy2.mpq(1)]
    while len(r1) - 1 > num_deg:
        q, r = _divmod(r0, r1)
        r0, r1 = r1, r
        t0, t1 = t1, _sub(t0, _mul(q, t1))
    if not t1 or len(t1) - 1 > den_deg:
        return None

    def back(a):
        return Poly([Fraction(int(c.numerator), int(c.denominator)) for c in a] or [0], QQ, var)

    num, den = back(r1), back(t1)
    if poly_gcd(den, back(M)).degree > 0:
        return None
    return RatFun(num, den)
