"""Dense univariate polynomials and rational functions over an exact ring.

Coefficients are stored lowest degree first.  The coefficient ring is carried
by a descriptor (see ``rings``); polynomials in different rings or different
variables never combine silently.

Nesting works: a ``Poly`` whose ring is ``PolynomialRing(QQ, "x")`` is a
bivariate polynomial, which is how resultants with parametric coefficients
are computed.
"""
from __future__ import annotations

import math
from fractions import Fraction

from ..errors import DegenerateInputError, IncompatibleRingError, NotAPowerError
from .cyclotomic import Cyclotomic, _frac_str
from .rings import QQ, CyclotomicField, Ring, exquo, parse_scalar

__all__ = [
    "Poly",
    "RatFun",
    "PolynomialRing",
    "FunctionField",
    "poly_gcd",
    "poly_xgcd",
    "poly_resultant",
    "poly_pth_root",
    "ratfun_derivative",
    "sylvester_matrix",
    "bareiss_det",
    "poly_to_json",
    "poly_from_json",
]


class Poly:
    __slots__ = ("coeffs", "ring", "var")

    def __init__(self, coeffs=(), ring: Ring = QQ, var: str = "t"):
        conv = ring.convert
        cs = [conv(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self.ring = ring
        self.var = var

    @classmethod
    def _raw(cls, coeffs, ring, var):
        obj = object.__new__(cls)
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        obj.coeffs = tuple(cs)
        obj.ring = ring
        obj.var = var
        return obj

    def _like(self, coeffs):
        return Poly._raw(coeffs, self.ring, self.var)

    # constructors ------------------------------------------------------------
    @classmethod
    def gen(cls, ring: Ring = QQ, var: str = "t") -> "Poly":
        return cls._raw((ring.zero, ring.one), ring, var)

    @classmethod
    def const(cls, c, ring: Ring = QQ, var: str = "t") -> "Poly":
        return cls._raw((ring.convert(c),), ring, var)

    @classmethod
    def monomial(cls, k: int, c=1, ring: Ring = QQ, var: str = "t") -> "Poly":
        return cls._raw([ring.zero] * k + [ring.convert(c)], ring, var)

    # basic views ---------------------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.ring.zero

    def coeff(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.ring.zero

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    # coercion ------------------------------------------------------------------
    def _check(self, other):
        if isinstance(other, Poly):
            if other.ring == self.ring and other.var == self.var:
                return other
            try:
                return Poly._raw((self.ring.convert(other),), self.ring, self.var)
            except (TypeError, ValueError):
                raise IncompatibleRingError(
                    f"{self.ring}[{self.var}] vs {other.ring}[{other.var}]"
                ) from None
        try:
            return Poly._raw((self.ring.convert(other),), self.ring, self.var)
        except (TypeError, ValueError):
            return None

    # arithmetic ----------------------------------------------------------------
    def __neg__(self):
        return self._like(-c for c in self.coeffs)

    def __pos__(self):
        return self

    def __add__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return self._like(out)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if not isinstance(other, Poly) or other.var != self.var or other.ring != self.ring:
            try:
                c = self.ring.convert(other)
            except (TypeError, ValueError):
                if isinstance(other, Poly):
                    raise IncompatibleRingError(
                        f"{self.ring}[{self.var}] vs {other.ring}[{other.var}]"
                    ) from None
                return NotImplemented
            return self._like(x * c for x in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return self._like(())
        zero = self.ring.zero
        out = [zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                if y == 0:
                    continue
                out[i + j] = out[i + j] + x * y
        return self._like(out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = Poly._raw((self.ring.one,), self.ring, self.var)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __divmod__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        lc_inv = self.ring.one / other.lc
        quot = [self.ring.zero] * max(len(rem) - db, 0)
        bc = other.coeffs
        for i in range(len(rem) - db - 1, -1, -1):
            c = rem[i + db] * lc_inv
            quot[i] = c
            if c != 0:
                for j in range(db + 1):
                    rem[i + j] = rem[i + j] - c * bc[j]
        return self._like(quot), self._like(rem[:db] if db > 0 else ())

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exquo(self, other):
        """Exact division valid over integral domains; raises on a remainder."""
        if not isinstance(other, Poly):
            c = self.ring.convert(other)
            return self._like(exquo(x, c) for x in self.coeffs)
        other = self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        bc = other.coeffs
        quot = [self.ring.zero] * max(len(rem) - db, 0)
        for i in range(len(rem) - db - 1, -1, -1):
            c = exquo(rem[i + db], other.lc)
            quot[i] = c
            if c != 0:
                for j in range(db + 1):
                    rem[i + j] = rem[i + j] - c * bc[j]
        if db > 0 and any(r != 0 for r in rem[:db]):
            raise ArithmeticError("inexact polynomial division")
        return self._like(quot)

    def __truediv__(self, other):
        if isinstance(other, Poly):
            return RatFun(self, other)
        c = self.ring.convert(other)
        inv = self.ring.one / c
        return self._like(x * inv for x in self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.var == other.var and self.coeffs == other.coeffs
        if isinstance(other, RatFun):
            return other == self
        try:
            c = self.ring.convert(other)
        except (TypeError, ValueError):
            return NotImplemented
        if c == 0:
            return not self.coeffs
        return self.coeffs == (c,)

    def __hash__(self):
        if len(self.coeffs) <= 1:
            return hash(self.coeffs[0]) if self.coeffs else 0
        return hash((self.var, self.coeffs))

    # calculus and evaluation ---------------------------------------------------
    def derivative(self, k: int = 1) -> "Poly":
        p = self
        for _ in range(k):
            p = p._like(c * i for i, c in enumerate(p.coeffs) if i > 0)
        return p

    def __call__(self, x):
        if not self.coeffs:
            return self.ring.zero
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def compose(self, g: "Poly") -> "Poly":
        if not self.coeffs:
            return g._like(())
        acc = Poly._raw((g.ring.convert(self.coeffs[-1]),), g.ring, g.var)
        for c in reversed(self.coeffs[:-1]):
            acc = acc * g + g.ring.convert(c)
        return acc

    def homogeneous_eval(self, X, Y, degree: int | None = None):
        """sum c_k X^k Y^(degree-k), the degree-``degree`` homogenization at (X, Y)."""
        degree = self.degree if degree is None else degree
        if degree < self.degree:
            raise ValueError("homogenization degree below polynomial degree")
        xp = _power_list(X, self.degree)
        yp = _power_list(Y, degree)
        total = None
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            term = xp[k] * yp[degree - k] * c
            total = term if total is None else total + term
        return total if total is not None else self.ring.zero

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        lc = self.coeffs[-1]
        if lc == 1:
            return self
        inv = self.ring.one / lc
        return self._like(c * inv for c in self.coeffs)

    def map_coeffs(self, func, ring: Ring | None = None, var: str | None = None) -> "Poly":
        ring = ring or self.ring
        return Poly._raw([ring.convert(func(c)) for c in self.coeffs], ring, var or self.var)

    def change_ring(self, ring: Ring) -> "Poly":
        return Poly([c for c in self.coeffs], ring, self.var)

    def reversed(self, degree: int | None = None) -> "Poly":
        degree = self.degree if degree is None else degree
        cs = list(self.coeffs) + [self.ring.zero] * (degree + 1 - len(self.coeffs))
        return self._like(reversed(cs))

    # presentation --------------------------------------------------------------
    def __repr__(self):
        return f"Poly({self}, {self.ring}, {self.var!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else (self.var if k == 1 else f"{self.var}^{k}")
            cs = str(c)
            if not mono:
                terms.append(cs if _atomic(cs) else f"({cs})")
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append((cs if _atomic(cs) else f"({cs})") + "*" + mono)
        return " + ".join(terms).replace("+ -", "- ")


def _atomic(s: str) -> bool:
    body = s[1:] if s.startswith("-") else s
    return not any(ch in body for ch in "+- ")


def _power_list(x, n):
    out = [None] * (n + 1)
    if n < 0:
        return out
    out[0] = 1
    if n >= 1:
        out[1] = x
    for k in range(2, n + 1):
        out[k] = out[k - 1] * x
    return out


class PolynomialRing(Ring):
    """Ring of ``Poly`` objects in ``var`` over ``base``; used for nested coefficients."""

    is_field = False

    def __init__(self, base: Ring, var: str):
        self.base = base
        self.var = var
        self.name = f"{base.name}[{var}]"

    def convert(self, x):
        if isinstance(x, Poly):
            if x.ring == self.base and x.var == self.var:
                return x
            raise IncompatibleRingError(f"{x.ring}[{x.var}] is not {self.name}")
        return Poly._raw((self.base.convert(x),), self.base, self.var)

    def gen(self) -> Poly:
        return Poly.gen(self.base, self.var)


# ---------------------------------------------------------------------------
# gcd, resultant, roots of powers
# ---------------------------------------------------------------------------
def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd over a field; gcd(0, 0) = 0."""
    q = p._check(q)
    if q is None:
        raise IncompatibleRingError("gcd operands must share ring and variable")
    a, b = p, q
    while not b.is_zero():
        a, b = b, (a % b).monic()
    return a.monic()


def poly_xgcd(p: Poly, q: Poly):
    """Return (g, s, t) with s*p + t*q = g monic."""
    q = p._check(q)
    if q is None:
        raise IncompatibleRingError("xgcd operands must share ring and variable")
    one = Poly.const(1, p.ring, p.var)
    zero = p._like(())
    r0, r1, s0, s1, t0, t1 = p, q, one, zero, zero, one
    while not r1.is_zero():
        quo, rem = divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quo * s1
        t0, t1 = t1, t0 - quo * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = p.ring.one / r0.lc
    return r0 * inv, s0 * inv, t0 * inv


def sylvester_matrix(p: Poly, q: Poly):
    m, n = p.degree, q.degree
    size = m + n
    zero = p.ring.zero
    rows = []
    pc = list(reversed(p.coeffs))
    qc = list(reversed(q.coeffs))
    for i in range(n):
        rows.append([zero] * i + pc + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + qc + [zero] * (size - n - 1 - i))
    return rows


def bareiss_det(matrix, ring: Ring):
    """Fraction-free determinant; every division is exact in the ring."""
    n = len(matrix)
    if n == 0:
        return ring.one
    M = [list(row) for row in matrix]
    sign = 1
    prev = ring.one
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return ring.zero
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        pivot = M[k][k]
        for i in range(k + 1, n):
            mik = M[i][k]
            row_i, row_k = M[i], M[k]
            for j in range(k + 1, n):
                row_i[j] = exquo(row_i[j] * pivot - mik * row_k[j], prev)
        prev = pivot
    det = M[n - 1][n - 1]
    return -det if sign < 0 else det


def poly_resultant(p: Poly, q: Poly, var: str | None = None):
    """Sylvester-determinant resultant of ``p`` and ``q`` in their variable.

    The sign convention is the determinant of the Sylvester matrix with the
    deg(q) rows of ``p`` first; Res(t-2, t-3) = -1.
    """
    q2 = p._check(q)
    if q2 is None:
        raise IncompatibleRingError("resultant operands must share ring and variable")
    if var is not None and var != p.var:
        raise ValueError(f"polynomials are in {p.var}, not {var}")
    if p.is_zero() or q2.is_zero():
        raise DegenerateInputError("resultant with the zero polynomial")
    return bareiss_det(sylvester_matrix(p, q2), p.ring)


def _kth_root_scalar(c, k: int, ring: Ring):
    if c == 1:
        return ring.one
    if isinstance(c, Fraction):
        sign = 1
        if c < 0:
            if k % 2 == 0:
                return None
            sign, c = -1, -c
        a, b = _int_root(c.numerator, k), _int_root(c.denominator, k)
        if a is None or b is None:
            return None
        return Fraction(sign * a, b)
    if isinstance(c, Cyclotomic):
        if c.is_rational():
            r = _kth_root_scalar(c.to_fraction(), k, QQ)
            if r is not None:
                return ring.convert(r)
        if k % 2 == 0:
            s = c.sqrt()
            if s is None:
                return None
            return _kth_root_scalar(s, k // 2, ring)
        return None
    return None


def _int_root(n: int, k: int):
    if n < 0:
        return None
    r = round(n ** (1.0 / k)) if n < 2**1000 else int(math.exp(math.log(n) / k))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**k == n:
            return cand
    # fall back to integer Newton iteration for large inputs
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    return x if x**k == n else None


def poly_pth_root(p: Poly, k: int) -> Poly:
    """Return r with r**k == p, by coefficient recursion from the leading term."""
    if k < 1:
        raise ValueError("root order must be positive")
    if k == 1:
        return p
    if p.is_zero():
        return p
    D = p.degree
    if D % k:
        raise NotAPowerError(f"degree {D} is not divisible by {k}", index=D)
    ring = p.ring
    root_lc = _kth_root_scalar(p.lc, k, ring)
    if root_lc is None:
        raise NotAPowerError(f"leading coefficient {p.lc} is not a {k}-th power", index=D)
    m = D // k
    P = list(reversed(p.coeffs))
    alpha = ring.convert(Fraction(1, k))
    R = [ring.convert(root_lc)]
    P0 = P[0]
    for j in range(1, m + 1):
        acc = ring.zero
        for i in range(1, min(j, D) + 1):
            coef = alpha * ring.convert(i) - ring.convert(j - i)
            if P[i] != 0 and coef != 0:
                acc = acc + coef * P[i] * R[j - i]
        R.append(acc / (ring.convert(j) * P0))
    r = Poly._raw(list(reversed(R)), ring, p.var)
    check = r**k
    if check != p:
        for idx in range(D, -1, -1):
            if check.coeff(idx) != p.coeff(idx):
                raise NotAPowerError(f"not a {k}-th power: coefficient {idx} differs", index=idx)
    return r


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------
class RatFun:
    """num/den over a field, reduced, with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, _reduced=False):
        if not isinstance(num, Poly):
            raise TypeError("RatFun numerator must be a Poly")
        if den is None:
            den = Poly.const(1, num.ring, num.var)
        elif not isinstance(den, Poly):
            den = Poly.const(den, num.ring, num.var)
        if num._check(den) is None:
            raise IncompatibleRingError("numerator and denominator rings differ")
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            if num.is_zero():
                den = Poly.const(1, num.ring, num.var)
            elif den.degree > 0:
                g = poly_gcd(num, den)
                if g.degree > 0:
                    num, den = num // g, den // g
            lc = den.lc
            if lc != 1:
                inv = num.ring.one / lc
                num, den = num * inv, den * inv
        self.num = num
        self.den = den

    @property
    def ring(self):
        return self.num.ring

    @property
    def var(self):
        return self.num.var

    def _lift(self, other):
        if isinstance(other, RatFun):
            if other.ring != self.ring or other.var != self.var:
                raise IncompatibleRingError("rational functions over different rings")
            return other
        if isinstance(other, Poly):
            return RatFun(other, _reduced=True) if self.num._check(other) is not None else None
        try:
            c = self.ring.convert(other)
        except (TypeError, ValueError):
            return None
        return RatFun(Poly._raw((c,), self.ring, self.var), _reduced=True)

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def __neg__(self):
        return RatFun(-self.num, self.den, _reduced=True)

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return RatFun(self.num + other.num, self.den)
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFun(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other / self

    def exquo(self, other):
        return self / other

    def __pow__(self, k: int):
        if k < 0:
            return RatFun(self.den, self.num) ** (-k)
        return RatFun(self.num**k, self.den**k, _reduced=True)

    def __eq__(self, other):
        if isinstance(other, RatFun):
            return self.ring == other.ring and self.num == other.num and self.den == other.den
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self.den.degree == 0:
            return hash(self.num)
        return hash((self.num, self.den))

    def derivative(self) -> "RatFun":
        n, d = self.num, self.den
        return RatFun(n.derivative() * d - n * d.derivative(), d * d)

    def __call__(self, x):
        dv = self.den(x)
        if dv == 0:
            raise ZeroDivisionError(f"pole of {self} at {x}")
        return self.num(x) / dv

    def compose(self, g) -> "RatFun":
        """self(g) for g a Poly or RatFun in some variable."""
        if isinstance(g, Poly):
            g = RatFun(g, _reduced=True)
        a, b = g.num, g.den
        dn, dd = self.num.degree, self.den.degree
        D = max(dn, dd, 0)
        ring = g.ring
        num = self.num.map_coeffs(lambda c: c, ring=ring).homogeneous_eval(a, b, D)
        den = self.den.map_coeffs(lambda c: c, ring=ring).homogeneous_eval(a, b, D)
        if not isinstance(num, Poly):
            num = Poly.const(num, ring, a.var)
        if not isinstance(den, Poly):
            den = Poly.const(den, ring, a.var)
        return RatFun(num, den)

    def degree(self) -> int:
        """Degree as a map of the projective line: max(deg num, deg den)."""
        return max(self.num.degree, self.den.degree)

    def __repr__(self):
        return f"RatFun({self})"

    def __str__(self):
        if self.den.degree == 0:
            return str(self.num)
        return f"({self.num})/({self.den})"


class FunctionField(Ring):
    """Field of ``RatFun`` objects in ``var`` over ``base``."""

    is_field = True

    def __init__(self, base: Ring, var: str):
        self.base = base
        self.var = var
        self.name = f"{base.name}({var})"

    def convert(self, x):
        if isinstance(x, RatFun):
            if x.ring == self.base and x.var == self.var:
                return x
            raise IncompatibleRingError(f"{x.ring}({x.var}) is not {self.name}")
        if isinstance(x, Poly):
            if x.ring == self.base and x.var == self.var:
                return RatFun(x, _reduced=True)
            raise IncompatibleRingError(f"{x.ring}[{x.var}] is not {self.name}")
        return RatFun(Poly._raw((self.base.convert(x),), self.base, self.var), _reduced=True)

    def gen(self) -> RatFun:
        return RatFun(Poly.gen(self.base, self.var), _reduced=True)


def ratfun_derivative(f, var: str | None = None):
    """Quotient-rule derivative of a RatFun (or Poly) in its variable."""
    if isinstance(f, Poly):
        f = RatFun(f, _reduced=True)
    if var is not None and var != f.var:
        raise ValueError(f"{f} is a function of {f.var}, not {var}")
    return f.derivative()


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------
def _scalar_json(c):
    if isinstance(c, Cyclotomic):
        if c.is_rational():
            return _frac_str(c.to_fraction())
        return c.to_json()
    if isinstance(c, (int, Fraction)):
        return _frac_str(Fraction(c))
    return str(c)


def poly_to_json(p: Poly) -> list:
    """Coefficient list, lowest degree first; rationals as "p/q"."""
    return [_scalar_json(c) for c in p.coeffs]


def poly_from_json(data: list, ring: Ring = QQ, var: str = "t") -> Poly:
    coeffs = []
    for c in data:
        if isinstance(c, dict):
            c = Cyclotomic.from_json(c)
        else:
            c = parse_scalar(c)
        coeffs.append(c)
    if ring == QQ and any(isinstance(c, Cyclotomic) for c in coeffs):
        ring = CyclotomicField(next(c.N for c in coeffs if isinstance(c, Cyclotomic)))
    return Poly(coeffs, ring, var)
