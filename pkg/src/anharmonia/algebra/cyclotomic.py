"""Exact arithmetic in the cyclotomic fields Q(zeta_N).

Elements are stored as an integer coordinate vector over a common positive
denominator, in the power basis 1, z, ..., z^(d-1) with d = phi(N), reduced
modulo the N-th cyclotomic polynomial.  The integer form keeps products cheap:
a product is one integer convolution followed by a fold with a precomputed
reduction table.
"""
from __future__ import annotations

import cmath
import itertools
import math
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from ..errors import IncompatibleRingError

__all__ = [
    "Cyclotomic",
    "cyclotomic_polynomial",
    "euler_phi",
    "cyc_embed",
]


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _int_poly_divexact(a, b):
    # a, b: integer coefficient lists (low -> high), b monic
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1]
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    assert not any(a), "cyclotomic division left a remainder"
    return q


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple:
    """Integer coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("conductor must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _int_poly_divexact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


class _FieldData:
    __slots__ = ("N", "d", "phi", "power_table", "units")

    def __init__(self, N: int):
        self.N = N
        self.phi = cyclotomic_polynomial(N)
        self.d = len(self.phi) - 1
        d = self.d
        # x^k mod Phi_N for k < max(2d - 1, N)
        top = max(2 * d - 1, N)
        table = []
        vec = [0] * d
        vec[0] = 1
        for k in range(top):
            if k < d:
                v = [0] * d
                v[k] = 1
                table.append(tuple(v))
            else:
                prev = table[k - 1]
                # multiply prev by x
                shifted = [0] + list(prev[:-1])
                carry = prev[-1]
                if carry:
                    for j in range(d):
                        shifted[j] -= carry * self.phi[j]
                table.append(tuple(shifted))
        self.power_table = tuple(table)
        self.units = tuple(k for k in range(1, N + 1) if math.gcd(k, N) == 1) if N > 1 else (1,)


@lru_cache(maxsize=None)
def _data(N: int) -> _FieldData:
    return _FieldData(N)


def _normalize(num, den):
    g = den
    for c in num:
        if c:
            g = math.gcd(g, c)
            if g == 1:
                break
    if den < 0:
        g = -g
    if g != 1:
        num = tuple(c // g for c in num)
        den //= g
    return tuple(num), den


class Cyclotomic:
    """An element of Q(zeta_N).

    ``Cyclotomic(N, coords)`` takes rational coordinates in the power basis;
    shorter coordinate lists are zero-padded, longer ones are reduced.
    """

    __slots__ = ("N", "_num", "_den")

    def __init__(self, N: int, coords=()):
        data = _data(N)
        coords = [Fraction(c) for c in coords]
        den = 1
        for c in coords:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [int(c * den) for c in coords]
        vec = [0] * data.d
        for k, c in enumerate(ints):
            if c:
                row = data.power_table[k] if k < len(data.power_table) else _power_vec(data, k)
                for j, r in enumerate(row):
                    if r:
                        vec[j] += c * r
        self.N = N
        self._num, self._den = _normalize(vec, den)

    @classmethod
    def _make(cls, N, num, den=1):
        obj = object.__new__(cls)
        obj.N = N
        obj._num, obj._den = _normalize(num, den)
        return obj

    # constructors ---------------------------------------------------------
    @classmethod
    def zeta(cls, N: int, k: int = 1) -> "Cyclotomic":
        data = _data(N)
        return cls._make(N, _power_vec(data, k % N if N > 1 else 0))

    @classmethod
    def from_rational(cls, N: int, value) -> "Cyclotomic":
        value = Fraction(value)
        d = _data(N).d
        return cls._make(N, (value.numerator,) + (0,) * (d - 1), value.denominator)

    # basic views -----------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self._num)

    @property
    def coords(self) -> tuple:
        return tuple(Fraction(c, self._den) for c in self._num)

    def is_zero(self) -> bool:
        return not any(self._num)

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self._num[0], self._den)

    def __bool__(self):
        return not self.is_zero()

    def __hash__(self):
        if self.is_rational():
            return hash(Fraction(self._num[0], self._den))
        return hash((self.N, self._num, self._den))

    # coercion --------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Cyclotomic):
            if other.N != self.N:
                if other.is_rational():
                    return Cyclotomic.from_rational(self.N, other.to_fraction())
                if self.is_rational():
                    return None
                raise IncompatibleRingError(
                    f"cannot combine Q(zeta_{self.N}) with Q(zeta_{other.N})"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return Cyclotomic.from_rational(self.N, other)
        return None

    def lift(self, M: int) -> "Cyclotomic":
        """Image under Q(zeta_N) -> Q(zeta_M), zeta_N -> zeta_M^(M/N)."""
        if M % self.N:
            raise IncompatibleRingError(f"{self.N} does not divide {M}")
        step = M // self.N
        data = _data(M)
        vec = [0] * data.d
        for k, c in enumerate(self._num):
            if c:
                for j, r in enumerate(_power_vec(data, k * step)):
                    vec[j] += c * r
        return Cyclotomic._make(M, vec, self._den)

    # arithmetic ------------------------------------------------------------
    def __neg__(self):
        return Cyclotomic._make(self.N, tuple(-c for c in self._num), self._den)

    def __pos__(self):
        return self

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, da, b, db = self._num, self._den, other._num, other._den
        if da == db:
            return Cyclotomic._make(self.N, tuple(x + y for x, y in zip(a, b)), da)
        return Cyclotomic._make(self.N, tuple(x * db + y * da for x, y in zip(a, b)), da * db)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return Cyclotomic._make(
                self.N, tuple(c * other.numerator for c in self._num), self._den * other.denominator
            )
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_rational():
            return self * Fraction(other._num[0], other._den)
        if self.is_rational():
            return other * Fraction(self._num[0], self._den)
        data = _data(self.N)
        d = data.d
        a, b = self._num, other._num
        conv = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        table = data.power_table
        for k in range(2 * d - 2, d - 1, -1):
            c = conv[k]
            if c:
                row = table[k]
                for j in range(d):
                    r = row[j]
                    if r:
                        conv[j] += c * r
        return Cyclotomic._make(self.N, conv[:d], self._den * other._den)

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        if self.is_rational():
            return Cyclotomic.from_rational(self.N, 1 / self.to_fraction())
        d = _data(self.N).d
        # column j of M is the coordinate vector of self * z^j
        cols = []
        z = Cyclotomic.zeta(self.N)
        cur = Cyclotomic._make(self.N, self._num, 1)
        for _ in range(d):
            cols.append(cur.coords)
            cur = cur * z
        rows = [[cols[j][i] for j in range(d)] + [Fraction(1 if i == 0 else 0)] for i in range(d)]
        sol = _solve_fraction(rows, d)
        return Cyclotomic(self.N, [s * self._den for s in sol])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def exquo(self, other):
        return self / other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = Cyclotomic.from_rational(self.N, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Cyclotomic):
            if other.N != self.N:
                if self.is_rational() and other.is_rational():
                    return self.to_fraction() == other.to_fraction()
                return False
            return self._num == other._num and self._den == other._den
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self._num[0], self._den) == other
        return NotImplemented

    # Galois action and embeddings -----------------------------------------
    def galois(self, k: int) -> "Cyclotomic":
        """Apply the automorphism zeta -> zeta^k (k coprime to N)."""
        if math.gcd(k, self.N) != 1:
            raise ValueError(f"{k} is not a unit modulo {self.N}")
        data = _data(self.N)
        vec = [0] * data.d
        for j, c in enumerate(self._num):
            if c:
                for i, r in enumerate(_power_vec(data, (j * k) % self.N)):
                    vec[i] += c * r
        return Cyclotomic._make(self.N, vec, self._den)

    def conjugate(self) -> "Cyclotomic":
        return self.galois(-1 % self.N if self.N > 1 else 1)

    def __complex__(self):
        w = cmath.exp(2j * cmath.pi / self.N)
        return sum(c * w**k for k, c in enumerate(self._num)) / self._den

    def embed(self, precision: int = 30, k: int = 1):
        """mpmath approximation under zeta_N -> exp(2 pi i k / N)."""
        with mpmath.workdps(precision + 10):
            w = mpmath.expjpi(mpmath.mpf(2 * k) / self.N)
            total = mpmath.mpc(0)
            for j, c in enumerate(self._num):
                if c:
                    total += c * w**j
            return +(total / self._den)

    def sqrt(self):
        """Exact square root inside Q(zeta_N), or None when there is none."""
        if self.is_zero():
            return self
        if self.is_rational():
            r = _rational_sqrt(self.to_fraction())
            if r is not None:
                return Cyclotomic.from_rational(self.N, r)
        data = _data(self.N)
        units = data.units
        d = data.d
        vals = [complex(self.galois(k)) for k in units]
        roots = [cmath.sqrt(v) for v in vals]
        V = np.array([[cmath.exp(2j * cmath.pi * k * j / self.N) for j in range(d)] for k in units])
        for signs in itertools.product((1, -1), repeat=d - 1):
            rhs = np.array([roots[0]] + [s * r for s, r in zip(signs, roots[1:])])
            try:
                sol = np.linalg.solve(V, rhs)
            except np.linalg.LinAlgError:
                return None
            if np.max(np.abs(sol.imag)) > 1e-6:
                continue
            cand = Cyclotomic(self.N, [Fraction(float(x)).limit_denominator(10**6) for x in sol.real])
            if cand * cand == self:
                return cand
        return None

    # presentation ----------------------------------------------------------
    def __repr__(self):
        return f"Cyclotomic({self.N}, {[str(c) for c in self.coords]})"

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coords):
            if not c:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                mono = f"z{self.N}" + (f"^{k}" if k > 1 else "")
                if c == 1:
                    terms.append(mono)
                elif c == -1:
                    terms.append("-" + mono)
                else:
                    terms.append(f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"

    def to_json(self) -> dict:
        return {"N": self.N, "coords": [_frac_str(c) for c in self.coords]}

    @classmethod
    def from_json(cls, obj: dict) -> "Cyclotomic":
        return cls(int(obj["N"]), [Fraction(c) for c in obj["coords"]])


def _frac_str(c: Fraction) -> str:
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


def _power_vec(data: _FieldData, k: int):
    if data.N > 1:
        k %= data.N
    else:
        k = 0
    return data.power_table[k]


def _rational_sqrt(x: Fraction):
    if x < 0:
        return None
    a, b = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


def _solve_fraction(rows, n):
    # Gauss-Jordan on an augmented n x (n+1) Fraction matrix
    for col in range(n):
        piv = next(r for r in range(col, n) if rows[r][col] != 0)
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = 1 / rows[col][col]
        rows[col] = [v * inv for v in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
    return [rows[i][n] for i in range(n)]


def cyc_embed(z, precision: int = 30):
    """Complex approximation of ``z`` with error below 10^-precision."""
    if isinstance(z, Cyclotomic):
        return z.embed(precision)
    with mpmath.workdps(precision + 10):
        return mpmath.mpc(mpmath.mpf(Fraction(z).numerator) / Fraction(z).denominator)
