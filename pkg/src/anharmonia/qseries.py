"""Truncated q-expansions with exact rational coefficients.

A ``FracSeries`` is a Laurent series in s = q^(1/r), r in {1, 2}, known up to
(but excluding) s^prec.  Everything modular lives here: Eisenstein series,
the discriminant, theta fourth powers, lambda and the e-values divided by
pi^2 (written e_hat).
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .report import Report

__all__ = [
    "FracSeries",
    "eisenstein",
    "delta",
    "theta_fourths",
    "e_hat",
    "lambda_series",
    "ModularRegistry",
    "registry",
    "dlog_delta_check",
    "sigma",
]


class FracSeries:
    __slots__ = ("r", "start", "coeffs", "prec")

    def __init__(self, coeffs, prec: int, start: int = 0, r: int = 1):
        if r not in (1, 2):
            raise ValueError("ramification must be 1 or 2")
        cs = [Fraction(c) for c in coeffs][: max(prec - start, 0)]
        k = 0
        while k < len(cs) and cs[k] == 0:
            k += 1
        cs = cs[k:]
        while cs and cs[-1] == 0:
            cs.pop()
        self.r = r
        self.start = start + k if cs else prec
        self.coeffs = cs
        self.prec = prec

    @classmethod
    def from_q(cls, coeffs, order: int) -> "FracSeries":
        """Integer-power series c_0 + c_1 q + ... known to q^order (exclusive)."""
        return cls(coeffs, order, 0, 1)

    @classmethod
    def const(cls, c, prec: int, r: int = 1) -> "FracSeries":
        return cls([c], prec, 0, r)

    @property
    def val(self) -> int:
        """s-valuation; equals ``prec`` for a series that is zero to precision."""
        return self.start

    @property
    def order(self) -> Fraction:
        """Truncation order measured in powers of q."""
        return Fraction(self.prec, self.r)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int) -> Fraction:
        """Coefficient of s^k."""
        if k >= self.prec:
            raise IndexError(f"s^{k} is beyond the truncation order {self.prec}")
        i = k - self.start
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def coeff_q(self, e) -> Fraction:
        """Coefficient of q^e for integer or half-integer e."""
        k = Fraction(e) * self.r
        if k.denominator != 1:
            return Fraction(0)
        return self[int(k)]

    def dense(self, lo: int = 0) -> list:
        return [self[k] for k in range(lo, self.prec)]

    # ramification ------------------------------------------------------------
    def ramify(self, r: int) -> "FracSeries":
        if r == self.r:
            return self
        if r != 2 or self.r != 1:
            raise ValueError("can only lift r=1 series to r=2")
        out = []
        for c in self.coeffs:
            out.extend((c, 0))
        return FracSeries(out, 2 * self.prec, 2 * self.start, 2)

    def _align(self, other):
        if isinstance(other, FracSeries):
            r = max(self.r, other.r)
            return self.ramify(r), other.ramify(r)
        return None

    # arithmetic ----------------------------------------------------------------
    def __neg__(self):
        return FracSeries([-c for c in self.coeffs], self.prec, self.start, self.r)

    def __add__(self, other):
        if not isinstance(other, FracSeries):
            other = FracSeries.const(Fraction(other), self.prec, self.r)
        a, b = self._align(other)
        prec = min(a.prec, b.prec)
        lo = min(a.start, b.start)
        return FracSeries([a._at(k) + b._at(k) for k in range(lo, prec)], prec, lo, a.r)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def _at(self, k):
        i = k - self.start
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __mul__(self, other):
        if not isinstance(other, FracSeries):
            c = Fraction(other)
            return FracSeries([x * c for x in self.coeffs], self.prec, self.start, self.r)
        a, b = self._align(other)
        prec = min(a.prec + b.start, b.prec + a.start)
        if a.is_zero() or b.is_zero():
            return FracSeries([], prec, prec, a.r)
        lo = a.start + b.start
        n = prec - lo
        out = [Fraction(0)] * max(n, 0)
        bc = b.coeffs
        for i, x in enumerate(a.coeffs[:n]):
            if not x:
                continue
            lim = min(len(bc), n - i)
            for j in range(lim):
                y = bc[j]
                if y:
                    out[i + j] += x * y
        return FracSeries(out, prec, lo, a.r)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = FracSeries.const(1, self.prec - self.start, self.r) if k == 0 else None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def inverse(self) -> "FracSeries":
        if self.is_zero():
            raise ZeroDivisionError("inverse of a series that vanishes to its precision")
        a = self.coeffs
        rel = self.prec - self.start
        inv0 = 1 / a[0]
        out = [inv0]
        for k in range(1, rel):
            acc = Fraction(0)
            for j in range(1, min(k, len(a) - 1) + 1):
                acc += a[j] * out[k - j]
            out.append(-acc * inv0)
        return FracSeries(out, rel - self.start, -self.start, self.r)

    def __truediv__(self, other):
        if isinstance(other, FracSeries):
            return self * other.inverse()
        return self * (1 / Fraction(other))

    def __rtruediv__(self, other):
        return self.inverse() * other

    def D(self) -> "FracSeries":
        """q d/dq, acting as s^k -> (k/r) s^k."""
        r = self.r
        return FracSeries(
            [c * Fraction(self.start + i, r) for i, c in enumerate(self.coeffs)],
            self.prec,
            self.start,
            r,
        )

    def dlog(self) -> "FracSeries":
        """D(f)/f; well defined whenever f has a nonzero leading coefficient."""
        return self.D() / self

    def mirror(self) -> "FracSeries":
        """Substitute s -> -s."""
        return FracSeries(
            [c if (self.start + i) % 2 == 0 else -c for i, c in enumerate(self.coeffs)],
            self.prec,
            self.start,
            self.r,
        )

    def truncate(self, prec: int) -> "FracSeries":
        return FracSeries(self.coeffs, min(prec, self.prec), self.start, self.r)

    # comparison ----------------------------------------------------------------
    def first_difference(self, other) -> int | None:
        """Smallest s-exponent where the series differ, or None up to common precision."""
        if not isinstance(other, FracSeries):
            other = FracSeries.const(Fraction(other), self.prec, self.r)
        a, b = self._align(other)
        prec = min(a.prec, b.prec)
        for k in range(min(a.start, b.start), prec):
            if a._at(k) != b._at(k):
                return k
        return None

    def __eq__(self, other):
        if isinstance(other, (FracSeries, int, Fraction)):
            return self.first_difference(other) is None
        return NotImplemented

    __hash__ = None

    # presentation --------------------------------------------------------------
    def _mono(self, k):
        e = Fraction(k, self.r)
        if e == 0:
            return ""
        if e == 1:
            return "q"
        return f"q^({e})" if e.denominator != 1 or e < 0 else f"q^{e}"

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            m = self._mono(self.start + i)
            if not m:
                terms.append(str(c))
            elif c == 1:
                terms.append(m)
            elif c == -1:
                terms.append("-" + m)
            else:
                terms.append(f"{c} {m}")
        body = " + ".join(terms).replace("+ -", "- ") if terms else "0"
        return f"{body} + O({self._mono(self.prec) or '1'})"

    def __repr__(self):
        return f"FracSeries({self})"

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "val": self.start,
            "prec": self.prec,
            "coeffs": [str(c) for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FracSeries":
        return cls([Fraction(c) for c in obj["coeffs"]], obj["prec"], obj["val"], obj["r"])


# ---------------------------------------------------------------------------
# modular objects
# ---------------------------------------------------------------------------
@lru_cache(maxsize=None)
def _sigma_table(k: int, n: int) -> tuple:
    out = [0] * n
    for d in range(1, n):
        p = d**k
        for m in range(d, n, d):
            out[m] += p
    return tuple(out)


def sigma(k: int, n: int) -> int:
    """Divisor power sum sigma_k(n)."""
    return _sigma_table(k, n + 1)[n]


_EIS = {2: -24, 4: 240, 6: -504}


def eisenstein(k: int, order: int) -> FracSeries:
    """E_k = 1 + c_k sum sigma_{k-1}(n) q^n, known to q^order (exclusive)."""
    if k not in _EIS:
        raise ValueError(f"unsupported weight {k}; expected 2, 4 or 6")
    if order < 1:
        raise ValueError("order must be at least 1")
    sig = _sigma_table(k - 1, order)
    c = _EIS[k]
    return FracSeries.from_q([1] + [c * sig[n] for n in range(1, order)], order)


def delta(order: int) -> FracSeries:
    """Discriminant q prod (1 - q^n)^24 to q^order."""
    if order < 1:
        raise ValueError("order must be at least 1")
    n = order - 1
    prod = [0] * max(n, 1)
    prod[0] = 1
    for m in range(1, n):
        for _ in range(24):
            for i in range(n - 1, m - 1, -1):
                prod[i] -= prod[i - m]
    return FracSeries([0] + prod[:n], order)


def _theta_sum(prec: int, sign: int) -> list:
    out = [0] * prec
    n = 0
    while n * n < prec:
        c = 1 if n == 0 else 2
        out[n * n] += c * (sign**n)
        n += 1
    return out


def _poly_pow(a: list, k: int, prec: int) -> list:
    result = [1] + [0] * (prec - 1)
    for _ in range(k):
        nxt = [0] * prec
        for i, x in enumerate(result):
            if x:
                for j in range(prec - i):
                    if a[j]:
                        nxt[i + j] += x * a[j]
        result = nxt
    return result


@lru_cache(maxsize=16)
def theta_fourths(order: int):
    """(theta_2^4, theta_3^4, theta_4^4) in s = q^(1/2), known to q^order."""
    if order < 1:
        raise ValueError("order must be at least 1")
    prec = 2 * order
    t3 = _poly_pow(_theta_sum(prec, 1), 4, prec)
    t4 = _poly_pow(_theta_sum(prec, -1), 4, prec)
    # theta_2 = 2 s^(1/4) sum_{n>=0} s^(n(n+1)), so theta_2^4 = 16 s (sum)^4
    base = [0] * prec
    n = 0
    while n * (n + 1) < prec:
        base[n * (n + 1)] += 1
        n += 1
    t2 = [0] + [16 * c for c in _poly_pow(base, 4, prec)[: prec - 1]]
    return (
        FracSeries(t2, prec, 0, 2),
        FracSeries(t3, prec, 0, 2),
        FracSeries(t4, prec, 0, 2),
    )


def e_hat(i: int, order: int) -> FracSeries:
    """e_i / pi^2 for the lattice Z + tau Z.

    Labeling: e_hat_1 = 2/3 + 16 q + ..., e_hat_2 = -1/3 - 8 q^(1/2) + ...,
    e_hat_3 its mirror under q^(1/2) -> -q^(1/2).
    """
    t2, t3, t4 = theta_fourths(order)
    if i == 1:
        return (t3 + t4) / 3
    if i == 2:
        return -(t2 + t3) / 3
    if i == 3:
        return (t2 - t4) / 3
    raise ValueError("e-value index must be 1, 2 or 3")


def lambda_series(order: int) -> FracSeries:
    """Modular lambda = theta_2^4 / theta_3^4."""
    t2, t3, _ = theta_fourths(order)
    return t2 / t3


class ModularRegistry:
    """Every modular series at one common truncation order (in q)."""

    def __init__(self, order: int):
        self.order = order
        self.E2 = eisenstein(2, order)
        self.E4 = eisenstein(4, order)
        self.E6 = eisenstein(6, order)
        self.Delta = delta(order)
        self.theta2_4, self.theta3_4, self.theta4_4 = theta_fourths(order)
        self.lam = lambda_series(order)
        self.e_hat = {i: e_hat(i, order) for i in (1, 2, 3)}

    def __getitem__(self, name: str) -> FracSeries:
        if name == "lambda":
            return self.lam
        if name.startswith("e_hat"):
            return self.e_hat[int(name[-1])]
        return getattr(self, name)

    names = ("E2", "E4", "E6", "Delta", "theta2_4", "theta3_4", "theta4_4", "lambda", "e_hat1", "e_hat2", "e_hat3")


@lru_cache(maxsize=8)
def registry(order: int) -> ModularRegistry:
    return ModularRegistry(order)


def dlog_delta_check(order: int, delta_series: FracSeries | None = None) -> Report:
    """D(Delta)/Delta = E_2 to the requested order."""
    if order < 2:
        raise ValueError("order must be at least 2")
    rep = Report("qseries.dlog_delta")
    d = delta_series if delta_series is not None else delta(order + 1)
    lhs = d.dlog()
    rhs = eisenstein(2, order)
    k = lhs.truncate(order).first_difference(rhs)
    rep.exact("D(Delta)/Delta = E2", k is None, residual=f"first mismatch at q^{k}", order=order)
    return rep
