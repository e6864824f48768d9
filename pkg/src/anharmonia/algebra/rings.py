"""Coefficient-ring descriptors.

A descriptor says which ring a polynomial's coefficients live in, converts
plain numbers into that ring, and lets binary operations refuse to mix rings.
"""
from __future__ import annotations

from fractions import Fraction

from .cyclotomic import Cyclotomic

__all__ = [
    "Ring",
    "QQ",
    "CyclotomicField",
    "SympyDomain",
    "exquo",
    "parse_scalar",
]


def parse_scalar(x):
    """Accept ints, Fractions, and "p/q" strings."""
    if isinstance(x, str):
        return Fraction(x.strip())
    return x


class Ring:
    name = "ring"
    is_field = False

    @property
    def zero(self):
        return self.convert(0)

    @property
    def one(self):
        return self.convert(1)

    def convert(self, x):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Ring) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return self.name


class RationalField(Ring):
    name = "QQ"
    is_field = True

    def convert(self, x):
        x = parse_scalar(x)
        if isinstance(x, Cyclotomic):
            return x.to_fraction()
        return Fraction(x)


QQ = RationalField()


class CyclotomicField(Ring):
    is_field = True

    def __init__(self, N: int):
        self.N = N
        self.name = f"QQ(zeta_{N})"

    def convert(self, x):
        x = parse_scalar(x)
        if isinstance(x, Cyclotomic):
            if x.N == self.N:
                return x
            if x.is_rational():
                return Cyclotomic.from_rational(self.N, x.to_fraction())
            if self.N % x.N == 0:
                return x.lift(self.N)
            raise ValueError(f"{x!r} is not in {self.name}")
        return Cyclotomic.from_rational(self.N, x)

    def gen(self, k: int = 1) -> Cyclotomic:
        return Cyclotomic.zeta(self.N, k)


class SympyDomain(Ring):
    """Wraps a ``sympy.polys`` ring or field (``ring(...)``/``field(...)``)."""

    def __init__(self, domain):
        self.domain = domain
        self.name = f"sympy:{domain}"
        from sympy.polys.fields import FracField

        self.is_field = isinstance(domain, FracField)

    def convert(self, x):
        x = parse_scalar(x)
        if isinstance(x, Cyclotomic):
            x = x.to_fraction()
        if isinstance(x, Fraction):
            return self.domain(x.numerator) / self.domain(x.denominator)
        return self.domain(x)


def exquo(a, b):
    """Exact quotient a / b in whatever ring a and b belong to."""
    if hasattr(a, "exquo") and not isinstance(a, (int, Fraction)):
        return a.exquo(b)
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r:
            return Fraction(a, b)
        return q
    return a / b
