from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from anharmonia.algebra import (
    QQ,
    Cyclotomic,
    CyclotomicField,
    Poly,
    QuotientRing,
    RatFun,
    cyclotomic_polynomial,
    euler_phi,
    interpolate,
    poly_from_json,
    poly_gcd,
    poly_pth_root,
    poly_resultant,
    poly_to_json,
    rational_interpolate,
)
from anharmonia.errors import IncompatibleRingError, NotAPowerError

fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)
polys = st.lists(fracs, min_size=0, max_size=6).map(lambda cs: Poly(cs))
nonzero_polys = polys.filter(lambda p: not p.is_zero())


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a - a == Poly([])


@given(polys, nonzero_polys)
def test_divmod(a, b):
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.is_zero() or r.degree < b.degree


@given(nonzero_polys, nonzero_polys)
def test_gcd_divides(a, b):
    g = poly_gcd(a, b)
    assert (a % g).is_zero() and (b % g).is_zero()


@given(nonzero_polys, st.integers(min_value=1, max_value=4))
def test_pth_root_roundtrip(a, k):
    a = a.monic()
    assert poly_pth_root(a**k, k) == a


def test_pth_root_rejects_non_power():
    with pytest.raises(NotAPowerError):
        poly_pth_root(Poly([1, 0, 1, 1]), 2)


def test_resultant_of_linear_factors():
    p = Poly([-1, 1]) * Poly([-2, 1])
    q = Poly([-3, 1])
    assert poly_resultant(p, q) == 2
    assert poly_resultant(p, Poly([-2, 1])) == 0


@given(polys)
def test_json_roundtrip(p):
    assert poly_from_json(poly_to_json(p)) == p


def test_cyclotomic_field_basics():
    assert euler_phi(12) == 4
    assert cyclotomic_polynomial(5) == (1, 1, 1, 1, 1)
    z = Cyclotomic.zeta(12)
    assert z**12 == Cyclotomic(12, [1])
    i = z**3
    assert i * i == Cyclotomic(12, [-1])
    assert (z + 1) * (z + 1).inverse() == Cyclotomic(12, [1])


@given(st.lists(fracs, min_size=1, max_size=4), st.lists(fracs, min_size=1, max_size=4))
def test_cyclotomic_field_axioms(a, b):
    x, y = Cyclotomic(12, a), Cyclotomic(12, b)
    assert x * y == y * x
    if not y.is_zero():
        assert (x / y) * y == x


def test_cyclotomic_conjugate_and_embed():
    z = Cyclotomic.zeta(5)
    assert abs(complex(z.embed(30)) - complex(__import__("cmath").exp(2j * __import__("math").pi / 5))) < 1e-12
    assert (z * z.conjugate()).is_rational()


def test_mixed_rings_rejected():
    F = CyclotomicField(12)
    p = Poly([F.gen(), 1], F)
    q = Poly([Cyclotomic.zeta(5), 1], CyclotomicField(5))
    with pytest.raises(IncompatibleRingError):
        p + q


def test_ratfun_reduces_and_differentiates():
    t = Poly.gen()
    f = RatFun(t * t - 1, t - 1)
    assert f == RatFun(t + 1)
    g = RatFun(Poly([1]), t)
    assert g.derivative() == RatFun(Poly([-1]), t * t)


def test_quotient_ring_generator_satisfies_modulus():
    U = Poly([1, 0, 1])  # y^2 + 1
    R = QuotientRing(U.__class__(U.coeffs, QQ, "y"))
    y = R.gen()
    assert y * y + R.convert(1) == R.convert(0)


@given(st.lists(fracs, min_size=1, max_size=5))
def test_interpolate_recovers_polynomial(cs):
    p = Poly(cs, QQ, "T")
    xs = [Fraction(k) for k in range(len(cs) + 1)]
    assert interpolate(xs, [p(x) for x in xs], QQ) == p


def test_rational_interpolate():
    T = Poly.gen(QQ, "T")
    f = RatFun(T * T + 3, T * T - T * 5 + 7)
    xs = [Fraction(k, 3) for k in range(5)]
    got = rational_interpolate(xs, [f(x) for x in xs], 2, 2, QQ)
    assert got == f


@given(st.lists(st.fractions(min_value=-20, max_value=20, max_denominator=9), min_size=8, max_size=8))
def test_rational_interpolate_cyclotomic(cs):
    from anharmonia.algebra.modular import rational_interpolate_cyclotomic
    from anharmonia.algebra.rings import CyclotomicField

    K = CyclotomicField(12)
    z = K.gen()
    A = Poly([K.convert(cs[0]) + z * cs[1], K.convert(cs[2]), z * cs[3]], K, "T")
    B = Poly([K.convert(cs[4]) + z * z * cs[5], K.convert(cs[6]) + 1, K.one], K, "T")
    xs = [Fraction(k, 2) + z * k for k in range(1, 6)]
    if any(B(x) == 0 for x in xs):
        return
    G = rational_interpolate_cyclotomic(xs, [A(x) / B(x) for x in xs], 2, 2, K)
    assert G is not None and not isinstance(G, str)
    assert all(G(x) == A(x) / B(x) for x in xs + [z + 7])
