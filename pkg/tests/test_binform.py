import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from anharmonia.binform import (
    KLEIN_KINDS,
    BinaryForm,
    chazy_target,
    fourth_transvectant,
    fourth_transvectant_coeffs,
    generalized_chazy_residue,
    hessian_inhom,
    klein_form,
    omega_transvectant,
    random_form,
    reconciliation_constant,
    transvect_suite,
    transvectant_inhom,
)
from anharmonia.errors import DegenerateInputError

fr = st.fractions(min_value=-9, max_value=9, max_denominator=4)


def forms(lo=1, hi=8):
    return st.lists(fr, min_size=lo + 1, max_size=hi + 1).map(BinaryForm)


@given(forms(), forms(), st.integers(0, 4))
def test_omega_matches_inhomogeneous(f, g, r):
    r = min(r, f.degree, g.degree)
    lhs = omega_transvectant(f, g, r).inhom()
    rhs = transvectant_inhom(f.inhom(), g.inhom(), r, f.degree, g.degree)
    assert lhs == rhs


@given(forms(4, 8))
def test_alpha_recursion_is_half_normalized(f):
    half = omega_transvectant(f, f, 4, normalized=True).scale(Fraction(1, 2))
    assert fourth_transvectant_coeffs(f).a == half.a


def test_alpha_closed_forms():
    a = [Fraction(k * k + 1, k + 2) for k in range(7)]
    f = BinaryForm(a)
    al = fourth_transvectant_coeffs(f).a
    n = 6
    assert al[0] == a[0] * a[4] - 4 * a[1] * a[3] + 3 * a[2] ** 2
    assert al[-1] == a[n] * a[n - 4] - 4 * a[n - 1] * a[n - 3] + 3 * a[n - 2] ** 2
    m = 2 * (n - 4)
    assert m * al[1] == (n - 4) * (a[0] * a[5] - 3 * a[1] * a[4] + 2 * a[2] * a[3])


@given(forms(1, 6), forms(1, 6), st.integers(0, 3))
def test_transvectant_antisymmetry(f, g, r):
    r = min(r, f.degree, g.degree)
    assert omega_transvectant(f, g, r) == omega_transvectant(g, f, r).scale((-1) ** r)


@given(forms(2, 6), fr, fr)
def test_covariance_under_translation(f, b, _):
    # (f o A, f o A)^4 = det(A)^4 (f, f)^4 o A; here A = [[1, b], [0, 1]]
    if f.degree < 4:
        return
    t = omega_transvectant(f, f, 4)
    fa = f.transform(1, b, 0, 1)
    assert omega_transvectant(fa, fa, 4) == t.transform(1, b, 0, 1)


def test_reconciliation_constant_is_one():
    for m in range(1, 7):
        for n in range(1, 7):
            for r in range(min(m, n) + 1):
                assert reconciliation_constant(m, n, r) == 1


def test_hessian_is_half_second_transvectant():
    f = random_form(5, random.Random(3))
    assert hessian_inhom(f.inhom(), 5) * 2 == omega_transvectant(f, f, 2).inhom()


@pytest.mark.parametrize("kind", KLEIN_KINDS)
def test_klein_forms_vanish(kind):
    f = klein_form(kind)
    assert all(a == 0 for a in fourth_transvectant_coeffs(f).a)
    assert fourth_transvectant(f.inhom(), f.degree).is_zero()


def test_octahedral_form_literal():
    assert klein_form("octahedral").monomials() == [0, 1, 0, 0, 0, 1, 0]


def test_generic_quintic_nonzero():
    f = random_form(5, random.Random(11))
    assert any(a != 0 for a in fourth_transvectant_coeffs(f).a)


def test_degree_guard():
    with pytest.raises(DegenerateInputError):
        fourth_transvectant_coeffs(BinaryForm([1, 2, 3]))
    with pytest.raises(ValueError):
        klein_form("cubic")


@pytest.mark.parametrize("n", [5, 6, 7])
def test_generalized_chazy(n):
    residue, scalar = generalized_chazy_residue(n)
    assert scalar == -n * n * (n - 1)
    assert residue - scalar * chazy_target(n) == 0


def test_transvect_suite_passes():
    assert transvect_suite(seed=1, cases=30).passed
