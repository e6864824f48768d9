from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from anharmonia.qseries import (
    FracSeries,
    delta,
    dlog_delta_check,
    e_hat,
    eisenstein,
    lambda_series,
    registry,
    sigma,
    theta_fourths,
)

coeff_lists = st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=5), min_size=1, max_size=8)


def test_eisenstein_leading_terms():
    assert [eisenstein(2, 5)[k] for k in range(5)] == [1, -24, -72, -96, -168]
    assert [eisenstein(4, 3)[k] for k in range(3)] == [1, 240, 2160]
    assert [eisenstein(6, 2)[k] for k in range(2)] == [1, -504]
    assert sigma(3, 2) == 9


def test_eisenstein_rejects_weight():
    with pytest.raises(ValueError):
        eisenstein(8, 4)


def test_theta_jacobi_identity():
    t2, t3, t4 = theta_fourths(40)
    assert t2.r == 2 and t2.val == 1 and t2[1] == 16
    assert t3[0] == 1
    assert (t3 - t2 - t4).first_difference(0) is None


def test_e_hat_labels():
    e1, e2, e3 = (e_hat(i, 8) for i in (1, 2, 3))
    assert e1[0] == Fraction(2, 3) and e1.coeff_q(1) == 16
    assert e2[1] == -8
    assert (e1 + e2 + e3).is_zero()
    assert e3 == e2.mirror()


def test_lambda_series():
    lam = lambda_series(4)
    assert [lam[k] for k in range(1, 5)] == [16, -128, 704, -3072]
    t2, t3, _ = theta_fourths(4)
    assert lam * t3 == t2


def test_dlog_delta():
    assert dlog_delta_check(20).passed
    assert dlog_delta_check(2).passed
    d = delta(21)
    bad = FracSeries([c if k != 5 else c + 1 for k, c in enumerate(d.dense())], d.prec)
    rep = dlog_delta_check(20, bad)
    assert not rep.passed
    assert "q^4" in rep.checks[0].residual


@given(coeff_lists, coeff_lists)
def test_series_ring(a, b):
    A, B = FracSeries.from_q(a, 8), FracSeries.from_q(b, 8)
    assert A * B == B * A
    assert (A + B) - B == A
    assert (A * B).D() == A.D() * B + A * B.D()


@given(coeff_lists)
def test_inverse(a):
    if a[0] == 0:
        a = [Fraction(1)] + a
    A = FracSeries.from_q(a, 8)
    assert A * A.inverse() == 1


@given(coeff_lists)
def test_json_roundtrip(a):
    A = FracSeries(a, 10, 0, 2)
    assert FracSeries.from_json(A.to_json()) == A


def test_registry_is_cached_and_named():
    R = registry(8)
    assert R is registry(8)
    for name in R.names:
        assert isinstance(R[name], FracSeries)
