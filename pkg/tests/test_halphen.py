from fractions import Fraction

import pytest

from anharmonia import halphen
from anharmonia.qseries import FracSeries, registry


def test_eisenstein_and_ramanujan():
    assert halphen.verify_eisenstein(64).passed
    assert halphen.verify_ramanujan(64).passed


def test_ramanujan_detects_wrong_e6():
    R = registry(40)
    bad = R.E6 + FracSeries.from_q([0] * 5 + [1], 40)
    assert not halphen.verify_ramanujan(32, E6=bad).passed


def test_vieta_and_riccati():
    assert halphen.verify_vieta(32).passed
    assert halphen.verify_e_riccati(32).passed


def test_chazy_scale():
    assert halphen.verify_chazy_series(40).passed
    assert not halphen.verify_chazy_series(20, scale=Fraction(1, 5)).passed


def test_halphen_system():
    assert halphen.verify_hatted_halphen(32).passed
    X = halphen.halphen_X(8)
    assert [x.coeff_q(0) for x in X.values()] == [Fraction(1, 4), 0, 0]


def test_lambda_parameterization():
    assert halphen.lambda_parameterization_check(24).passed
    assert not halphen.lambda_parameterization_check(16, swap=True).passed


def test_cubic_needs_chazy():
    assert halphen.cubic_dh_identity().passed
    assert not halphen.cubic_dh_identity(use_chazy=False).passed


@pytest.mark.parametrize("check", ["s4_s3_equivalence", "degenerate_solutions_check", "chazy_j_exploratory"])
def test_symbolic(check):
    assert getattr(halphen, check)().passed


def test_modular_aggregate():
    rep = halphen.verify_modular(32)
    assert rep.passed and len(rep.checks) >= 8
