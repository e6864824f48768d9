import random
from fractions import Fraction

import pytest

from anharmonia.darboux import (
    build_phi,
    constants,
    darboux_suite,
    ideal_for,
    jet_ring,
    n2_impossibility,
    tau4_check,
    verify_commutator,
    verify_first_integral_relations,
    verify_leibniz,
)
from anharmonia.errors import DegenerateInputError


@pytest.mark.parametrize("n", [3, 4, 6])
def test_suite_passes(n):
    rep = darboux_suite(n)
    assert rep.passed, [c.name for c in rep.checks if not c.passed]


@pytest.mark.slow
def test_suite_n12():
    assert darboux_suite(12).passed


def test_n2_flagged():
    rep = n2_impossibility()
    assert rep.passed
    assert any("flag" in c.details for c in rep.checks)


def test_perturbed_tau4_fails():
    assert tau4_check(4).passed
    assert not tau4_check(4, perturb=True).passed


def test_wrong_ideal_breaks_cofactors():
    from anharmonia.darboux import ConstraintIdeal, verify_cofactors

    J = jet_ring(10)
    bad = ConstraintIdeal(Fraction(1), J)  # n=4 needs a = 4/3
    assert not verify_cofactors(4, bad).passed


def test_leibniz_and_commutator():
    J = jet_ring(8)
    rng = random.Random(5)
    assert verify_leibniz(J, rng, 10).passed
    assert verify_commutator(J, rng, 10).passed


def test_constants_table():
    assert constants(4) == {"a": -8, "alpha": Fraction(-16, 3), "k": 3, "six_a_ideal": 8}
    assert constants(3)["k"] == 2
    assert constants(6)["k"] == 4
    assert ideal_for(4).six_a == 8


def test_n4_phi_coefficients():
    J = jet_ring(10)
    Phi, _, a = build_phi(4, 0, J)
    q = J.q
    assert a[2] == -q[0] / 3
    assert a[3] == q[1] / 6
    assert Phi.coeff(J.u**4) == 1


def test_first_integral_range_guard():
    with pytest.raises(DegenerateInputError):
        verify_first_integral_relations(5)
    with pytest.raises(DegenerateInputError):
        tau4_check(3)
