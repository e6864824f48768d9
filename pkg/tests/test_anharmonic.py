from fractions import Fraction

import pytest

from anharmonia.anharmonic import (
    build_riccati,
    construct,
    cyclic_normalized,
    degree_table,
    make_spec,
    orbit_polynomial,
    riccati_residual,
    verify_construction,
)
from anharmonia.errors import InadmissibleSeedError

# frozen from the running text on admissible degrees (n, p)
TEXT_P_GT_1 = {
    "tetrahedral": [(4, 3), (6, 2)],
    "octahedral": [(12, 2), (8, 3), (6, 4)],
    "icosahedral": [(30, 2), (20, 3), (5, 12)],
}
TEXT_P_EQ_1 = {"tetrahedral": 12, "octahedral": 24, "icosahedral": 60}


@pytest.mark.parametrize("kind", ["tetrahedral", "octahedral", "icosahedral"])
def test_degree_table_platonic(kind):
    t = degree_table(kind)
    assert [r.as_pair() for r in t["p>1"]] == TEXT_P_GT_1[kind]
    assert [r.as_pair() for r in t["p=1"]] == [(TEXT_P_EQ_1[kind], 1)]


def test_degree_table_cyclic_dihedral():
    assert degree_table("cyclic")["p>1"] == []
    assert [r.p for r in degree_table("dihedral")["p>1"]] == [2]
    assert degree_table("dihedral")["p=1"][0].n == "even n>=4"


def test_icosahedral_5_12_flagged():
    row = degree_table("icosahedral")["p>1"][2]
    assert row.as_pair() == (5, 12) and row.divisibility_ok is False
    with pytest.raises(InadmissibleSeedError):
        make_spec("icosahedral", p=12)


def test_cyclic_example_is_x_n_minus_K_over_T():
    res = construct("cyclic", 4)
    rep = verify_construction(res, numeric=False, resultant=True)
    assert rep.passed, rep.render_text()
    assert rep["normalized F = x^n - K/T"].passed


def test_dihedral3_p2_end_to_end():
    res = construct("dihedral", 3, p=2)
    rep = verify_construction(res, numeric=True, resultant=True)
    assert rep.passed, rep.render_text()
    assert res.F.degree == 3
    assert rep["numeric fiber roots match F"].residual < 1e-8


def test_dihedral5_cross_ratio_free_of_t():
    res = construct("dihedral", 5, p=1, eliminate_F=False)
    rep = verify_construction(res, numeric=False)
    assert rep["cross-ratio of four roots is t-free"].passed
    assert rep.passed


def test_tetrahedral_quartic():
    res = construct("tetrahedral", p=3)
    assert res.U.degree == 4
    assert verify_construction(res).passed


def test_riccati_rejects_a_wrong_root():
    spec = make_spec("dihedral", 3, p=2)
    U = orbit_polynomial(spec)
    ric = build_riccati(spec, U)
    B0, B1, B2 = ric
    bumped = (B0 + B0.ring.convert(Fraction(1)) if hasattr(B0, "ring") else B0, B1, B2)
    assert riccati_residual(spec, U, ric).is_zero()
    assert not riccati_residual(spec, U, bumped).is_zero()


def test_roots_sum_to_zero_and_json():
    res = construct("dihedral", 4, p=2)
    data = res.to_json()
    assert data["n"] == 4 and data["p"] == 2 and len(data["F"]) == 5
    assert "normalizations" in data["provenance"]
    assert "F(x,T)" in res.render_text()


def test_normalize_homography_identity():
    res = construct("cyclic", 5)
    G = cyclic_normalized(res.spec, res.F)
    assert G.degree == 5


@pytest.mark.parametrize("kind,p", [("tetrahedral", 2), ("octahedral", 3), ("octahedral", 4), ("octahedral", 2)])
def test_platonic_end_to_end(kind, p):
    res = construct(kind, p=p)
    rep = verify_construction(res)
    assert rep.passed, rep.render_text()
    assert rep["numeric fiber roots match F"].residual < 1e-8


@pytest.mark.slow
@pytest.mark.parametrize("p", [3, 2])
def test_icosahedral_end_to_end(p):
    res = construct("icosahedral", p=p)
    rep = verify_construction(res)
    assert rep.passed, rep.render_text()
    assert res.F.degree == 60 // p


def test_orbit_checks_skipped_for_large_n():
    res = construct("octahedral", p=2, eliminate_F=False)
    rep = verify_construction(res, numeric=False, orbit_checks=False)
    assert rep.passed
    assert rep["per-orbit-point checks"].status == "skipped"
