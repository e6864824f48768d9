from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from anharmonia.algebra import QQ, Cyclotomic
from anharmonia.errors import DegenerateInputError, WholeSphereFixed
from anharmonia.mobius import (
    INF,
    MobiusMap,
    cross_ratio,
    fixed_points,
    group_catalog,
    invariant_psi,
    orbit,
    stabilizer,
    verify_invariance,
)

fr = st.fractions(min_value=-10, max_value=10, max_denominator=6)


@pytest.mark.parametrize("kind,m,order", [("cyclic", 5, 5), ("dihedral", 3, 6), ("tetrahedral", None, 12),
                                          ("octahedral", None, 24), ("icosahedral", None, 60)])
def test_group_orders(kind, m, order):
    assert group_catalog(kind, m).order == order


def test_bad_catalog_requests():
    with pytest.raises(ValueError):
        group_catalog("cubic")
    with pytest.raises(ValueError):
        group_catalog("dihedral", 1)


def test_invariants_match_closed_forms():
    z = invariant_psi("cyclic", 5)
    assert z.psi.coeffs == tuple([0] * 5 + [1]) and z.phi.degree == 0
    d = invariant_psi("dihedral", 3)
    assert d.psi.degree == 6 and d.phi.degree == 3
    o = invariant_psi("octahedral")
    assert o.psi.degree == 24 and o.phi.degree == 20
    assert o.phi.coeff(4) == 108


@pytest.mark.parametrize("kind,m", [("cyclic", 4), ("dihedral", 5), ("tetrahedral", None),
                                    ("octahedral", None), ("icosahedral", None)])
def test_invariance_every_element(kind, m):
    assert verify_invariance(group_catalog(kind, m), all_elements=True).passed


def test_invariance_negative_control():
    g = group_catalog("octahedral")
    wrong = MobiusMap(2, 0, 0, 1, g.field, "doubling")
    rep = verify_invariance(g, extra=[wrong])
    assert not rep.passed and not rep["generator doubling"].passed


def test_fixed_points():
    inv = MobiusMap(0, 1, 1, 0, QQ, "eps0")
    assert set(fixed_points(inv).points) == {1, -1}
    rot = group_catalog("cyclic", 5).generators[0]
    pts = fixed_points(rot).points
    assert INF in pts and 0 in pts
    with pytest.raises(WholeSphereFixed):
        fixed_points(MobiusMap.identity(QQ))
    th = group_catalog("tetrahedral").generators[2]
    fp = fixed_points(th)
    for p in fp.numeric:
        a, b, c, d = (complex(x.embed(40)) if isinstance(x, Cyclotomic) else complex(x) for x in th.entries)
        assert abs((a * complex(p) + b) / (c * complex(p) + d) - complex(p)) < 1e-20 or fp.exact


def test_orbits_and_stabilizers():
    g = group_catalog("cyclic", 4)
    assert len(orbit(1, g)) == 4
    d = group_catalog("dihedral", 3)
    assert len(orbit(1, d)) == 3 and len(stabilizer(1, d)) == 2
    assert len(orbit(Fraction(2, 7), group_catalog("octahedral"))) == 24


def test_cross_ratio_conventions():
    assert cross_ratio(0, 1, INF, Fraction(-1)) == 2
    with pytest.raises(DegenerateInputError):
        cross_ratio(1, 2, 3, 3)


@given(fr, fr, fr, fr)
def test_cross_ratio_moebius_invariant(a, b, c, d):
    pts = [a, b, c, d]
    if len(set(pts)) < 4 or 0 in pts:
        return
    inv = [1 / x for x in pts]
    assert cross_ratio(*pts) == cross_ratio(*inv)


@given(fr, fr, fr, fr)
def test_compose_matches_call(a, b, c, d):
    if a * d - b * c == 0:
        return
    f = MobiusMap(a, b, c, d, QQ)
    g = MobiusMap(1, 2, 3, 5, QQ)
    z = Fraction(3, 11)
    gz = g(z)
    expect = f(gz) if gz is not INF else f(INF)
    assert f.compose(g)(z) == expect
    assert f.inverse().compose(f).is_identity()
