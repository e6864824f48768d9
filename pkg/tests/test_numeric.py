from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from anharmonia.errors import DegenerateInputError, SingularityError
from anharmonia.numeric import (
    ODESystem,
    convergence_ratio,
    cross_ratio,
    cross_ratio_drift,
    dihedral_cross_ratio,
    first_integral_drift,
    lattice_radius,
    numeric_suite,
    p0_series,
    rk4_integrate,
)

zero = lambda z: 0.0  # noqa: E731


def test_rk4_known_solution():
    sys_ = ODESystem(1, lambda z, y: -y * y)
    traj = rk4_integrate(sys_, [1], 0, 1, 2000, estimate=True)
    assert abs(traj.y[-1, 0] - 0.5) < 1e-12
    assert traj.error_estimate < 1e-10


def test_convergence_ratio_near_16():
    sys_ = ODESystem(1, lambda z, y: 1j * y)
    _, _, ratio = convergence_ratio(sys_, [1], 0, 2, 40, np.exp(2j))
    assert 12 <= ratio <= 20


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_singularity_raises():
    sys_ = ODESystem(1, lambda z, y: y * y)
    with pytest.raises(SingularityError):
        rk4_integrate(sys_, [1], 0, 2, 200)


def test_csv_roundtrip():
    traj = rk4_integrate(ODESystem(1, lambda z, y: -y), [1], 0, 1, 4)
    lines = traj.to_csv().splitlines()
    assert lines[0] == "z_re,z_im,u_re,u_im"
    assert len(lines) == 6
    assert float(lines[-1].split(",")[2]) == pytest.approx(np.exp(-1), rel=1e-4)


@given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False), min_size=4, max_size=4),
       st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False).filter(lambda c: abs(c) > 0.1))
def test_cross_ratio_mobius_invariant(pts, c):
    a, b, cc, d = pts
    if min(abs(x - y) for i, x in enumerate(pts) for y in pts[:i]) < 1e-3:
        return
    f = lambda x: 1 / (x - 20) * c  # noqa: E731
    assert cross_ratio(*map(f, pts)) == pytest.approx(cross_ratio(a, b, cc, d), rel=1e-6, abs=1e-9)


def test_cross_ratio_drift_small():
    rep = cross_ratio_drift((zero, zero, lambda z: -1.0), [1, 2, 3, 4], (0, 1, 1000))
    assert rep.passed


def test_identical_initial_values():
    with pytest.raises(DegenerateInputError):
        cross_ratio_drift((zero, zero, lambda z: -1.0), [1, 1, 3, 4], (0, 1, 100))


def test_p0_series_coefficients():
    P = p0_series(4, 40)
    assert P.coeffs[-2] == 1
    assert P.coeffs[4] == Fraction(1, 7)
    assert P.series_residual() == {}
    assert P.coeffs[10] == Fraction(4) ** 2 / 10192  # g3^2/10192 when g2 = 0


def test_p0_guards():
    with pytest.raises(DegenerateInputError):
        p0_series(0)
    with pytest.raises(ValueError):
        p0_series(4, 6)


def test_lattice_radius():
    assert lattice_radius(4.0) == pytest.approx(2.42865, abs=1e-4)


def test_path_outside_disk():
    with pytest.raises(DegenerateInputError):
        first_integral_drift(path=(0.5, 2.5, 100))


def test_first_integrals_and_control():
    assert first_integral_drift(path=(0.6 + 0.1j, 1.1 + 0.5j, 2000)).passed
    assert not first_integral_drift(seed_root=False, path=(0.6 + 0.1j, 1.1 + 0.5j, 2000)).checks[0].passed


def test_dihedral_cross_ratio():
    assert dihedral_cross_ratio().passed


def test_numeric_suite():
    assert numeric_suite(2000).passed
