"""Fixed-step complex RK4 integration used as an independent floating-point cross-check."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np

from .config import DEFAULTS
from .errors import DegenerateInputError, IllConditionedError, SingularityError
from .report import Report

__all__ = [
    "ODESystem",
    "Trajectory",
    "rk4_integrate",
    "richardson_estimate",
    "convergence_ratio",
    "cross_ratio",
    "riccati_system",
    "cross_ratio_drift",
    "LaurentP0",
    "p0_series",
    "lattice_radius",
    "first_integral_drift",
    "dihedral_cross_ratio",
    "numeric_suite",
]


@dataclass
class ODESystem:
    dimension: int
    rhs: Callable[[complex, np.ndarray], np.ndarray]
    description: str = ""
    singularities: tuple = ()


@dataclass
class Trajectory:
    z: np.ndarray
    y: np.ndarray
    error_estimate: float | None = None
    meta: dict = field(default_factory=dict)

    def to_csv(self, component: int = 0) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["z_re", "z_im", "u_re", "u_im"])
        for z, y in zip(self.z, self.y[:, component]):
            w.writerow([repr(float(v)) for v in (z.real, z.imag, y.real, y.imag)])
        return buf.getvalue()


def _rk4(rhs, y, z0, z1, steps):
    h = (z1 - z0) / steps
    zs = z0 + h * np.arange(steps + 1)
    ys = np.empty((steps + 1, len(y)), dtype=complex)
    ys[0] = y
    for i in range(steps):
        z = zs[i]
        k1 = rhs(z, y)
        k2 = rhs(z + h / 2, y + h / 2 * k1)
        k3 = rhs(z + h / 2, y + h / 2 * k2)
        k4 = rhs(z + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(y)):
            raise SingularityError(f"non-finite state near z = {zs[i + 1]}", location=complex(zs[i + 1]))
        ys[i + 1] = y
    return zs, ys


def rk4_integrate(system: ODESystem, y0, t0, t1, steps: int, estimate: bool = False) -> Trajectory:
    """Classical RK4 on the straight segment t0 -> t1 in the complex plane.

    With ``estimate`` the run is repeated at half the step and the Richardson
    estimate |y_h - y_{h/2}| / 15 of the endpoint error is attached.
    """
    if steps < 1:
        raise ValueError("steps must be at least 1")
    y0 = np.asarray(y0, dtype=complex).reshape(system.dimension)
    z0, z1 = complex(t0), complex(t1)
    for s in system.singularities:
        if _dist_to_segment(s, z0, z1) < 1e-12:
            raise SingularityError(f"path passes through the singularity {s}", location=s)
    zs, ys = _rk4(system.rhs, y0, z0, z1, steps)
    est = None
    if estimate:
        est = richardson_estimate(system, y0, z0, z1, steps, ys[-1])
    return Trajectory(zs, ys, est, {"steps": steps, "system": system.description})


def richardson_estimate(system: ODESystem, y0, t0, t1, steps: int, y_end=None) -> float:
    if y_end is None:
        y_end = _rk4(system.rhs, np.asarray(y0, dtype=complex), complex(t0), complex(t1), steps)[1][-1]
    fine = _rk4(system.rhs, np.asarray(y0, dtype=complex), complex(t0), complex(t1), 2 * steps)[1][-1]
    return float(np.max(np.abs(fine - y_end))) / 15


def _dist_to_segment(p, a, b) -> float:
    d = b - a
    if d == 0:
        return abs(p - a)
    s = min(1.0, max(0.0, ((p - a) * d.conjugate()).real / abs(d) ** 2))
    return abs(p - (a + s * d))


def convergence_ratio(system: ODESystem, y0, t0, t1, steps: int, exact) -> tuple[float, float, float]:
    """(err_h, err_h/2, ratio) of endpoint errors against the exact endpoint value."""
    exact = np.asarray(exact, dtype=complex)
    e1 = float(np.max(np.abs(rk4_integrate(system, y0, t0, t1, steps).y[-1] - exact)))
    e2 = float(np.max(np.abs(rk4_integrate(system, y0, t0, t1, 2 * steps).y[-1] - exact)))
    return e1, e2, e1 / e2 if e2 else float("inf")


# ---------------------------------------------------------------------------
# Riccati equations and cross-ratios
# ---------------------------------------------------------------------------
def cross_ratio(a, b, c, d):
    """(a - c)(b - d) / ((a - d)(b - c)), the standard cross-ratio."""
    return (a - c) * (b - d) / ((a - d) * (b - c))


def riccati_system(B0, B1, B2, copies: int = 4, description="riccati") -> ODESystem:
    """``copies`` independent solutions of u' = B0 + B1 u + B2 u^2 integrated together."""

    def rhs(z, y):
        return B0(z) + B1(z) * y + B2(z) * y * y

    return ODESystem(copies, rhs, description)


def cross_ratio_drift(riccati, ics, path, tol: float | None = None, name="cross-ratio drift") -> Report:
    """Max relative change of the cross-ratio of four solutions along ``path`` = (t0, t1, steps)."""
    tol = DEFAULTS["cross_ratio_tol"] if tol is None else tol
    ics = [complex(c) for c in ics]
    if len(ics) != 4:
        raise ValueError("exactly four initial values are needed")
    scale = max(1.0, max(abs(c) for c in ics))
    for i in range(4):
        for j in range(i):
            if abs(ics[i] - ics[j]) < 1e-12 * scale:
                raise DegenerateInputError("initial values must be pairwise distinct")
    t0, t1, steps = path
    sys_ = riccati_system(*riccati, copies=4)
    traj = rk4_integrate(sys_, ics, t0, t1, steps)
    ys = traj.y
    gaps = min(np.min(np.abs(ys[:, i] - ys[:, j])) for i in range(4) for j in range(i))
    if gaps < 1e-9 * max(1.0, float(np.max(np.abs(ys)))):
        raise DegenerateInputError("two solutions collide along the path")
    cr = cross_ratio(ys[:, 0], ys[:, 1], ys[:, 2], ys[:, 3])
    drift = float(np.max(np.abs(cr - cr[0])) / max(1.0, abs(cr[0])))
    rep = Report("numeric.cross_ratio")
    rep.numeric(name, drift, tol, steps=steps, cross_ratio=complex(cr[0]))
    return rep


# ---------------------------------------------------------------------------
# equianharmonic Weierstrass function
# ---------------------------------------------------------------------------
@dataclass
class LaurentP0:
    """p(z) = 1/z^2 + sum_{k>=2} c_k z^(2k-2) with g2 = 0."""

    g3: Fraction
    coeffs: dict  # exponent -> Fraction, principal part included
    M: int

    def series_residual(self) -> dict:
        """Exact Laurent coefficients of p'^2 - 4 p^3 + g3 below z^(M-4)."""
        p = self.coeffs
        dp = {e - 1: e * c for e, c in p.items() if e != 0}

        def mul(a, b, top):
            out = {}
            for i, x in a.items():
                for j, y in b.items():
                    if i + j < top:
                        out[i + j] = out.get(i + j, 0) + x * y
            return out

        top = self.M - 4
        res = mul(dp, dp, top)
        for e, c in mul(mul(p, p, top + 2), p, top).items():
            res[e] = res.get(e, 0) - 4 * c
        res[0] = res.get(0, 0) + self.g3
        return {e: c for e, c in res.items() if c}

    def __call__(self, z, derivative: int = 0):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for e, c in self.coeffs.items():
            f = float(c)
            for k in range(derivative):
                f *= e - k
            if f:
                out = out + f * z ** (e - derivative)
        return out


def p0_series(g3=4, M: int = 40) -> LaurentP0:
    """Laurent coefficients through z^M by c_k = 3/((2k+1)(k-3)) sum c_m c_(k-m), c_2 = g2/20 = 0."""
    g3 = Fraction(g3)
    if g3 == 0:
        raise DegenerateInputError("g3 must be nonzero for the equianharmonic function")
    if M < 8:
        raise ValueError("M must be at least 8")
    c = {2: Fraction(0), 3: g3 / 28}
    K = M // 2 + 1
    for k in range(4, K + 1):
        c[k] = Fraction(3, (2 * k + 1) * (k - 3)) * sum(c[m] * c[k - m] for m in range(2, k - 1))
    coeffs = {-2: Fraction(1)}
    coeffs.update({2 * k - 2: v for k, v in c.items() if 2 * k - 2 <= M})
    return LaurentP0(g3, coeffs, M)


@lru_cache(maxsize=None)
def lattice_radius(g3: float = 4.0) -> float:
    """Distance from 0 to the nearest nonzero lattice point when g2 = 0."""
    import mpmath

    # real half-period: int_e^oo dx / sqrt(4x^3 - g3), e = (g3/4)^(1/3)
    e = (mpmath.mpf(g3) / 4) ** (mpmath.mpf(1) / 3)
    omega = mpmath.quad(lambda x: 1 / mpmath.sqrt(4 * x**3 - g3), [e, e + 1, mpmath.inf])
    return float(2 * omega)


def _check_disk(zs, g3):
    R = 0.8 * lattice_radius(float(g3))
    if np.max(np.abs(zs)) >= R:
        raise DegenerateInputError(f"path leaves the disk |z| < {R:.4f} where the series is used")


# ---------------------------------------------------------------------------
# first integrals along an n = 4 trajectory
# ---------------------------------------------------------------------------
@lru_cache(maxsize=None)
def _n4_functions():
    import sympy

    from .darboux import build_phi, covariants, jet_ring

    J = jet_ring(8)
    Phi, _, _ = build_phi(4, 0, J)
    H, Om, _, _ = covariants(Phi, 4, J)
    gens = J.R.symbols
    u, q = gens[0], gens[1:5]
    syms = [u, *q]
    return tuple(sympy.lambdify(syms, f.as_expr(), "numpy") for f in (Phi, H, Om))


def first_integral_drift(n: int = 4, g3=4, path=(0.6 + 0.1j, 1.1 + 0.5j, 4000), seed_root: bool = True,
                         root_index: int = 0, tol: float | None = None, phi_tol: float | None = None) -> Report:
    """Integrate u' = q - u^2 with q = (3/4) p0 and track Phi(u) and Omega^2/H^3."""
    if n != 4:
        raise ValueError("only n = 4 is implemented")
    tol = DEFAULTS["drift_tol"] if tol is None else tol
    phi_tol = DEFAULTS["phi_tol"] if phi_tol is None else phi_tol
    P = p0_series(g3, DEFAULTS["p0_order"])
    z0, z1, steps = complex(path[0]), complex(path[1]), int(path[2])
    _check_disk(np.array([z0, z1]), g3)
    Phi, H, Om = _n4_functions()
    s = 0.75

    def qs(z):
        return [s * P(z, k) for k in range(4)]

    def rhs(z, y):
        return s * P(z) - y * y

    coeffs = np.array([1, 0, 6 * (-qs(z0)[0] / 3), 4 * (qs(z0)[1] / 6), -qs(z0)[2] / 6 + qs(z0)[0] ** 2],
                      dtype=complex)
    roots = np.roots(coeffs)
    u0 = roots[root_index] if seed_root else roots[root_index] + 0.25
    traj = rk4_integrate(ODESystem(1, rhs, "u' = q - u^2, q = 3/4 p0"), [u0], z0, z1, steps)
    zs, us = traj.z, traj.y[:, 0]
    Q = [s * P(zs, k) for k in range(4)]
    phi = np.abs(Phi(us, *Q))
    h = H(us, *Q)
    if np.min(np.abs(h)) < 1e-8 * max(1.0, float(np.max(np.abs(h)))):
        raise IllConditionedError("H nearly vanishes along the path")
    gamma = Om(us, *Q) ** 2 / h**3
    phi_scale = np.maximum(1.0, np.abs(us) ** 4)
    phi_rel = float(np.max(phi / phi_scale))
    drift = float(np.max(np.abs(gamma - gamma[0])) / max(1.0, abs(gamma[0])))
    tag = "seeded at a root" if seed_root else "seeded off the roots (control)"
    rep = Report("numeric.first_integrals" + ("" if seed_root else ".control"))
    rep.numeric(f"|Phi(u)| along the trajectory, {tag}", phi_rel, phi_tol, steps=steps, u0=complex(u0))
    rep.numeric(f"Omega^2/H^3 drift, {tag}", drift, tol, steps=steps, gamma=complex(gamma[0]))
    return rep


# ---------------------------------------------------------------------------
# end-to-end: the constructed dihedral Riccati
# ---------------------------------------------------------------------------
def _embed_ratfun(G):
    from .algebra import cyc_embed

    num = np.array([complex(cyc_embed(c, 30)) for c in reversed(G.num.coeffs)])
    den = np.array([complex(cyc_embed(c, 30)) for c in reversed(G.den.coeffs)])
    return lambda z: np.polyval(num, z) / np.polyval(den, z)


def dihedral_cross_ratio(m: int = 3, p: int = 2, path=(0.3 + 0.2j, 0.55 + 0.45j, 2000), tol=1e-8) -> Report:
    """Integrate the constructed Riccati from the exact root parameterizations and check the cross-ratio."""
    import mpmath

    from .algebra import cyc_embed
    from .anharmonic import build_riccati, construct

    res = construct("dihedral", m, p=p, eliminate_F=False)
    spec, U = res.spec, res.U
    B = [_embed_ratfun(b) for b in build_riccati(spec, U)]
    etas = mpmath.polyroots([cyc_embed(c, 30) for c in reversed(U.coeffs)], extraprec=60)
    t0 = complex(path[0])
    A = _root_values(spec, U, etas, t0)
    ics = A[:3] + [A[0] + 1.0]
    return cross_ratio_drift(B, ics, path, tol, name=f"cross-ratio drift, dihedral({m}) p={p} Riccati")


def _root_values(spec, U, etas, t):
    """f(t, eta) = (1/(t - eta) - U'/(n U)) / Psi'(t) for every numeric root eta of U."""
    import mpmath

    from .algebra import cyc_embed

    def cs(poly):
        return [cyc_embed(c, 30) for c in reversed(poly.coeffs)]

    psi, phi, Uc = cs(spec.psi), cs(spec.phi), cs(U)
    t = mpmath.mpc(t)
    ps, dps = mpmath.polyval(psi, t, derivative=True)
    ph, dph = mpmath.polyval(phi, t, derivative=True)
    u, du = mpmath.polyval(Uc, t, derivative=True)
    Pp = (dps * ph - ps * dph) / ph**2
    return [complex((1 / (t - e) - du / (spec.n * u)) / Pp) for e in etas]


def numeric_suite(steps: int | None = None) -> Report:
    steps = steps or DEFAULTS["steps"]
    rep = Report("numeric")
    neg = ODESystem(1, lambda z, y: -y * y, "u' = -u^2")
    e = abs(rk4_integrate(neg, [1], 0, 1, 10_000).y[-1, 0] - 0.5)
    rep.numeric("u' = -u^2, u(1) = 1/2", e, 1e-8, steps=10_000)
    rot = ODESystem(1, lambda z, y: 1j * y, "y' = i y")
    e = abs(rk4_integrate(rot, [1], 0, 2 * np.pi, 10_000).y[-1, 0] - 1)
    rep.numeric("y' = i y returns after 2 pi", e, 1e-8, steps=10_000)
    for label, system, exact, t1 in (("u' = -u^2", neg, 1 / 3, 2), ("y' = i y", rot, np.exp(2j), 2)):
        e1, e2, ratio = convergence_ratio(system, [1], 0, t1, 40, exact)
        ok = 12 <= ratio <= 20
        rep.exact(f"RK4 step-halving error ratio in [12, 20], {label}", ok, residual=f"ratio={ratio:.3f}",
                  ratio=ratio, err_h=e1, err_h2=e2)
    zero = lambda z: 0.0  # noqa: E731
    rep.extend(cross_ratio_drift((zero, zero, lambda z: -1.0), [1, 2, 3, 4], (0, 1, steps),
                                 name="cross-ratio drift, u' = -u^2"))
    P = p0_series(4, DEFAULTS["p0_order"])
    _check_disk(np.array([0.5 + 0.3j, 1.0 + 0.6j]), 4)
    rep.extend(cross_ratio_drift((lambda z: 0.75 * P(z), zero, lambda z: -1.0), [0.3, -0.5, 1.2 + 0.4j, 2j],
                                 (0.5 + 0.3j, 1.0 + 0.6j, steps), name="cross-ratio drift, u' + u^2 = (3/4) p0"))
    rep.extend(dihedral_cross_ratio())
    rep.extend(first_integral_drift())
    ctrl = first_integral_drift(seed_root=False)
    phi_check = ctrl.checks[0]
    rep.exact("control: Phi(u) departs from 0 when u(z0) is not a root", not phi_check.passed,
              residual=f"max |Phi| = {phi_check.residual}", value=phi_check.residual)
    return rep
