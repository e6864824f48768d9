"""Anharmonic construction: orbit polynomial U, root parameterization, F(x, T), Riccati.

Given a finite Möbius group with absolute invariant Psi = psi/phi and a seed
eta_0 whose stabilizer has order p, the n = N/p orbit points eta_i give the
roots

    x_i = f(t, eta_i) = (1/(t - eta_i) - U'(t)/(n U(t))) / Psi'(t),   Psi(t) = T,

of a degree-n polynomial F(x, T) whose coefficients are rational functions of T
over the constants.  All of them satisfy

    du/dt = B0 + B1 u + B2 u^2.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .algebra import (
    QQ,
    Cyclotomic,
    CyclotomicField,
    FunctionField,
    Poly,
    QuotientRing,
    cyc_embed,
    RatFun,
    poly_gcd,
    poly_pth_root,
    poly_to_json,
    rational_interpolate,
)
from .algebra.rings import Ring
from .errors import (
    ConstructionError,
    EliminationError,
    InadmissibleSeedError,
    NotAPowerError,
)
from .mobius import (
    INF,
    AbsoluteInvariant,
    FiniteMobiusGroup,
    MobiusMap,
    canonical_kind,
    cross_ratio,
    fixed_points,
    group_catalog,
    invariant_psi,
    orbit,
)
from .report import Report

__all__ = [
    "DegreeRow",
    "degree_table",
    "AnharmonicSpec",
    "AnharmonicResult",
    "make_spec",
    "orbit_polynomial",
    "parameterize_root",
    "root_fraction",
    "eliminate",
    "build_riccati",
    "verify_root_satisfies_riccati",
    "construct",
    "verify_construction",
    "normalize_homography",
    "cyclic_normalized",
]


# ---------------------------------------------------------------------------
# admissible degrees
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class DegreeRow:
    n: object
    p: int
    divisibility_ok: bool | None = None
    note: str = ""

    def as_pair(self):
        return (self.n, self.p)


def _div_ok(n, p):
    return (n - 1) % p == 0 or (n - 2) % p == 0


def degree_table(kind: str) -> dict:
    """Admissible (n, p) for one family, split into p = 1 and p > 1 rows."""
    kind = canonical_kind(kind)
    if kind == "cyclic":
        return {"p=1": [DegreeRow("n>=4", 1, None, "any n >= 4")], "p>1": []}
    if kind == "dihedral":
        return {
            "p=1": [DegreeRow("even n>=4", 1, None, "n = 2m")],
            "p>1": [DegreeRow("n=m", 2, True, "stabilizers generated by reflections")],
        }
    N = {"tetrahedral": 12, "octahedral": 24, "icosahedral": 60}[kind]
    pairs = {
        "tetrahedral": [(4, 3), (6, 2)],
        "octahedral": [(12, 2), (8, 3), (6, 4)],
        "icosahedral": [(30, 2), (20, 3), (5, 12)],
    }[kind]
    rows = []
    for n, p in pairs:
        ok = _div_ok(n, p)
        note = "" if ok else f"{p} divides neither n-1={n - 1} nor n-2={n - 2}"
        rows.append(DegreeRow(n, p, ok, note))
    return {"p=1": [DegreeRow(N, 1, True)], "p>1": rows}


# ---------------------------------------------------------------------------
# specification
# ---------------------------------------------------------------------------
@dataclass
class AnharmonicSpec:
    kind: str
    parameter: int | None
    n: int
    p: int
    group: FiniteMobiusGroup
    invariant: AbsoluteInvariant
    psi: Poly
    phi: Poly
    seed: object
    T0: object
    ring: Ring
    conjugation: Fraction | None = None
    stabilizer: MobiusMap | None = None
    symbolic: bool = False
    provenance: dict = field(default_factory=dict)

    @property
    def N(self) -> int:
        return self.n * self.p

    @property
    def name(self) -> str:
        g = f"{self.kind}({self.parameter})" if self.parameter else self.kind
        return f"{g} n={self.n} p={self.p}"

    def Psi(self) -> RatFun:
        return RatFun(self.psi, self.phi)

    def wronskian(self) -> Poly:
        """W = psi' phi - psi phi', so that Psi' = W / phi^2."""
        return self.psi.derivative() * self.phi - self.psi * self.phi.derivative()

    def map_point(self, z):
        """Image of an original-coordinate point in the working coordinate."""
        if self.conjugation is None:
            return z
        if z is INF:
            return self.ring.zero if self.ring.is_field else 0
        d = z - self.conjugation
        return INF if d == 0 else 1 / d


def _descend(poly: Poly) -> Poly:
    """Move a polynomial with rational cyclotomic coefficients down to QQ."""
    if isinstance(poly.ring, CyclotomicField) and all(c.is_rational() for c in poly.coeffs):
        return Poly([c.to_fraction() for c in poly.coeffs], QQ, poly.var)
    return poly


def _lift(poly: Poly, ring: Ring, var: str | None = None) -> Poly:
    return Poly([ring.convert(c) for c in poly.coeffs], ring, var or poly.var)


def _common_ring(*rings):
    cyc = [r for r in rings if isinstance(r, CyclotomicField)]
    if not cyc:
        return rings[0]
    N = 1
    for r in cyc:
        N = N * r.N // _gcd(N, r.N)
    return CyclotomicField(N)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _to_t(poly: Poly, ring: Ring) -> Poly:
    return _lift(poly, ring, "t")


def _rational(x):
    if isinstance(x, Cyclotomic):
        return x.to_fraction() if x.is_rational() else None
    return Fraction(x)


def _recognize(value, max_den: int = 10**6):
    """Rational (or infinity) nearest a numeric critical value."""
    import mpmath

    if value is INF or abs(value) > 1e12:
        return INF
    re = Fraction(str(mpmath.nstr(mpmath.re(value), 40))).limit_denominator(max_den)
    if abs(mpmath.im(value)) > 1e-15 * max(1, abs(value)):
        return None
    return re


def _fiber(psi: Poly, phi: Poly, T0) -> Poly:
    return phi if T0 is INF else psi - phi * T0


def make_spec(kind: str, parameter: int | None = None, n: int | None = None, p: int = 1,
              seed=None) -> AnharmonicSpec:
    """Validate (kind, n, p) and choose a seed, conjugating when the orbit meets infinity."""
    kind = canonical_kind(kind)
    group = group_catalog(kind, parameter)
    inv = invariant_psi(kind, parameter)
    N = group.order
    if p < 1 or N % p:
        raise InadmissibleSeedError(f"p={p} does not divide the group order {N}")
    n_expected = N // p
    if n is not None and n != n_expected:
        raise InadmissibleSeedError(f"{group.name} with p={p} forces n={n_expected}, not {n}")
    n = n_expected
    prov = {"group": group.name, "N": N}
    if kind == "cyclic":
        if p != 1:
            raise InadmissibleSeedError("cyclic groups admit no stabilizer of order p > 1")
        if n < 4:
            raise InadmissibleSeedError("anharmonics have degree at least 4")
        ring = FunctionField(QQ, "K")
        K = ring.gen()
        psi = _lift(inv.psi, ring, "t")
        phi = _lift(inv.phi, ring, "t")
        prov["seed"] = "symbolic eta_0 with eta_0^n = K"
        return AnharmonicSpec(kind, parameter, n, 1, group, inv, psi, phi, None, K,
                              ring, symbolic=True, provenance=prov)
    if kind == "dihedral" and p not in (1, 2):
        raise InadmissibleSeedError("dihedral stabilizers have order 1 or 2")
    if p == 1 and n < 4:
        raise InadmissibleSeedError("anharmonics have degree at least 4")
    if p > 1 and kind not in ("dihedral",):
        rows = [r.as_pair() for r in degree_table(kind)["p>1"]]
        if (n, p) not in rows:
            raise InadmissibleSeedError(f"(n, p)=({n}, {p}) is not in the degree table")
    if p > 1 and not _div_ok(n, p):
        raise InadmissibleSeedError(
            f"(n, p)=({n}, {p}): p must divide n-1 or n-2 for a stabilizer of order p"
        )
    K0 = inv.ring
    psi = _to_t(inv.psi, K0)
    phi = _to_t(inv.phi, K0)
    if p == 1:
        return _generic_seed(kind, parameter, n, group, inv, psi, phi, seed, prov)
    return _stabilizer_seed(kind, parameter, n, p, group, inv, psi, phi, seed, prov)


def _generic_seed(kind, parameter, n, group, inv, psi, phi, seed, prov):
    N = group.order
    candidates = [seed] if seed is not None else [Fraction(k) for k in (2, 3, 5, 7)] + [
        Fraction(a, b) for a, b in ((1, 2), (3, 2), (5, 3), (7, 2))
    ]
    for s in candidates:
        s = Fraction(s) if not isinstance(s, Cyclotomic) else s
        if phi(s) == 0:
            continue
        T0 = psi(s) / phi(s)
        D = _fiber(psi, phi, T0)
        if D.degree != N or poly_gcd(D, D.derivative()).degree > 0:
            if seed is not None:
                raise InadmissibleSeedError(f"seed {s} does not have a free orbit of size {N}")
            continue
        prov.update(seed=str(s), T0=str(T0), seed_rule="first rational point with a free finite orbit")
        return AnharmonicSpec(kind, parameter, n, 1, group, inv, psi, phi, group.field.convert(s), T0,
                              psi.ring, provenance=prov)
    raise InadmissibleSeedError("no rational seed with a free orbit among the candidates")


def _stabilizer_seed(kind, parameter, n, p, group, inv, psi, phi, seed, prov):
    N = group.order
    elements = list(group.generators) + [g for g in group.elements if g not in group.generators]
    tried = []
    for g in elements:
        if g.order() != p:
            continue
        fp = fixed_points(g)
        if fp.exact:
            for eta in fp.points:
                if seed is not None and eta != seed:
                    continue
                orb = orbit(eta, group)
                if len(orb) != n:
                    tried.append(f"{g.label or 'element'}: orbit {len(orb)}")
                    continue
                T0 = inv(eta) if eta is not INF else inv(INF)
                if T0 is not INF:
                    T0r = _rational(T0)
                    T0 = T0r if T0r is not None and inv.ring == QQ else inv.ring.convert(T0)
                prov.update(seed=_pt(eta), seed_rule=f"exact fixed point of an order-{p} element",
                            stabilizer=g.to_json())
                return _finish(kind, parameter, n, p, group, inv, psi, phi, eta, T0, g, prov)
        else:
            import mpmath

            for z in fp.numeric:
                with mpmath.workdps(40):
                    val = INF if z is INF else _num_eval(inv, z)
                T0 = _recognize(val)
                if T0 is None:
                    continue
                D = _fiber(psi, phi, T0)
                try:
                    _ = poly_pth_root(D.monic() if D.degree == N else D.monic(), p)
                except NotAPowerError:
                    tried.append(f"numeric T0={T0}: not a {p}-th power")
                    continue
                deg = D.degree if D.degree == N else N
                if deg // p != n:
                    continue
                prov.update(
                    seed=f"numeric fixed point {mpmath.nstr(z, 20) if z is not INF else 'oo'}",
                    seed_rule=f"numeric fixed point of an order-{p} element; critical value recovered "
                    "as a rational and confirmed by an exact power test",
                    stabilizer=g.to_json(),
                )
                return _finish(kind, parameter, n, p, group, inv, psi, phi, None, T0, g, prov)
    raise InadmissibleSeedError(
        f"no point of {group.name} has a stabilizer of order {p} with an orbit of size {n}"
        + (f" ({'; '.join(sorted(set(tried)))})" if tried else "")
    )


def _num_eval(inv, z):
    import mpmath

    ps = mpmath.polyval([complex(c) for c in reversed(inv.psi.coeffs)], z)
    ph = mpmath.polyval([complex(c) for c in reversed(inv.phi.coeffs)], z)
    return INF if abs(ph) < mpmath.mpf(10) ** -30 else ps / ph


def _pt(x):
    return "oo" if x is INF else str(x)


def _finish(kind, parameter, n, p, group, inv, psi, phi, eta, T0, g, prov):
    N = group.order
    D = _fiber(psi, phi, T0)
    ring = psi.ring
    r = None
    if D.degree < N:
        # the orbit contains infinity: work in w with t = r + 1/w
        for cand in (Fraction(k) for k in (0, 1, 2, 3, -1, -2, 5, 7)):
            if D(cand) != 0:
                r = cand
                break
        w = Poly.gen(ring, "t")
        X = w * r + 1
        psi = _as_poly(psi.homogeneous_eval(X, w, N), ring)
        phi = _as_poly(phi.homogeneous_eval(X, w, N), ring)
        prov["conjugation"] = f"t = {r} + 1/w"
    prov["T0"] = _pt(T0)
    spec = AnharmonicSpec(kind, parameter, n, p, group, inv, psi, phi, eta, T0, ring, r, g,
                          provenance=prov)
    if eta is not None:
        spec.seed = spec.map_point(eta)
    return spec


def _as_poly(x, ring):
    return x if isinstance(x, Poly) else Poly.const(x, ring, "t")


# ---------------------------------------------------------------------------
# orbit polynomial
# ---------------------------------------------------------------------------
def orbit_polynomial(spec: AnharmonicSpec) -> Poly:
    """Monic U of degree n with psi - T0 phi = c U^p (phi = c U^p when T0 is infinite)."""
    if spec.symbolic:
        t = Poly.gen(spec.ring, "t")
        return t**spec.n - spec.T0
    D = _fiber(spec.psi, spec.phi, spec.T0)
    if D.degree != spec.N:
        raise ConstructionError(f"fiber polynomial has degree {D.degree}, expected {spec.N}")
    try:
        U = poly_pth_root(D.monic(), spec.p)
    except NotAPowerError as exc:
        raise ConstructionError(f"psi - T0 phi is not a {spec.p}-th power: {exc}") from exc
    if U.degree != spec.n:
        raise InadmissibleSeedError(f"orbit polynomial has degree {U.degree}, expected {spec.n}")
    return _descend(U)


def orbit_points(spec: AnharmonicSpec) -> list | None:
    """Exact orbit of the seed in working coordinates, or None when the seed is not exact."""
    if spec.symbolic or spec.seed is None:
        return None
    raw = spec.provenance.get("_orbit")
    if raw is None:
        # orbit is computed in original coordinates and mapped
        original = _original_seed(spec)
        raw = [spec.map_point(z) for z in orbit(original, spec.group)]
        spec.provenance["_orbit"] = raw
    return raw


def _original_seed(spec):
    if spec.conjugation is None:
        return spec.seed
    s = spec.seed
    if s == 0:
        return INF
    return spec.conjugation + 1 / s


def orbit_product(spec: AnharmonicSpec) -> Poly | None:
    pts = orbit_points(spec)
    if pts is None or any(z is INF for z in pts):
        return None
    F = spec.group.field
    t = Poly.gen(F, "t")
    out = Poly.const(1, F, "t")
    for z in pts:
        out = out * (t - z)
    return _descend(out)


# ---------------------------------------------------------------------------
# roots and the Riccati equation
# ---------------------------------------------------------------------------
def root_fraction(spec: AnharmonicSpec, U: Poly, eta, ring: Ring):
    """(A, B) with f(t, eta) = A/B as polynomials in t over ``ring``.

    A = phi^2 (n U - (t - eta) U'),  B = n U (t - eta) W.
    """
    n = spec.n
    t = Poly.gen(ring, "t")
    Ur = _lift(U, ring)
    phi = _lift(spec.phi, ring)
    W = _lift(spec.wronskian(), ring)
    e = ring.convert(eta)
    lin = t - e
    A = phi * phi * (Ur * n - lin * Ur.derivative())
    B = Ur * lin * W * n
    return A, B


def _field_for(spec, U, eta) -> Ring:
    rings = [U.ring, spec.psi.ring]
    if isinstance(eta, Cyclotomic) and not eta.is_rational():
        rings.append(CyclotomicField(eta.N))
    return _common_ring(*rings)


def parameterize_root(spec: AnharmonicSpec, U: Poly, eta, ring: Ring | None = None) -> RatFun:
    """f(t, eta) as a reduced rational function; eta must be an exact root of U."""
    ring = ring or _field_for(spec, U, eta)
    if _lift(U, ring)(ring.convert(eta)) != 0:
        raise ValueError(f"{eta} is not a root of U")
    A, B = root_fraction(spec, U, eta, ring)
    return RatFun(A, B)


def build_riccati(spec: AnharmonicSpec, U: Poly):
    """(B0, B1, B2) with du/dt = B0 + B1 u + B2 u^2 satisfied by every root."""
    if spec.n < 3:
        raise InadmissibleSeedError("degree too small for an anharmonic")
    ring = _common_ring(U.ring, spec.psi.ring)
    psi, phi, Ur = (_lift(x, ring) for x in (spec.psi, spec.phi, U))
    Psi = RatFun(psi, phi)
    d1 = Psi.derivative()
    if d1.is_zero():
        raise ConstructionError("Psi' vanishes identically")
    d2 = d1.derivative()
    V = RatFun(Ur.derivative(), Ur * spec.n)
    B0 = -(V.derivative() + V * V) / d1
    B1 = -(d2 + V * d1 * 2) / d1
    B2 = -d1
    return B0, B1, B2


def riccati_residual(spec: AnharmonicSpec, U: Poly, riccati, eta=None) -> Poly:
    """Numerator of f' - (B0 + B1 f + B2 f^2) for f = f(t, eta), cross-multiplied.

    With eta=None the root is the class of y in K[y]/(U(y)), covering every
    root at once without leaving ring arithmetic.
    """
    if eta is None:
        base = _common_ring(U.ring, spec.psi.ring)
        R = QuotientRing(_lift(U, base, "y"))
        eta = R.gen()
    else:
        R = _field_for(spec, U, eta)
    A, B = root_fraction(spec, U, eta, R)
    (n0, d0), (n1, d1), (n2, d2) = ((_lift(b.num, R), _lift(b.den, R)) for b in riccati)
    dA, dB = A.derivative(), B.derivative()
    lhs = (dA * B - A * dB) * d0 * d1 * d2
    rhs = n0 * B * B * d1 * d2 + n1 * A * B * d0 * d2 + n2 * A * A * d0 * d1
    return lhs - rhs


def verify_root_satisfies_riccati(spec: AnharmonicSpec, U: Poly, eta=None, riccati=None) -> Report:
    riccati = riccati or build_riccati(spec, U)
    res = riccati_residual(spec, U, riccati, eta)
    label = "generic root (mod U)" if eta is None else f"root {eta}"
    rep = Report(f"anharmonic.riccati.{spec.name}")
    rep.exact(f"Riccati residual, {label}", res.is_zero(), residual=f"degree {res.degree} numerator")
    return rep


# ---------------------------------------------------------------------------
# elimination
# ---------------------------------------------------------------------------
def _sample_fiber_poly(spec, U, Uders, W, s):
    """F(x, Psi(s)) at t = s: the monic polynomial with roots f(s, eta_i)."""
    n = spec.n
    ring = U.ring
    Us = Uders[0](s)
    Ws = W(s)
    ph = spec.phi(s)
    P = ph * ph / Ws
    c = Uders[1](s) / (Us * n)
    coeffs = []  # coefficient of y^(n-k) is (-P)^k U^(k)(s) / (k! U(s))
    mP = -P
    pw = ring.one
    for k in range(n + 1):
        coeffs.append(pw * Uders[k](s) / (Us * factorial(k)))
        pw = pw * mP
    y_poly = Poly(list(reversed(coeffs)), ring, "x")
    shift = Poly([P * c, 1], ring, "x")
    return y_poly.compose(shift)


def degree_bounds(spec: AnharmonicSpec) -> list:
    """E_j bounding numerator and denominator degrees of the j-th coefficient in T."""
    n, N = spec.n, spec.N
    dphi = spec.phi.degree
    dW = spec.wronskian().degree
    out = [0]
    for j in range(1, n + 1):
        b = max(j * (2 * dphi + n - 1) + n, (j + 1) * n + j * dW)
        out.append(b // N)
    return out


def _sample_points():
    k = 2
    while True:
        yield Fraction(k)
        yield Fraction(-k)
        yield Fraction(2 * k - 1, 2)
        yield Fraction(k, 3)
        k += 1


def eliminate(spec: AnharmonicSpec, U: Poly, method: str = "symmetric", extra: int = 4) -> Poly:
    """F(x, T): monic of degree n in x with coefficients in K(T).

    ``symmetric`` samples the elementary symmetric functions of the roots at
    rational t, then recovers each as a rational function of T = Psi(t) by
    Cauchy interpolation under a proven degree bound; ``resultant`` takes
    Res_t(psi - T phi, den x - num), divides by the leading coefficient and
    extracts the p-th root.
    """
    if method == "resultant":
        return eliminate_resultant(spec, U)
    if method != "symmetric":
        raise ValueError(f"unknown elimination method {method!r}")
    if spec.symbolic:
        return _eliminate_cyclic(spec, extra)
    n = spec.n
    ring = _common_ring(U.ring, spec.psi.ring)
    Ur = _lift(U, ring)
    psi, phi = _lift(spec.psi, ring), _lift(spec.phi, ring)
    work = AnharmonicSpec(**{**spec.__dict__, "psi": psi, "phi": phi})
    W = work.wronskian()
    Uders = [Ur]
    for _ in range(n):
        Uders.append(Uders[-1].derivative())
    E = degree_bounds(work)
    need = max(2 * e + 1 for e in E) + extra
    Ts, vals = [], []
    seen = set()
    for s in _sample_points():
        if len(Ts) >= need:
            break
        if phi(s) == 0 or Ur(s) == 0 or W(s) == 0:
            continue
        T = psi(s) / phi(s)
        key = T
        if key in seen:
            continue
        seen.add(key)
        Ts.append(T)
        vals.append(_sample_fiber_poly(work, Ur, Uders, W, s))
    TF = FunctionField(ring, "T")
    coeffs = [TF.one]
    for j in range(1, n + 1):
        e = E[j]
        ys = [v.coeff(n - j) for v in vals]
        m = 2 * e + 1
        G = rational_interpolate(Ts[:m], ys[:m], e, e, ring, "T")
        if G is None:
            raise EliminationError(f"coefficient {j}: no rational function of degree <= {e} fits")
        for T, y in zip(Ts[m:], ys[m:]):
            if G(T) != y:
                raise EliminationError(f"coefficient {j}: interpolant fails a verification point")
        coeffs.append(G)
    F = Poly(list(reversed(coeffs)), TF, "x")
    return _descend_F(F)


def _cyclic_samples(n: int, K: Fraction, count: int):
    """(u, [c_1..c_n]) with c_j = T^j G_j(T, K) at T = s^n and u = K/T."""
    t = Poly.gen(QQ, "t")
    U = t**n - K
    phi = Poly.const(1, QQ, "t")
    work = AnharmonicSpec("cyclic", n, n, 1, None, None, t**n, phi, None, K, QQ)
    W = work.wronskian()
    Uders = [U]
    for _ in range(n):
        Uders.append(Uders[-1].derivative())
    out, seen = [], set()
    for s in _sample_points():
        if len(out) >= count:
            break
        if s == 0 or U(s) == 0:
            continue
        T = s**n
        if T in seen:
            continue
        seen.add(T)
        f = _sample_fiber_poly(work, U, Uders, W, s)
        out.append((K / T, [f.coeff(n - j) * T**j for j in range(n + 1)]))
    return out


def _eliminate_cyclic(spec: AnharmonicSpec, extra: int = 4) -> Poly:
    """Cyclic case over QQ(K).

    Rescaling t, eta by lambda scales K and T by lambda^n and x by lambda^-n,
    so G_j(T, K) = T^-j g_j(K/T); g_j is recovered over QQ from the K = 1
    fiber and checked against the K = 2 fiber.
    """
    n = spec.n
    E = degree_bounds(spec)
    bounds = [E[j] + j for j in range(n + 1)]
    need = max(2 * e + 1 for e in bounds) + extra
    main = _cyclic_samples(n, Fraction(1), need)
    check = _cyclic_samples(n, Fraction(2), extra)
    KF = spec.ring
    K = KF.gen()
    TF = FunctionField(KF, "T")
    T = Poly.gen(KF, "T")
    coeffs = [TF.one]
    for j in range(1, n + 1):
        e = bounds[j]
        us = [u for u, _ in main]
        ys = [c[j] for _, c in main]
        m = 2 * e + 1
        g = rational_interpolate(us[:m], ys[:m], e, e, QQ, "u")
        if g is None:
            raise EliminationError(f"coefficient {j}: no rational function of degree <= {e} fits")
        for u, y in list(zip(us[m:], ys[m:])) + [(u, c[j]) for u, c in check]:
            if g(u) != y:
                raise EliminationError(f"coefficient {j}: interpolant fails a verification point")
        D = max(g.num.degree, g.den.degree, 0)

        def homog(poly):
            out = Poly.const(0, KF, "T")
            for i, a in enumerate(poly.coeffs):
                if a:
                    out = out + T ** (D - i) * (K**i * a)
            return out

        coeffs.append(RatFun(homog(g.num), homog(g.den) * T**j))
    return Poly(list(reversed(coeffs)), TF, "x")


def _descend_F(F: Poly) -> Poly:
    base = F.ring.base
    if not isinstance(base, CyclotomicField):
        return F
    cs = []
    for G in F.coeffs:
        for part in (G.num, G.den):
            if not all(c.is_rational() for c in part.coeffs):
                return F
    TF = FunctionField(QQ, "T")
    for G in F.coeffs:
        cs.append(RatFun(_descend(G.num), _descend(G.den)))
    return Poly(cs, TF, "x")


def constant_coefficients(F: Poly) -> bool:
    """Every coefficient of every G_j(T) lies in the constant field."""
    base = F.ring.base
    return all(
        all(base.convert(c) == c for c in G.num.coeffs + G.den.coeffs) for G in F.coeffs
    )


# ---------------------------------------------------------------------------
# resultant route (sympy), used as an independent cross-check
# ---------------------------------------------------------------------------
def _to_sympy(poly: Poly, var, gens):
    """Poly (over QQ or QQ(K)) to a sympy expression in ``var``."""
    import sympy

    out = 0
    for k, c in enumerate(poly.coeffs):
        out += _scalar_sympy(c, gens) * var**k
    return sympy.expand(out) if not isinstance(out, int) else sympy.Integer(out)


def _scalar_sympy(c, gens):
    import sympy

    if isinstance(c, RatFun):
        sym = gens[c.var]
        return _to_sympy(c.num, sym, gens) / _to_sympy(c.den, sym, gens)
    if isinstance(c, Cyclotomic):
        if not c.is_rational():
            raise EliminationError("resultant route supports rational coefficients only")
        c = c.to_fraction()
    c = Fraction(c)
    return sympy.Rational(c.numerator, c.denominator)


def eliminate_resultant(spec: AnharmonicSpec, U: Poly):
    """Res_t(psi - T phi, den x - num) / lc, then the exact p-th root.  Returns a sympy expression."""
    import sympy

    t, x, T, e = sympy.symbols("t x T e")
    gens = {"t": t, "x": x, "T": T}
    if spec.symbolic:
        # eta = e with K = e^n
        gens["K"] = e**spec.n
        eta_expr = e
        Ur = U
    else:
        eta = spec.seed
        r = _rational(eta) if eta is not None and eta is not INF else None
        if r is None:
            raise EliminationError("resultant route needs a rational seed")
        eta_expr = sympy.Rational(r.numerator, r.denominator)
        Ur = _descend(U)
        if Ur.ring != QQ or _descend(spec.psi).ring != QQ:
            raise EliminationError("resultant route needs rational U and Psi")
    psi = _to_sympy(_descend(spec.psi) if not spec.symbolic else spec.psi, t, gens)
    phi = _to_sympy(_descend(spec.phi) if not spec.symbolic else spec.phi, t, gens)
    Us = _to_sympy(Ur, t, gens)
    n = spec.n
    W = sympy.expand(sympy.diff(psi, t) * phi - psi * sympy.diff(phi, t))
    num = sympy.expand(phi**2 * (n * Us - (t - eta_expr) * sympy.diff(Us, t)))
    den = sympy.expand(n * Us * (t - eta_expr) * W)
    g = sympy.gcd(num, den)
    num, den = sympy.cancel(num / g), sympy.cancel(den / g)
    fib = sympy.Poly(psi - T * phi, t)
    rel = sympy.Poly(den * x - num, t)
    R = sympy.Poly(sympy.resultant(fib.as_expr(), rel.as_expr(), t), x)
    lc = R.LC()
    monic = sympy.Poly([sympy.cancel(c / lc) for c in R.all_coeffs()], x)
    if spec.p == 1:
        return monic.as_expr()
    TF = FunctionField(QQ, "T")
    coeffs = []
    for c in reversed(monic.all_coeffs()):
        nu, de = sympy.fraction(sympy.together(c))
        coeffs.append(RatFun(_from_sympy(nu, T), _from_sympy(de, T)))
    Fp = Poly(coeffs, TF, "x")
    try:
        root = poly_pth_root(Fp, spec.p)
    except NotAPowerError as exc:
        fact = sympy.factor_list(monic.as_expr())
        raise EliminationError(f"resultant is not a {spec.p}-th power: {exc}; factors {fact}") from exc
    return sum(_scalar_sympy(c, {"T": T}) * x**k for k, c in enumerate(root.coeffs))


def _from_sympy(expr, var) -> Poly:
    import sympy

    P = sympy.Poly(expr, var)
    cs = [Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in reversed(P.all_coeffs())]
    return Poly(cs, QQ, "T")


def F_to_sympy(F: Poly, gens=None):
    import sympy

    x, T = sympy.symbols("x T")
    gens = dict(gens or {})
    gens.setdefault("T", T)
    gens.setdefault("x", x)
    return sum(_scalar_sympy(c, gens) * gens["x"] ** k for k, c in enumerate(F.coeffs))


# ---------------------------------------------------------------------------
# normalization
# ---------------------------------------------------------------------------
def normalize_homography(F: Poly, alpha, beta, gamma, delta) -> Poly:
    """Monic polynomial in w whose roots are (alpha x + beta)/(gamma x + delta) over roots x of F.

    x = (delta w - beta)/(alpha - gamma w), so G(w) = sum c_k (delta w - beta)^k (alpha - gamma w)^(n-k).
    """
    ring = F.ring
    w = Poly.gen(ring, "w")
    X = w * delta - beta
    Y = w * (-gamma) + alpha
    G = F.map_coeffs(lambda c: c, ring, "w").homogeneous_eval(X, Y, F.degree)
    return G.monic()


def cyclic_normalized(spec: AnharmonicSpec, F: Poly) -> Poly:
    """Apply w = 1 - 1/(n T x + T/(T - K)), which sends the roots to eta_i / t."""
    TF = F.ring
    T = TF.gen()
    K = TF.convert(RatFun(Poly.const(spec.T0, spec.ring, "T")))
    n = spec.n
    return normalize_homography(F, T * n, K / (T - K), T * n, T / (T - K))


# ---------------------------------------------------------------------------
# end to end
# ---------------------------------------------------------------------------
@dataclass
class AnharmonicResult:
    spec: AnharmonicSpec
    U: Poly
    F: Poly | None
    riccati: tuple
    provenance: dict = field(default_factory=dict)

    def to_json(self, emit=("U", "F", "riccati")) -> dict:
        out = {
            "group": self.spec.group.name,
            "n": self.spec.n,
            "p": self.spec.p,
            "N": self.spec.N,
            "provenance": {k: v for k, v in self.provenance.items() if not k.startswith("_")},
        }
        if "U" in emit:
            out["U"] = _poly_json(self.U)
        if "F" in emit and self.F is not None:
            out["F"] = [_ratfun_json(c) for c in self.F.coeffs]
        if "riccati" in emit:
            out["riccati"] = {f"B{i}": _ratfun_json(b) for i, b in enumerate(self.riccati)}
        return out

    def render_text(self, emit=("U", "F", "riccati")) -> str:
        lines = [f"anharmonic {self.spec.name}"]
        for k, v in sorted(self.provenance.items()):
            if not k.startswith("_"):
                lines.append(f"  {k}: {v}")
        if "U" in emit:
            lines.append(f"U(t) = {self.U}")
        if "F" in emit and self.F is not None:
            lines.append(f"F(x,T) = {self.F}")
        if "riccati" in emit:
            for i, b in enumerate(self.riccati):
                lines.append(f"B{i}(t) = {b}")
        return "\n".join(lines)


def _poly_json(p: Poly):
    if isinstance(p.ring, FunctionField):
        return [_ratfun_json(c) for c in p.coeffs]
    return poly_to_json(p)


def _ratfun_json(r: RatFun):
    return {"num": _poly_json(r.num), "den": _poly_json(r.den), "var": r.var}


def construct(kind: str, parameter=None, p: int = 1, n=None, seed=None, eliminate_F: bool = True,
              method: str = "symmetric") -> AnharmonicResult:
    spec = make_spec(kind, parameter, n, p, seed)
    U = orbit_polynomial(spec)
    ric = build_riccati(spec, U)
    F = eliminate(spec, U, method) if eliminate_F else None
    prov = dict(spec.provenance)
    prov["normalizations"] = ["P = 1/Psi'", "Q = -U'/(n U) so that the roots sum to 0", "F divided by its leading coefficient"]
    return AnharmonicResult(spec, U, F, ric, prov)


def numeric_fiber_match(result: AnharmonicResult, T_value: complex = 0.37 + 0.21j, dps: int = 40) -> float:
    """Max relative distance between the roots of F(x, T) and f(t_j, eta_0) over the fiber Psi(t_j) = T."""
    import mpmath

    spec, U, F = result.spec, result.U, result.F
    n = spec.n
    with mpmath.workdps(dps):
        T = mpmath.mpc(T_value)

        def mp(poly):
            return [cyc_embed(c, dps) for c in reversed(poly.coeffs)]

        def ev(cs, z, k=0):
            return mpmath.polyval(cs, z, derivative=True)[k] if k else mpmath.polyval(cs, z)

        psi, phi, Uc = mp(spec.psi), mp(spec.phi), mp(U)
        L = max(len(psi), len(phi))
        psi = [0] * (L - len(psi)) + psi
        phi = [0] * (L - len(phi)) + phi
        fib = [a - T * b for a, b in zip(psi, phi)]
        while fib and fib[0] == 0:
            fib.pop(0)
        ts = mpmath.polyroots(fib, maxsteps=400, extraprec=2 * dps)
        eta0 = mpmath.polyroots(Uc, maxsteps=400, extraprec=2 * dps)[0]
        xs = []
        for t in ts:
            dps_, dph = ev(psi, t, 1), ev(phi, t, 1)
            Pp = (dps_ * ev(phi, t) - ev(psi, t) * dph) / ev(phi, t) ** 2
            xs.append((1 / (t - eta0) - ev(Uc, t, 1) / (n * ev(Uc, t))) / Pp)
        Fc = [_eval_ratfun_mp(G, T) for G in reversed(F.coeffs)]
        roots = mpmath.polyroots(Fc, maxsteps=400, extraprec=2 * dps)
        scale = max(1, max(abs(r) for r in roots))
        err = max(min(abs(r - x) for x in xs) for r in roots)
        err = max(err, max(min(abs(r - x) for r in roots) for x in xs))
        return float(err / scale)


def _eval_ratfun_mp(G: RatFun, T):
    import mpmath

    def cs(poly):
        return [cyc_embed(c, mpmath.mp.dps) for c in reversed(poly.coeffs)]

    return mpmath.polyval(cs(G.num), T) / mpmath.polyval(cs(G.den), T)


ORBIT_CHECK_MAX_N = 12


def verify_construction(result: AnharmonicResult, numeric: bool = True, resultant: bool = False,
                        orbit_checks: bool | None = None) -> Report:
    """Exact checks of U, the Riccati equation and F, plus an optional numeric fiber match.

    ``orbit_checks`` (default: n <= 12) also parameterizes every orbit root in a
    common field; for larger n the generic-root check over Q[eta]/(U) already
    covers every root and the per-point work is skipped.
    """
    spec, U, F = result.spec, result.U, result.F
    rep = Report(f"anharmonic.{spec.name}")
    n, p = spec.n, spec.p
    rep.exact("U monic of degree n", U.degree == n and U.lc == 1, residual=f"degree {U.degree}")
    if not spec.symbolic:
        D = _fiber(spec.psi, spec.phi, spec.T0)
        c = D.lc
        ok = _lift(U, _common_ring(U.ring, D.ring)) ** p * c == _lift(D, _common_ring(U.ring, D.ring))
        rep.exact("psi - T0 phi = c U^p", ok, residual="power structure differs")
        prod = orbit_product(spec)
        if prod is not None:
            rep.exact("U = product over the orbit", _descend(prod) == U, residual="orbit product differs")
    ric = result.riccati
    rep.extend(verify_root_satisfies_riccati(spec, U, None, ric))
    if orbit_checks is None:
        orbit_checks = n <= ORBIT_CHECK_MAX_N
    pts = orbit_points(spec) if orbit_checks else None
    if not orbit_checks:
        rep.skip("per-orbit-point checks", f"n = {n} > {ORBIT_CHECK_MAX_N}; covered by the generic-root check")
    if pts is not None and not any(z is INF for z in pts):
        for k, eta in enumerate(pts):
            r = riccati_residual(spec, U, ric, eta)
            rep.exact(f"Riccati residual, orbit point {k}", r.is_zero(), residual=f"degree {r.degree}")
        common = _common_ring(*[_field_for(spec, U, eta) for eta in pts])
        fs = [parameterize_root(spec, U, eta, common) for eta in pts]
        total = fs[0]
        for f in fs[1:]:
            total = total + f
        rep.exact("sum of parameterized roots is 0", total.is_zero(), residual=str(total))
        if len(fs) >= 4:
            cr = cross_ratio(*fs[:4])
            cr_eta = cross_ratio(*pts[:4])
            ok = cr.num.degree <= 0 and cr.den.degree <= 0 and cr == cr.ring.convert(cr_eta)
            rep.exact("cross-ratio of four roots is t-free", ok, residual=str(cr))
    if F is not None:
        rep.exact("F monic of degree n", F.degree == n and F.lc == 1, residual=f"degree {F.degree}")
        rep.exact("F has constant coefficients", constant_coefficients(F))
        rep.exact("a1 = 0", F.coeff(n - 1) == 0, residual=str(F.coeff(n - 1)))
        disc_ok = _separable(F)
        rep.exact("F separable", disc_ok, residual="discriminant vanishes at the sample")
        if spec.symbolic:
            G = cyclic_normalized(spec, F)
            TF = G.ring
            target = Poly.monomial(n, 1, TF, "w") - TF.convert(RatFun(Poly.const(spec.T0, spec.ring, "T"))) / TF.gen()
            rep.exact("normalized F = x^n - K/T", G == target, residual=str(G))
        if numeric and not spec.symbolic:
            err = numeric_fiber_match(result)
            rep.numeric("numeric fiber roots match F", err, 1e-8)
        if resultant:
            import sympy

            Fr = eliminate_resultant(spec, U)
            gens = {}
            if spec.symbolic:
                gens["K"] = sympy.Symbol("e") ** n
            diff = sympy.simplify(sympy.together(Fr - F_to_sympy(F, gens)))
            rep.exact("resultant route agrees", diff == 0, residual=str(diff)[:200])
    return rep


def _separable(F: Poly) -> bool:
    """Discriminant of F at a sample T is nonzero, so Res_x(F, F_x) is not identically 0."""
    from .algebra import poly_resultant

    base = F.ring.base
    for T in (Fraction(7, 3), Fraction(11, 5), Fraction(-13, 7)):
        try:
            cs = [G(base.convert(T)) for G in F.coeffs]
        except ZeroDivisionError:
            continue
        f = Poly(cs, base, "x")
        if f.degree != F.degree:
            continue
        if poly_resultant(f, f.derivative()) != 0:
            return True
    return False
