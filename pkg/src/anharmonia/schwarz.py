"""Schwarzian derivatives, the Riccati pullback law and hypergeometric exponent bookkeeping."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import sympy

from .errors import DegenerateInputError
from .report import Report

__all__ = [
    "xi",
    "AlgebraicElement",
    "schwarzian",
    "schwarzian_from_derivative",
    "riccati_pullback",
    "eq20_rhs",
    "eq20_verify",
    "hypergeom_potential",
    "platonic_order",
    "INFINITE",
    "ExponentData",
    "exponent_data",
    "hypergeometric_equation",
    "schwarzian_target",
    "hypergeometric_consistency",
    "substitution_search",
    "cocycle_check",
    "schwarz_suite",
]

xi = sympy.Symbol("xi")
INFINITE = "infinite"


def _c(e):
    return sympy.cancel(sympy.together(e))


# ---------------------------------------------------------------------------
# Q(xi)[y] / (y^2 - (xi^3 - 1))
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class AlgebraicElement:
    """p + q y with y^2 = xi^3 - 1; p, q rational in xi (and any free parameters)."""

    p: sympy.Expr
    q: sympy.Expr = sympy.Integer(0)

    Y2 = xi**3 - 1

    @classmethod
    def y(cls):
        return cls(sympy.Integer(0), sympy.Integer(1))

    def __add__(self, o):
        o = _lift(o)
        return AlgebraicElement(_c(self.p + o.p), _c(self.q + o.q))

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicElement(-self.p, -self.q)

    def __sub__(self, o):
        return self + (-_lift(o))

    def __rsub__(self, o):
        return _lift(o) - self

    def __mul__(self, o):
        o = _lift(o)
        return AlgebraicElement(_c(self.p * o.p + self.q * o.q * self.Y2), _c(self.p * o.q + self.q * o.p))

    __rmul__ = __mul__

    def conj(self):
        return AlgebraicElement(self.p, -self.q)

    def norm(self):
        return _c(self.p**2 - self.q**2 * self.Y2)

    def inverse(self):
        nrm = self.norm()
        if nrm == 0:
            raise ZeroDivisionError("zero divisor in the quadratic extension")
        c = self.conj()
        return AlgebraicElement(_c(c.p / nrm), _c(c.q / nrm))

    def __truediv__(self, o):
        return self * _lift(o).inverse()

    def __rtruediv__(self, o):
        return _lift(o) * self.inverse()

    def diff(self):
        """d/dxi using y' = 3 xi^2 / (2 y) = (3 xi^2 / (2 (xi^3 - 1))) y."""
        dq = sympy.diff(self.q, xi) + self.q * 3 * xi**2 / (2 * self.Y2)
        return AlgebraicElement(_c(sympy.diff(self.p, xi)), _c(dq))

    def is_zero(self) -> bool:
        return self.p == 0 and self.q == 0

    def __eq__(self, o):
        o = _lift(o)
        return _c(self.p - o.p) == 0 and _c(self.q - o.q) == 0

    __hash__ = None


def _lift(x) -> AlgebraicElement:
    if isinstance(x, AlgebraicElement):
        return x
    return AlgebraicElement(sympy.sympify(x), sympy.Integer(0))


# ---------------------------------------------------------------------------
# Schwarzian and the pullback law
# ---------------------------------------------------------------------------
def schwarzian_from_derivative(d1, var=xi):
    """{f, x} from f' alone: (f''/f')' - (f''/f')^2 / 2."""
    if isinstance(d1, AlgebraicElement):
        if d1.is_zero():
            raise DegenerateInputError("f' vanishes identically")
        L = d1.diff() / d1
        return L.diff() - L * L * sympy.Rational(1, 2)
    d1 = sympy.sympify(d1)
    if _c(d1) == 0:
        raise DegenerateInputError("f' vanishes identically")
    L = _c(sympy.diff(d1, var) / d1)
    return _c(sympy.diff(L, var) - L**2 / 2)


def schwarzian(f, var=xi):
    """{f, var} = (f''/f')' - (f''/f')^2 / 2."""
    return schwarzian_from_derivative(sympy.diff(sympy.sympify(f), var), var)


def riccati_pullback(R, theta=None, var=xi, *, theta_prime=None, R_of_theta=None):
    """r(x) = theta'^2 R(theta) - {theta, x} / 2.

    ``R`` is a callable or an expression in ``var`` composed with ``theta``.
    When theta has no closed form (an elliptic integral), pass ``theta_prime``
    and the composite ``R_of_theta`` directly.
    """
    if theta_prime is None:
        theta = sympy.sympify(theta)
        theta_prime = sympy.diff(theta, var)
    if R_of_theta is None:
        R_of_theta = R(theta) if callable(R) else sympy.sympify(R).subs(var, theta)
    S = schwarzian_from_derivative(theta_prime, var)
    out = theta_prime * theta_prime * R_of_theta - S * sympy.Rational(1, 2)
    return out if isinstance(out, AlgebraicElement) else _c(out)


def eq20_rhs(a):
    c0 = 4 / a - 3
    c1 = 1 / a + 6
    return xi / 16 * (c0 * xi**3 - 4 * c1) / (xi**3 - 1) ** 2


def eq20_verify(a=None) -> Report:
    """w' + w^2 = xi/a along (d xi/dt)^2 = 4(xi^3 - 1), pulled back by t = theta(xi), theta' = 1/(2y).

    ``a=None`` keeps a symbolic, which proves the identity for every a at once.
    """
    a_sym = sympy.Symbol("a") if a is None else sympy.Rational(str(Fraction(a)))
    if a_sym == 0:
        raise DegenerateInputError("a must be nonzero")
    theta_p = AlgebraicElement.y().inverse() * sympy.Rational(1, 2)
    r = riccati_pullback(None, var=xi, theta_prime=theta_p, R_of_theta=AlgebraicElement(xi / a_sym))
    target = eq20_rhs(a_sym)
    diff = r - target
    c0, c1 = _c(4 / a_sym - 3), _c(1 / a_sym + 6)
    label = "a symbolic" if a is None else f"a = {a_sym}"
    rep = Report("schwarz.eq20")
    rep.exact(f"theta'^2 xi/a - {{theta, xi}}/2 = (xi/16)(c0 xi^3 - 4 c1)/(xi^3 - 1)^2, {label}",
              diff.is_zero(), residual=f"{diff.p} + ({diff.q}) y", c0=str(c0), c1=str(c1))
    rep.exact("pullback lies in Q(xi) (no y component)", r.q == 0, residual=str(r.q))
    return rep


def _frac_field():
    from sympy import QQ
    from sympy.polys.fields import field

    K, X = field("xi", QQ)
    return K, X


def _fs_schwarzian(f, X):
    d1 = f.diff(X)
    if d1 == 0:
        raise DegenerateInputError("f' vanishes identically")
    L = d1.diff(X) / d1
    return L.diff(X) - L * L / 2


def _fs_compose(f, g):
    """f(g) for elements of Q(xi), by Horner on numerator and denominator."""

    def horner(poly):
        out = g.field.zero
        for c in poly.to_dense():  # leading coefficient first
            out = out * g + g.field(c)
        return out

    return horner(f.numer) / horner(f.denom)


def _fs_pullback(R, theta, X):
    d = theta.diff(X)
    return d * d * _fs_compose(R, theta) - _fs_schwarzian(theta, X) / 2


def cocycle_check(pairs: int = 50, seed: int = 0) -> Report:
    """Chain rule {f o g} = {f} o g * g'^2 + {g} on random rational f, g and pullback
    cocycle on random Moebius pairs; Schwarzian of every Moebius map is 0."""
    rng = random.Random(seed)
    K, X = _frac_field()

    def rnd():
        return K(Fraction(rng.randint(-5, 5), rng.randint(1, 4)))

    def moebius():
        while True:
            a, b, c, d = (rnd() for _ in range(4))
            if a * d - b * c != 0:
                return (a * X + b) / (c * X + d)

    def rational():
        while True:
            num = sum((rnd() * X**k for k in range(3)), K.zero)
            den = sum((rnd() * X**k for k in range(2)), K.zero)
            if den != 0 and (num / den).diff(X) != 0:
                return num / den

    rep = Report("schwarz.cocycle")
    bad_m = bad_c = bad_p = 0
    nonzero_generic = 0
    for _ in range(pairs):
        m1, m2 = moebius(), moebius()
        if _fs_schwarzian(m1, X) != 0:
            bad_m += 1
        f, g = rational(), rational()
        lhs = _fs_schwarzian(_fs_compose(f, g), X)
        dg = g.diff(X)
        rhs = _fs_compose(_fs_schwarzian(f, X), g) * dg * dg + _fs_schwarzian(g, X)
        if lhs != rhs:
            bad_c += 1
        R = rational()
        twice = _fs_pullback(_fs_pullback(R, m1, X), m2, X)
        direct = _fs_pullback(R, _fs_compose(m1, m2), X)
        if twice != direct:
            bad_p += 1
        if max(f.numer.degree(), f.denom.degree()) > 1:
            nonzero_generic += _fs_schwarzian(f, X) != 0
    rep.exact(f"{{m, x}} = 0 on {pairs} random Moebius maps", bad_m == 0, residual=f"{bad_m} failures")
    rep.exact(f"{{f o g}} = {{f}} o g g'^2 + {{g}} on {pairs} random rational pairs", bad_c == 0,
              residual=f"{bad_c} failures")
    rep.exact(f"pullback by m1 then m2 = pullback by m1 o m2 on {pairs} random pairs", bad_p == 0,
              residual=f"{bad_p} failures")
    rep.exact("random non-Moebius rationals have nonzero Schwarzian", nonzero_generic > 0,
              residual="no non-Moebius sample", nonzero=nonzero_generic)
    return rep


# ---------------------------------------------------------------------------
# hypergeometric data
# ---------------------------------------------------------------------------
s_var = sympy.Symbol("s")


def hypergeom_potential(lam=None, mu=None, nu=None, n=None):
    """Q(s) = ((lam^2 - 1)/s^2 + (nu^2 - 1)/(1 - s)^2 + (lam^2 - mu^2 + nu^2 - 1)/(s(1 - s)))/4.

    With ``n`` the exponents are lam = 1/3, mu = n/(6(n - 2)), nu = 1/2.
    """
    if n is not None:
        lam, mu, nu = sympy.Rational(1, 3), sympy.Rational(n, 6 * (n - 2)), sympy.Rational(1, 2)
    lam, mu, nu = (sympy.nsimplify(v) for v in (lam, mu, nu))
    s = s_var
    return _c(((lam**2 - 1) / s**2 + (nu**2 - 1) / (1 - s) ** 2 + (lam**2 - mu**2 + nu**2 - 1) / (s * (1 - s))) / 4)


def platonic_order(k0: int, k1: int, kinf: int):
    """N from 2/N = 1/k0 + 1/k1 + 1/kinf - 1, or INFINITE when the right side is not positive."""
    ks = (k0, k1, kinf)
    if any(int(k) != k or k < 1 for k in ks):
        raise ValueError("k's must be positive integers")
    rhs = sum(Fraction(1, int(k)) for k in ks) - 1
    if rhs <= 0:
        return INFINITE
    N = 2 / rhs
    return int(N) if N.denominator == 1 else N


@dataclass(frozen=True)
class ExponentData:
    a: Fraction
    b: Fraction
    c: Fraction
    lam: Fraction
    mu: Fraction
    nu: Fraction
    mu0: Fraction
    mu1: Fraction
    muinf: Fraction
    k0: Fraction | None
    k1: Fraction | None
    kinf: Fraction | None

    @property
    def mu1_symmetric(self) -> bool:
        """Whether mu1 equals mu; the displayed relations give mu1 = 1 - lam + mu instead."""
        return self.mu1 == self.mu

    def to_json(self) -> dict:
        return {k: (None if v is None else str(v)) for k, v in self.__dict__.items()}


def exponent_data(a, b, c) -> ExponentData:
    """Literal relations: a + b + c = 1 - lam - mu, a - b = nu, c = 1 - lam;
    mu0 = 1 - c, mu1 = c - a - b, muinf = b - a; k = 1/mu (None when mu = 0)."""
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    lam = 1 - c
    mu = 1 - lam - (a + b + c)
    nu = a - b
    mu0, mu1, muinf = 1 - c, c - a - b, b - a

    def inv(m):
        return None if m == 0 else 1 / m

    return ExponentData(a, b, c, lam, mu, nu, mu0, mu1, muinf, inv(mu0), inv(mu1), inv(muinf))


def hypergeometric_equation(lam, mu, nu):
    """(P, Q) with y'' + P y' + Q y = 0 in the form parameterized by (lam, mu, nu)."""
    x = sympy.Symbol("x")
    lam, mu, nu = (sympy.nsimplify(v) for v in (lam, mu, nu))
    P = ((2 - lam - mu) * x + lam - 1) / (x * (1 - x))
    Q = ((1 - lam - mu) ** 2 - nu**2) / (4 * x * (1 - x))
    return x, P, Q


def schwarzian_target(mu0, mu1, muinf):
    """Right side of -4{s, x} = (1 - mu0^2)/(x^2(1 - x)) + (1 - mu1^2)/(x(1 - x)^2) - (1 - muinf^2)/(x(1 - x))."""
    x = sympy.Symbol("x")
    mu0, mu1, muinf = (sympy.nsimplify(v) for v in (mu0, mu1, muinf))
    return x, (1 - mu0**2) / (x**2 * (1 - x)) + (1 - mu1**2) / (x * (1 - x) ** 2) - (1 - muinf**2) / (x * (1 - x))


def hypergeometric_consistency(lam, mu, nu) -> Report:
    """Exploratory: the ratio of two solutions has {s, x} = 2(Q - P'/2 - P^2/4); compare with the target."""
    x, P, Q = hypergeometric_equation(lam, mu, nu)
    inv = _c(Q - sympy.diff(P, x) / 2 - P**2 / 4)
    # the standard exponent differences of this equation: lam at 0, nu at 1 ... read off directly
    ed = exponent_data(*_abc_from(lam, mu, nu))
    _, target = schwarzian_target(ed.mu0, ed.mu1, ed.muinf)
    r = _c(-8 * inv - target)
    rep = Report("schwarz.hypergeometric_consistency (exploratory)")
    rep.exact("-4 {s, x} from the equation equals the displayed target", r == 0, residual=str(r),
              exploratory=True, mu1_flag=str(ed.mu1))
    return rep


def _abc_from(lam, mu, nu):
    lam, mu, nu = Fraction(lam), Fraction(mu), Fraction(nu)
    c = 1 - lam
    s = 1 - lam - mu - c
    a = (s + nu) / 2
    return a, a - nu, c


def substitution_search(n: int = 4, ks=(1, 2, 3, -1, -2, -3), cs=(1, -1)) -> Report:
    """Exploratory: look for s = c xi^k pulling Q(s) back to the reduced right side (eq20_rhs).

    The pullback of W' + W^2 = Q(s) along s = c xi^k is s'^2 Q(s) - {s, xi}/2.
    Matches are reported; none is asserted.
    """
    a = sympy.Rational((n - 2) ** 2, n - 1)
    target = eq20_rhs(a)
    Q = hypergeom_potential(n=n)
    rep = Report("schwarz.substitution_search (exploratory)")
    matches = []
    for k in ks:
        for c in cs:
            sub = c * xi**k
            r = riccati_pullback(Q.subs(s_var, xi), sub)
            if _c(r - target) == 0:
                matches.append(f"s = {c} xi^{k}")
    rep.exact(f"substitutions s = c xi^k reproducing the reduced equation, n = {n}", True,
              matches=matches, exploratory=True, searched=len(ks) * len(cs))
    return rep


def schwarz_suite(seed: int = 0, cases: int = 50) -> Report:
    rep = Report("schwarz")
    rep.extend(eq20_verify(None))
    rep.extend(eq20_verify(Fraction(4, 3)))
    rep.extend(eq20_verify(Fraction(1, 2)))
    x = xi
    rep.exact("{xi^2, xi} = -3/(2 xi^2)", _c(schwarzian(x**2) + sympy.Rational(3, 2) / x**2) == 0)
    rep.exact("pullback of R = 0 by xi^2 is 3/(4 xi^2)",
              _c(riccati_pullback(0, x**2) - sympy.Rational(3, 4) / x**2) == 0)
    triples = {(2, 2, 7): 14, (2, 3, 3): 12, (2, 3, 4): 24, (2, 3, 5): 60}
    for t, N in triples.items():
        got = platonic_order(*t)
        rep.exact(f"platonic_order{t} = {N}", got == N, residual=str(got))
    got = platonic_order(2, 3, 7)
    rep.exact("platonic_order(2, 3, 7) is infinite", got == INFINITE, residual=str(got))
    rep.exact("Q = 0 for lam = mu = nu = 1", hypergeom_potential(1, 1, 1) == 0)
    rep.extend(cocycle_check(cases, seed))
    return rep
