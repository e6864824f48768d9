"""Darboux polynomials of X = d/dz + (q - u^2) d/du and the constraint q'' = 6 a q^2.

Differential polynomials live in a sparse sympy ring QQ[u, q0..qJ, A0..AJ]
where q_k stands for the k-th z-derivative of q and A_k for that of a1.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import DegenerateInputError
from .report import Report

__all__ = [
    "JetRing",
    "jet_ring",
    "ConstraintIdeal",
    "ideal_for",
    "build_phi",
    "covariants",
    "verify_leibniz",
    "verify_commutator",
    "verify_cofactors",
    "verify_first_integral_relations",
    "tau4_check",
    "n2_impossibility",
    "darboux_suite",
    "constants",
]


@dataclass(frozen=True)
class JetRing:
    R: object
    u: object
    q: tuple
    A: tuple

    @property
    def order(self) -> int:
        return len(self.q) - 1

    def D(self, f):
        """Total z-derivative: q_k -> q_(k+1), A_k -> A_(k+1), u held fixed."""
        out = self.R.zero
        for k in range(self.order):
            out += f.diff(self.q[k]) * self.q[k + 1] + f.diff(self.A[k]) * self.A[k + 1]
        if f.diff(self.q[-1]) != 0 or f.diff(self.A[-1]) != 0:
            raise OverflowError("jet order exceeded; build the ring with a larger order")
        return out

    def du(self, f):
        return f.diff(self.u)

    def X(self, f):
        """X(f) = df/dz + (q - u^2) df/du."""
        return self.D(f) + (self.q[0] - self.u**2) * self.du(f)

    def u_degree(self, f) -> int:
        return max((m[0] for m in f.monoms()), default=-1)

    def u_coeff(self, f, k):
        """Coefficient of u^k as an element of the same ring."""
        out = self.R.zero
        for m, c in f.terms():
            if m[0] == k:
                out += self.R({(0,) + m[1:]: c})
        return out


@lru_cache(maxsize=None)
def jet_ring(order: int = 16) -> JetRing:
    from sympy import QQ
    from sympy.polys.rings import ring

    names = ["u"] + [f"q{k}" for k in range(order + 1)] + [f"A{k}" for k in range(order + 1)]
    R, *gens = ring(",".join(names), QQ)
    u = gens[0]
    q = tuple(gens[1:order + 2])
    A = tuple(gens[order + 2:])
    return JetRing(R, u, q, A)


# ---------------------------------------------------------------------------
# the constraint ideal
# ---------------------------------------------------------------------------
class ConstraintIdeal:
    """Rewrite rule q'' -> 6 a q^2 together with all its z-derivatives."""

    def __init__(self, a, J: JetRing):
        self.a = Fraction(a)
        self.J = J
        c = self.J.R.domain.convert(self.a.numerator) / self.a.denominator * 6
        q0, q1 = J.q[0], J.q[1]
        rules = [q0, q1, q0**2 * c]
        for _ in range(3, J.order + 1):
            r = rules[-1]
            rules.append(r.diff(q0) * q1 + r.diff(q1) * q0**2 * c)
        self.rules = rules

    @property
    def six_a(self) -> Fraction:
        return 6 * self.a

    def reduce(self, f):
        subs = [(self.J.q[k], self.rules[k]) for k in range(2, self.J.order + 1)]
        return f.compose(subs)

    def contains(self, f) -> bool:
        return self.reduce(f) == 0

    def __repr__(self):
        return f"<q'' = {self.six_a} q^2>"


def ideal_for(n: int, J: JetRing | None = None) -> ConstraintIdeal:
    """q'' = 6 a q^2 with a = (n-2)^2/(n-1)."""
    return ConstraintIdeal(Fraction((n - 2) ** 2, n - 1), J or jet_ring(_order_for(n)))


def _order_for(n: int) -> int:
    return max(8, n + 6)


def constants(n: int) -> dict:
    """a, alpha, k of the first-integral relations and the ideal constant 6a."""
    a = Fraction(-6 * (n - 2) ** 2, n - 1)
    alpha = Fraction(-4 * (n - 2) ** 2, n - 1)
    k = Fraction(6) - Fraction(12, n)
    return {"a": a, "alpha": alpha, "k": k, "six_a_ideal": Fraction(6 * (n - 2) ** 2, n - 1)}


# ---------------------------------------------------------------------------
# Phi and its covariants
# ---------------------------------------------------------------------------
def build_phi(n: int, a1=0, J: JetRing | None = None):
    """Phi = sum C(n,k) a_k u^(n-k) with (n-k) a_(k+1) = n a1 a_k - a_k' - k a_(k-1) q.

    ``a1`` is 0 or the string "A" for a free function A0.  Returns (Phi, closure, a)
    where closure = a_n' - n a1 a_n + n a_(n-1) q must vanish.
    """
    if n < 2:
        raise DegenerateInputError("Phi needs degree at least 2")
    J = J or jet_ring(_order_for(n))
    R, q = J.R, J.q[0]
    a1v = J.A[0] if a1 == "A" else R(a1)
    a = [R.one, a1v]
    for k in range(1, n):
        nxt = n * a1v * a[k] - J.D(a[k]) - k * a[k - 1] * q
        a.append(nxt * R.domain.convert(1) / (n - k))
    closure = J.D(a[n]) - n * a1v * a[n] + n * a[n - 1] * q
    Phi = sum((comb(n, k) * a[k] * J.u ** (n - k) for k in range(n + 1)), R.zero)
    return Phi, closure, a


def covariants(Phi, n: int, J: JetRing | None = None):
    """(H, Omega, Omega1, Xi) built from u-derivatives of Phi."""
    J = J or jet_ring(_order_for(n))
    d = J.du
    H = n * Phi * d(d(Phi)) - (n - 1) * d(Phi) ** 2
    Om = n * Phi * d(H) - 2 * (n - 2) * H * d(Phi)
    Om1 = n * Phi * d(Om) - 3 * (n - 2) * Om * d(Phi)
    Xi = 2 * H * d(Om) - 3 * Om * d(H)
    return H, Om, Om1, Xi


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------
def _random_upoly(J: JetRing, rng, terms=5, udeg=4, qorder=3):
    R = J.R
    f = R.zero
    for _ in range(terms):
        mono = J.u ** rng.randint(0, udeg)
        for _ in range(rng.randint(0, 2)):
            mono *= J.q[rng.randint(0, qorder)]
        f += mono * rng.randint(-5, 5)
    return f


def verify_leibniz(J: JetRing, rng, trials: int = 20) -> Report:
    rep = Report("darboux.leibniz")
    bad = 0
    for _ in range(trials):
        f, g = _random_upoly(J, rng), _random_upoly(J, rng)
        bad += J.X(f * g) != f * J.X(g) + g * J.X(f)
    rep.exact("X(fg) = f X(g) + g X(f)", bad == 0, residual=f"{bad} failures", trials=trials)
    c = J.R(7)
    rep.exact("X(constant) = 0", J.X(c) == 0)
    rep.exact("X(u) = q - u^2", J.X(J.u) == J.q[0] - J.u**2)
    return rep


def verify_commutator(J: JetRing, rng, trials: int = 20) -> Report:
    """[X, d/du] f = X(f_u) - (X f)_u = 2 u f_u."""
    rep = Report("darboux.commutator")
    bad = 0
    for _ in range(trials):
        f = _random_upoly(J, rng)
        bad += J.X(J.du(f)) - J.du(J.X(f)) != 2 * J.u * J.du(f)
    rep.exact("[X, d/du] = 2u d/du", bad == 0, residual=f"{bad} failures", trials=trials)
    return rep


def verify_cofactors(n: int, ideal: ConstraintIdeal | None = None) -> Report:
    J = jet_ring(_order_for(n))
    ideal = ideal or ideal_for(n, J)
    Phi, closure, a = build_phi(n, 0, J)
    H, Om, Om1, Xi = covariants(Phi, n, J)
    u = J.u
    L = -n * u + 2 * u  # n a1 - n u + 2u with a1 = 0
    rep = Report(f"darboux.cofactors.n{n}")
    checks = [
        ("X(Phi) + n u Phi", J.X(Phi) + n * u * Phi),
        ("X(Phi') + n Phi - (2-n) u Phi'", J.X(J.du(Phi)) + n * Phi - L * J.du(Phi)),
        ("X(H) - 2(2-n)u H", J.X(H) - 2 * L * H),
        ("X(Omega) - 3(2-n)u Omega", J.X(Om) - 3 * L * Om),
        ("X(Omega1) - 4(2-n)u Omega1", J.X(Om1) - 4 * L * Om1),
        ("X(Xi) - (12-5n)u Xi", J.X(Xi) - (12 * u - 5 * n * u) * Xi),
    ]
    for name, expr in checks:
        r = ideal.reduce(expr)
        rep.exact(f"{name} = 0 mod ideal", r == 0, residual=str(r)[:200])
    return rep


def _divide(num, den, J: JetRing, ideal: ConstraintIdeal):
    """Quotient of num by a u-monic den, with the remainder reduced mod the ideal."""
    qt, rem = num.div(den)
    return ideal.reduce(qt), ideal.reduce(rem)


def verify_first_integral_relations(n: int, ideal: ConstraintIdeal | None = None) -> Report:
    if n not in (3, 4, 6, 12):
        raise DegenerateInputError("the first-integral relations need n(6 - k) = 12, i.e. n in {3, 4, 6, 12}")
    J = jet_ring(_order_for(n))
    ideal = ideal or ideal_for(n, J)
    Phi, _, _ = build_phi(n, 0, J)
    H, Om, Om1, Xi = (ideal.reduce(x) for x in covariants(Phi, n, J))
    Phi = ideal.reduce(Phi)
    cs = constants(n)
    a, alpha, k = cs["a"], cs["alpha"], int(cs["k"])
    dom = J.R.domain
    A = dom.convert(a.numerator) / a.denominator
    Al = dom.convert(alpha.numerator) / alpha.denominator
    rep = Report(f"darboux.first_integrals.n{n}")
    r = ideal.reduce(Om1 - A * H**2)
    rep.exact(f"Omega1 - ({a}) H^2 = 0 mod ideal", r == 0, residual=str(r)[:200], a=str(a))
    beta, rem = _divide(Om**2 - Al * H**3, Phi**k, J, ideal)
    rep.exact(f"Omega^2 - ({alpha}) H^3 divisible by Phi^{k}", rem == 0, residual=str(rem)[:200])
    u_free = J.u_degree(beta) <= 0
    dbeta = ideal.reduce(J.D(beta))
    rep.exact("beta is u-free", u_free, residual=str(beta)[:200])
    rep.exact("beta' = 0 mod ideal", dbeta == 0, residual=str(dbeta)[:200], beta=str(beta), alpha=str(alpha), k=k)
    C, rem = _divide(Xi, Phi ** (k - 1), J, ideal)
    rep.exact(f"Xi divisible by Phi^{k - 1}", rem == 0, residual=str(rem)[:200])
    dC = ideal.reduce(J.D(C))
    rep.exact("C' = 12 a1 C = 0 mod ideal", J.u_degree(C) <= 0 and dC == 0, residual=str(dC)[:200], C=str(C))
    H_nonzero = H != 0
    rep.exact("H != 0", H_nonzero)
    return rep


def tau4_check(n: int, ideal: ConstraintIdeal | None = None, perturb: bool = False) -> Report:
    """(n-1)/n^2 (Omega1 - a H^2)/Phi^2 and the u-derivative form; both must vanish mod ideal.

    ``perturb`` shifts a2 by q/C(n,2) as a negative control (a3 is invisible to
    tau4 of a quartic once a1 = 0).
    """
    from .algebra import Poly, SympyDomain
    from .binform import fourth_transvectant

    if n < 4:
        raise DegenerateInputError("tau4 needs n >= 4")
    J = jet_ring(_order_for(n))
    ideal = ideal or ideal_for(n, J)
    Phi, _, _ = build_phi(n, 0, J)
    if perturb:
        Phi = Phi + J.u ** (n - 2) * J.q[0]
    H, _, Om1, _ = covariants(Phi, n, J)
    a = constants(n)["a"]
    dom = J.R.domain
    A = dom.convert(a.numerator) / a.denominator
    quot, rem = _divide(Om1 - A * H**2, Phi**2, J, ideal)
    d = [Phi]
    for _ in range(4):
        d.append(J.du(d[-1]))
    direct = n * (n - 1) * d[0] * d[4] - 4 * (n - 1) * (n - 3) * d[1] * d[3] + 3 * (n - 2) * (n - 3) * d[2] ** 2
    scaled = quot * dom.convert(n - 1) / (n * n)
    tag = " (perturbed)" if perturb else ""
    rep = Report(f"darboux.tau4.n{n}{tag}")
    rep.exact(f"tau4 quotient form = u-derivative form{tag}", ideal.reduce(scaled - direct) == 0 and rem == 0,
              residual=str(ideal.reduce(scaled - direct))[:200])
    # cross-check against the binary-form fourth transvectant in the variable u
    S = SympyDomain(J.R)
    coeffs = [J.u_coeff(Phi, k) for k in range(n + 1)]
    F = Poly([S.convert(c) for c in coeffs], S, "u")
    ft = fourth_transvectant(F, n)
    back = sum((c * J.u**k for k, c in enumerate(ft.coeffs)), J.R.zero)
    rep.exact(f"u-derivative form matches the fourth transvectant{tag}", back == direct)
    r = ideal.reduce(direct)
    rep.exact(f"tau4(Phi) = 0 mod ideal{tag}", r == 0, residual=str(r)[:200])
    return rep


def n2_impossibility() -> Report:
    """n = 2: the closure forces a_2' = 0, so a_2 = -q is constant, which is excluded."""
    J = jet_ring(8)
    Phi, closure, a = build_phi(2, 0, J)
    rep = Report("darboux.n2")
    ok = a[2] == -J.q[0] and J.D(a[2]) == -J.q[1] and closure == J.D(a[2])
    rep.exact("n=2 closure reads a2' = 0 with a2 = -q", ok, residual=f"closure {closure}")
    rep.exact("n=2 impossibility flagged (q forced constant)", ok, flag="n=2 impossible: q would be constant")
    return rep


def closure_check(n: int) -> Report:
    J = jet_ring(_order_for(n))
    ideal = ideal_for(n, J)
    Phi, closure, a = build_phi(n, 0, J)
    rep = Report(f"darboux.closure.n{n}")
    r = ideal.reduce(closure)
    rep.exact(f"closure = 0 mod q'' = {ideal.six_a} q^2", r == 0, residual=str(r)[:200])
    if n == 4:
        target = ideal.reduce(J.q[3] - 16 * J.q[0] * J.q[1])
        expected = J.R(-1) / 6 * (J.q[3] - 16 * J.q[0] * J.q[1])
        rep.exact("n=4 closure is -(q''' - 16 q q')/6", closure == expected and target == 0, residual=str(closure))
    if n == 3:
        expected = (J.q[2] - 3 * J.q[0] ** 2) / 2
        rep.exact("n=3 closure is (q'' - 3 q^2)/2", closure == expected, residual=str(closure))
        rep.exact("n=3: a2 != 0", a[2] != 0)
    return rep


def darboux_suite(n: int) -> Report:
    import random

    rep = Report(f"darboux.n{n}")
    if n == 2:
        return rep.extend(n2_impossibility())
    J = jet_ring(_order_for(n))
    rng = random.Random(n)
    rep.extend(verify_leibniz(J, rng))
    rep.extend(verify_commutator(J, rng))
    rep.extend(closure_check(n))
    rep.extend(verify_cofactors(n))
    if n in (3, 4, 6, 12):
        rep.extend(verify_first_integral_relations(n))
    if n >= 4:
        rep.extend(tau4_check(n))
    return rep
