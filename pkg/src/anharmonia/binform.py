"""Binary forms, the Cayley Omega-process and transvectants.

A form of degree n is stored in the binomial convention: the coefficient of
x^(n-k) y^k is C(n, k) a_k.  Inhomogeneous polynomials are obtained by setting
y = 1, so F(p) = f(p, 1).
"""
from __future__ import annotations

import random
from fractions import Fraction
from math import comb, factorial

from .algebra import QQ, Poly
from .errors import DegenerateInputError
from .report import Report

__all__ = [
    "BinaryForm",
    "omega_transvectant",
    "transvectant_inhom",
    "reconciliation_constant",
    "hessian_inhom",
    "fourth_transvectant",
    "fourth_transvectant_coeffs",
    "klein_form",
    "KLEIN_KINDS",
    "generalized_chazy_residue",
    "chazy_target",
    "random_form",
    "transvect_suite",
]


class BinaryForm:
    """f(x, y) = sum C(n, k) a_k x^(n-k) y^k with coefficients in a field (default QQ)."""

    __slots__ = ("a", "ring")

    def __init__(self, a, ring=QQ):
        if not a:
            raise DegenerateInputError("a binary form needs at least one coefficient")
        self.ring = ring
        self.a = tuple(ring.convert(c) for c in a)

    @classmethod
    def from_monomials(cls, c, ring=QQ) -> "BinaryForm":
        """From c_k = coefficient of x^(n-k) y^k."""
        n = len(c) - 1
        return cls([ring.convert(ck) / comb(n, k) for k, ck in enumerate(c)], ring)

    @classmethod
    def from_inhom(cls, F: Poly, degree: int) -> "BinaryForm":
        """Homogenize F(p) = f(p, 1) to the given degree."""
        if F.degree > degree:
            raise DegenerateInputError(f"polynomial of degree {F.degree} exceeds form degree {degree}")
        return cls.from_monomials([F.coeff(degree - k) for k in range(degree + 1)], F.ring)

    @property
    def degree(self) -> int:
        return len(self.a) - 1

    def monomials(self) -> list:
        n = self.degree
        return [comb(n, k) * a for k, a in enumerate(self.a)]

    def inhom(self, var: str = "p") -> Poly:
        return Poly(list(reversed(self.monomials())), self.ring, var)

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.a)

    def __eq__(self, other):
        if not isinstance(other, BinaryForm):
            return NotImplemented
        return self.a == other.a

    def __hash__(self):
        return hash(self.a)

    def __add__(self, other):
        if self.degree != other.degree:
            raise DegenerateInputError("forms of different degree")
        return BinaryForm([x + y for x, y in zip(self.a, other.a)], self.ring)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "BinaryForm":
        return BinaryForm([c * x for x in self.a], self.ring)

    def __mul__(self, other):
        if not isinstance(other, BinaryForm):
            return self.scale(other)
        u, v = self.monomials(), other.monomials()
        out = [self.ring.zero] * (len(u) + len(v) - 1)
        for i, x in enumerate(u):
            if x:
                for j, y in enumerate(v):
                    out[i + j] += x * y
        return BinaryForm.from_monomials(out, self.ring)

    __rmul__ = scale

    def dx(self) -> "BinaryForm":
        n, c = self.degree, self.monomials()
        if n == 0:
            return BinaryForm([0], self.ring)
        return BinaryForm.from_monomials([(n - k) * c[k] for k in range(n)], self.ring)

    def dy(self) -> "BinaryForm":
        n, c = self.degree, self.monomials()
        if n == 0:
            return BinaryForm([0], self.ring)
        return BinaryForm.from_monomials([k * c[k] for k in range(1, n + 1)], self.ring)

    def partial(self, i: int, j: int) -> "BinaryForm":
        """d^(i+j) f / dx^i dy^j."""
        f = self
        for _ in range(i):
            f = f.dx()
        for _ in range(j):
            f = f.dy()
        return f

    def transform(self, a, b, c, d) -> "BinaryForm":
        """(g.f)(x, y) = f(a x + b y, c x + d y)."""
        n = self.degree
        X = Poly([b, a], self.ring, "s")  # a x + b y at x = s, y = 1
        Y = Poly([d, c], self.ring, "s")
        # the s^j coefficient of f(X, Y) is the x^j y^(n-j) coefficient
        total = Poly.const(0, self.ring, "s")
        for k, ck in enumerate(self.monomials()):
            if ck:
                total = total + X ** (n - k) * Y**k * ck
        return BinaryForm.from_monomials([total.coeff(n - k) for k in range(n + 1)], self.ring)

    def __call__(self, x, y):
        n = self.degree
        return sum(c * x ** (n - k) * y**k for k, c in enumerate(self.monomials()))

    def __str__(self):
        return "(" + ", ".join(str(a) for a in self.a) + f")(x,y)^{self.degree}"

    __repr__ = __str__

    def to_json(self):
        return {"degree": self.degree, "a": [str(a) for a in self.a]}


def omega_transvectant(Q: BinaryForm, R: BinaryForm, r: int, normalized: bool = False) -> BinaryForm:
    """Omega^r {Q(x, y) R(x', y')} restricted to x' = x, y' = y.

    With ``normalized`` the result is multiplied by (m-r)!(n-r)!/(m! n!).
    """
    m, n = Q.degree, R.degree
    if r < 0 or r > min(m, n):
        raise DegenerateInputError(f"transvectant order {r} exceeds min degree {min(m, n)}")
    deg = m + n - 2 * r
    total = BinaryForm([0] * (deg + 1), Q.ring)
    for i in range(r + 1):
        term = Q.partial(r - i, i) * R.partial(i, r - i)
        total = total + term.scale((-1) ** i * comb(r, i))
    if normalized:
        total = total.scale(Fraction(factorial(m - r) * factorial(n - r), factorial(m) * factorial(n)))
    return total


def transvectant_inhom(F: Poly, G: Poly, r: int, m: int | None = None, n: int | None = None) -> Poly:
    """(F, G)^r for F of nominal degree m and G of nominal degree n.

    sum_k (-1)^k C(r,k) (n-k)!/(n-r)! (m-r+k)!/(m-r)! F^(r-k) G^(k); for r = 1
    this is n F' G - m F G'.  The factorial attached to F's derivative counts
    the degree of G, which is what makes it agree with the Omega-process.
    """
    m = F.degree if m is None else m
    n = G.degree if n is None else n
    if r < 0 or r > min(m, n):
        raise DegenerateInputError(f"transvectant order {r} exceeds min degree {min(m, n)}")
    total = Poly.const(0, F.ring, F.var)
    for k in range(r + 1):
        c = Fraction((-1) ** k * comb(r, k) * factorial(n - k) * factorial(m - r + k),
                     factorial(n - r) * factorial(m - r))
        total = total + F.derivative(r - k) * G.derivative(k) * c
    return total


def reconciliation_constant(m: int, n: int, r: int) -> Fraction:
    """c with omega_transvectant(f, g, r) dehomogenized = c * transvectant_inhom(F, G, r).

    Measured once on the monomial pair f = x^m, g = y^n.
    """
    f = BinaryForm.from_monomials([1] + [0] * m)
    g = BinaryForm.from_monomials([0] * n + [1])
    lhs = omega_transvectant(f, g, r).inhom()
    rhs = transvectant_inhom(f.inhom(), g.inhom(), r, m, n)
    k = rhs.degree
    return Fraction(lhs.coeff(k)) / Fraction(rhs.coeff(k))


def hessian_inhom(F: Poly, n: int | None = None) -> Poly:
    """n(n-1)(F F'' - ((n-1)/n) F'^2), which is half of (F, F)^2."""
    n = F.degree if n is None else n
    return (F * F.derivative(2) - F.derivative() ** 2 * Fraction(n - 1, n)) * (n * (n - 1))


def fourth_transvectant(F: Poly, m: int | None = None) -> Poly:
    """m(m-1) F'''' F - 4(m-3)(m-1) F''' F' + 3(m-3)(m-2) F''^2.

    Equal to (F, F)^4 divided by 2(m-2)(m-3).
    """
    m = F.degree if m is None else m
    if m < 4:
        raise DegenerateInputError("the fourth transvectant needs degree at least 4")
    d = [F.derivative(k) for k in range(5)]
    return (
        d[4] * d[0] * (m * (m - 1))
        - d[3] * d[1] * (4 * (m - 3) * (m - 1))
        + d[2] * d[2] * (3 * (m - 3) * (m - 2))
    )


def fourth_transvectant_coeffs(f: BinaryForm) -> BinaryForm:
    """Binomial coefficients alpha_0..alpha_m, m = 2(n-4), of (f, f)^4 / 2 (normalized).

    C(m, r) alpha_r = sum_s p_(r,s) P_(r,s) / 2 over the full range of s; P is
    symmetric under s -> r - s, so this is the half-range sum with the middle
    term halved, and alpha_0 = a0 a4 - 4 a1 a3 + 3 a2^2.
    """
    n = f.degree
    if n < 4:
        raise DegenerateInputError("the fourth transvectant needs degree at least 4")
    a = f.a
    k = n - 4
    m = 2 * k

    def P(r, s):
        j = r - s
        return (a[s] * a[j + 4] - 4 * a[s + 1] * a[j + 3] + 6 * a[s + 2] * a[j + 2]
                - 4 * a[s + 3] * a[j + 1] + a[s + 4] * a[j])

    alpha = []
    for r in range(m + 1):
        acc = f.ring.zero
        for s in range(max(0, r - k), min(r, k) + 1):
            acc += comb(k, s) * comb(k, r - s) * P(r, s)
        alpha.append(acc / (2 * comb(m, r)))
    return BinaryForm(alpha, f.ring)


KLEIN_KINDS = ("degenerate1", "degenerate2", "tetrahedral", "octahedral", "icosahedral")
_KLEIN_ALIASES = {"tetra": "tetrahedral", "oct": "octahedral", "octa": "octahedral", "ico": "icosahedral",
                  "icosa": "icosahedral", "degenerate": "degenerate1"}


def klein_form(kind: str, k: int = 6) -> BinaryForm:
    """The forms with vanishing fourth transvectant (x = x1, y = x2)."""
    kind = _KLEIN_ALIASES.get(kind, kind)
    if kind == "degenerate1":
        mono = [1] + [0] * k
    elif kind == "degenerate2":
        mono = [0, 1] + [0] * (k - 1)
    elif kind == "tetrahedral":  # x2 (x1^3 + x2^3)
        mono = [0, 1, 0, 0, 1]
    elif kind == "octahedral":  # x1 x2 (x1^4 + x2^4)
        mono = [0, 1, 0, 0, 0, 1, 0]
    elif kind == "icosahedral":  # x1 x2 (x1^10 - 11 x1^5 x2^5 - x2^10)
        mono = [0] * 13
        mono[1], mono[6], mono[11] = 1, -11, -1
    else:
        raise ValueError(f"unknown Klein form {kind!r}; expected one of {KLEIN_KINDS}")
    return BinaryForm.from_monomials(mono)


def random_form(degree: int, rng: random.Random, bound: int = 9) -> BinaryForm:
    return BinaryForm([Fraction(rng.randint(-bound, bound), rng.randint(1, 4)) for _ in range(degree + 1)])


# ---------------------------------------------------------------------------
# generalized Chazy
# ---------------------------------------------------------------------------
def _jets():
    import sympy

    return sympy.symbols("R0:6")


def _total_derivative(expr, R):
    import sympy

    return sympy.expand(sum(sympy.diff(expr, R[k]) * R[k + 1] for k in range(len(R) - 1)))


def chazy_target(n: int):
    """R''' - 12 R R'' + 18 R'^2 - (6 n^2/(n-1)) (R' - R^2)^2 in jet variables."""
    import sympy

    R = _jets()
    return sympy.expand(R[3] - 12 * R[0] * R[2] + 18 * R[1] ** 2
                        - sympy.Rational(6 * n * n, n - 1) * (R[1] - R[0] ** 2) ** 2)


def generalized_chazy_residue(n: int):
    """Substitute F' = -n R F (and its derivatives) into the fourth transvectant, divide by F^2.

    Returns (residue, scalar) where residue = scalar * chazy_target(n); scalar is None
    when the two are not proportional.
    """
    import sympy

    if n < 4:
        raise DegenerateInputError("the generalized Chazy reduction needs n >= 4")
    R = _jets()
    c = [sympy.Integer(1)]  # F^(k) = c_k F
    for _ in range(4):
        c.append(sympy.expand(_total_derivative(c[-1], R) - n * R[0] * c[-1]))
    m = n
    residue = sympy.expand(m * (m - 1) * c[4] - 4 * (m - 3) * (m - 1) * c[3] * c[1]
                           + 3 * (m - 3) * (m - 2) * c[2] ** 2)
    target = chazy_target(n)
    ratio = sympy.cancel(residue / target)
    scalar = ratio if ratio.free_symbols == set() else None
    return residue, scalar


def substitution_table(n: int, order: int = 4):
    """Jet polynomials c_k with F^(k) = c_k F under F' = -n R F."""
    import sympy

    R = _jets()
    c = [sympy.Integer(1)]
    for _ in range(order):
        c.append(sympy.expand(_total_derivative(c[-1], R) - n * R[0] * c[-1]))
    return c


# ---------------------------------------------------------------------------
# suite
# ---------------------------------------------------------------------------
def transvect_suite(seed: int = 0, cases: int = 100, max_degree: int = 8, max_r: int = 4) -> Report:
    """Omega-process against the inhomogeneous formula, the alpha recursion, Klein forms, generalized Chazy."""
    rng = random.Random(seed)
    rep = Report("transvect")
    bad = []
    for i in range(cases):
        m, n = rng.randint(1, max_degree), rng.randint(1, max_degree)
        r = rng.randint(0, min(m, n, max_r))
        f, g = random_form(m, rng), random_form(n, rng)
        if omega_transvectant(f, g, r).inhom() != transvectant_inhom(f.inhom(), g.inhom(), r, m, n):
            bad.append((i, m, n, r))
    rep.exact(f"Omega-process = inhomogeneous transvectant on {cases} random pairs", not bad,
              residual=f"{len(bad)} mismatches, first {bad[:1]}")
    bad = []
    for n in range(4, max_degree + 1):
        f = random_form(n, rng)
        half = omega_transvectant(f, f, 4, normalized=True).scale(Fraction(1, 2))
        if fourth_transvectant_coeffs(f).a != half.a:
            bad.append(n)
        if fourth_transvectant(f.inhom(), n) * (2 * (n - 2) * (n - 3)) != omega_transvectant(f, f, 4).inhom():
            bad.append(("inhom", n))
    rep.exact("alpha recursion = (f, f)^4 / 2 (normalized)", not bad, residual=f"fails at {bad}")
    for kind in KLEIN_KINDS:
        f = klein_form(kind)
        t = fourth_transvectant_coeffs(f)
        rep.exact(f"fourth transvectant of the {kind} form vanishes", all(x == 0 for x in t.a),
                  residual=str(t), degree=f.degree)
    for n in (5, 6, 7):
        _, scalar = generalized_chazy_residue(n)
        expect = -n * n * (n - 1)
        rep.exact(f"generalized Chazy residue = ({expect}) x target, n = {n}", scalar == expect,
                  residual=f"scalar {scalar}")
    return rep
