"""Exact checks of the modular dynamical systems.

Series identities are stated with D = q d/dq.  A tau-derivative is 2 pi i D,
and every weight-w quantity is divided by pi^w ("hatted"), so all checks are
over QQ:

* e_i = pi^2 e_hat_i, d/dtau = 2 pi i D turns the e-Riccati into
  2 D e_hat = -e_hat^2 + E2 e_hat / 3 + 2 E4 / 9;
* t = 4 i tau / pi and X = pi^2 X_hat turn d/dt into (pi^2 / 2) D, giving
  D(X_hat_i + X_hat_j) / 2 = X_hat_i X_hat_j.
"""
from __future__ import annotations

from fractions import Fraction

from .qseries import FracSeries, eisenstein, registry, sigma
from .report import Report

__all__ = [
    "verify_eisenstein",
    "verify_ramanujan",
    "verify_vieta",
    "verify_e_riccati",
    "verify_chazy_series",
    "verify_hatted_halphen",
    "lambda_parameterization_check",
    "cubic_dh_identity",
    "s4_s3_equivalence",
    "degenerate_solutions_check",
    "chazy_j_exploratory",
    "verify_modular",
]


def _cmp(rep: Report, name: str, lhs: FracSeries, rhs, order: int, **details):
    """Exact comparison to q-order ``order`` (exclusive); residual names the first mismatch."""
    k = lhs.truncate(_sprec(lhs, order)).first_difference(rhs)
    res = None if k is None else f"first mismatch at q^({Fraction(k, max(lhs.r, getattr(rhs, 'r', 1)))})"
    return rep.exact(name, k is None, residual=res, order=order, **details)


def _sprec(s: FracSeries, order: int) -> int:
    return order * s.r


# ---------------------------------------------------------------------------
# Eisenstein and Ramanujan
# ---------------------------------------------------------------------------
def verify_eisenstein(order: int = 64) -> Report:
    rep = Report("halphen.eisenstein")
    E2 = eisenstein(2, order)
    rep.exact("E2 = 1 - 24q - 72q^2 - 96q^3 - 168q^4 + ...",
              [E2[k] for k in range(5)] == [1, -24, -72, -96, -168], residual=str(E2.truncate(5)))
    for k, c in ((2, -24), (4, 240), (6, -504)):
        E = eisenstein(k, order)
        target = [1] + [c * sigma(k - 1, m) for m in range(1, order)]
        bad = next((m for m in range(order) if E[m] != target[m]), None)
        rep.exact(f"E{k} = 1 + ({c}) sum sigma_{k - 1}(n) q^n", bad is None,
                  residual=f"first mismatch at q^{bad}", order=order)
    return rep


def verify_ramanujan(order: int = 64, E6: FracSeries | None = None) -> Report:
    """D E2 = (E2^2 - E4)/12, D E4 = (E2 E4 - E6)/3, D E6 = (E2 E6 - E4^2)/2."""
    if order < 4:
        raise ValueError("order must be at least 4")
    R = registry(order)
    E2, E4 = R.E2, R.E4
    E6 = R.E6 if E6 is None else E6
    rep = Report("halphen.ramanujan")
    _cmp(rep, "D E2 = (E2^2 - E4)/12", E2.D(), (E2 * E2 - E4) / 12, order)
    _cmp(rep, "D E4 = (E2 E4 - E6)/3", E4.D(), (E2 * E4 - E6) / 3, order)
    _cmp(rep, "D E6 = (E2 E6 - E4^2)/2", E6.D(), (E2 * E6 - E4 * E4) / 2, order)
    return rep


# ---------------------------------------------------------------------------
# e-values
# ---------------------------------------------------------------------------
def _e_hats(order, override=None):
    R = registry(order)
    e = dict(R.e_hat)
    if override:
        e.update(override)
    return R, e


def verify_vieta(order: int = 32) -> Report:
    """sum e = 0, sum e_i e_j = -E4/3, prod e = 2 E6/27 (hatted)."""
    R, e = _e_hats(order)
    rep = Report("halphen.vieta")
    E4, E6 = R.E4, R.E6
    _cmp(rep, "e1 + e2 + e3 = 0", e[1] + e[2] + e[3], 0, order)
    _cmp(rep, "e1 e2 + e1 e3 + e2 e3 = -E4/3", e[1] * e[2] + e[1] * e[3] + e[2] * e[3], E4 * Fraction(-1, 3), order)
    _cmp(rep, "e1 e2 e3 = 2 E6/27", e[1] * e[2] * e[3], E6 * Fraction(2, 27), order)
    return rep


def verify_e_riccati(order: int = 32, override=None) -> Report:
    """2 D e_i = -e_i^2 + E2 e_i / 3 + 2 E4 / 9 for i = 1, 2, 3."""
    if order < 4:
        raise ValueError("order must be at least 4")
    R, e = _e_hats(order, override)
    rep = Report("halphen.e_riccati")
    for i in (1, 2, 3):
        lhs = e[i].D() * 2
        rhs = -e[i] * e[i] + R.E2 * e[i] / 3 + R.E4 * Fraction(2, 9)
        _cmp(rep, f"2 D e{i} = -e{i}^2 + E2 e{i}/3 + 2 E4/9", lhs, rhs, order)
    return rep


# ---------------------------------------------------------------------------
# Chazy and Halphen
# ---------------------------------------------------------------------------
def verify_chazy_series(order: int = 40, scale=Fraction(1, 6)) -> Report:
    """h = scale * E2 satisfies D^3 h = 6 h D^2 h - 9 (D h)^2 (scale = 1/6 is the solution)."""
    if order < 6:
        raise ValueError("order must be at least 6")
    h = registry(order).E2 * Fraction(scale)
    d1 = h.D()
    d2 = d1.D()
    d3 = d2.D()
    rep = Report("halphen.chazy")
    _cmp(rep, f"D^3 h = 6 h D^2 h - 9 (D h)^2, h = ({scale}) E2", d3, h * d2 * 6 - d1 * d1 * 9, order,
         sign_note="gamma = -E2/6 solves the same equation with tau reversed")
    return rep


def halphen_X(order: int, override=None) -> dict:
    R, e = _e_hats(order, override)
    return {k: R.E2.ramify(2) / 12 + e[k] / 4 for k in (1, 2, 3)}


def verify_hatted_halphen(order: int = 32, override=None) -> Report:
    """D(X_i + X_j)/2 = X_i X_j with X_k = E2/12 + e_k/4."""
    if order < 4:
        raise ValueError("order must be at least 4")
    X = halphen_X(order, override)
    rep = Report("halphen.hatted_halphen")
    for i, j in ((1, 2), (2, 3), (3, 1)):
        _cmp(rep, f"D(X{i} + X{j})/2 = X{i} X{j}", (X[i] + X[j]).D() / 2, X[i] * X[j], order)
    rep.exact("constant terms of X are (1/4, 0, 0)", [X[k][0] for k in (1, 2, 3)] == [Fraction(1, 4), 0, 0],
              residual=str([X[k][0] for k in (1, 2, 3)]))
    return rep


def lambda_w(order: int, swap: bool = False) -> dict:
    """w_1 = -D log(D lam / lam)/2, w_2 = -D log(D lam/(lam - 1))/2, w_3 = -D log(D lam/(lam(lam - 1)))/2."""
    lam = registry(order).lam
    dl = lam.D()
    lm1 = lam - 1
    w = {
        1: -(dl / lam).dlog() / 2,
        2: -(dl / lm1).dlog() / 2,
        3: -(dl / (lam * lm1)).dlog() / 2,
    }
    if swap:  # lam - 1 in the wrong slot
        w[1] = -(dl / lm1).dlog() / 2
    return w


def lambda_parameterization_check(order: int = 24, swap: bool = False) -> Report:
    if order < 4:
        raise ValueError("order must be at least 4")
    w = lambda_w(order, swap)
    rep = Report("halphen.lambda_dh" + (".swapped" if swap else ""))
    for a, b, c in ((1, 2, 3), (2, 1, 3), (3, 1, 2)):
        lhs = w[a].D()
        rhs = -w[a] * (w[b] + w[c]) + w[b] * w[c]
        k = lhs.first_difference(rhs)
        rep.exact(f"D w{a} = -w{a}(w{b} + w{c}) + w{b} w{c}", k is None,
                  residual=f"first mismatch at s^{k}", order=order, s_precision=min(lhs.prec, rhs.prec))
    return rep


def chazy_j_exploratory(order: int = 16) -> Report:
    """Exploratory: h = D log((DJ)^6 / (J^4 (J - 1)^3)) / 6 against E2/6, J = E4^3/(E4^3 - E6^2)."""
    R = registry(order + 2)
    E4, E6 = R.E4, R.E6
    J = E4**3 / (E4**3 - E6 * E6)
    h = ((J.D()).dlog() * 6 - J.dlog() * 4 - (J - 1).dlog() * 3) / 6
    rep = Report("halphen.chazy_J (exploratory)")
    target = R.E2 / 6
    k_plus = h.truncate(order).first_difference(target)
    k_minus = h.truncate(order).first_difference(-target)
    ok = k_plus is None or k_minus is None
    rep.exact("D log((DJ)^6/(J^4 (J-1)^3))/6 = +-E2/6", ok, residual=f"mismatch at q^{k_plus}",
              sign="+" if k_plus is None else "-" if k_minus is None else None, exploratory=True)
    return rep


# ---------------------------------------------------------------------------
# symbolic identities
# ---------------------------------------------------------------------------
def cubic_dh_identity(use_chazy: bool = True) -> Report:
    """Roots of w^3 + (3/2) g w^2 + (3/2) g' w + g''/4 solve the Darboux-Halphen system.

    The derivatives of the Vieta relations give a linear system for the w_i';
    g''' is replaced through Chazy, g''' = 6 g g'' - 9 g'^2, and Cramer's rule
    recovers w_i' = -w_i (w_j + w_k) + w_j w_k.
    """
    import sympy

    w1, w2, w3, G3 = sympy.symbols("w1 w2 w3 G3")
    w = (w1, w2, w3)
    e1, e2, e3 = w1 + w2 + w3, w1 * w2 + w1 * w3 + w2 * w3, w1 * w2 * w3
    g = -sympy.Rational(2, 3) * e1
    g1 = sympy.Rational(2, 3) * e2
    g2 = -4 * e3
    g3 = 6 * g * g2 - 9 * g1**2 if use_chazy else G3
    d = sympy.symbols("d1 d2 d3")
    eqs = [
        sum(d) + sympy.Rational(3, 2) * g1,
        d[0] * (w2 + w3) + d[1] * (w1 + w3) + d[2] * (w1 + w2) - sympy.Rational(3, 2) * g2,
        d[0] * w2 * w3 + d[1] * w1 * w3 + d[2] * w1 * w2 + sympy.Rational(1, 4) * g3,
    ]
    A, b = sympy.linear_eq_to_matrix(eqs, d)
    det = sympy.factor(A.det())
    rep = Report("halphen.cubic_dh" + ("" if use_chazy else ".no_chazy"))
    rep.exact("Cramer determinant is +-(w1-w2)(w1-w3)(w2-w3)",
              sympy.simplify(det**2 - ((w1 - w2) * (w1 - w3) * (w2 - w3)) ** 2) == 0, residual=str(det))
    sol = []
    for i in range(3):
        Ai = A.copy()
        Ai[:, i] = b
        sol.append(sympy.cancel(Ai.det() / det))
    for i in range(3):
        j, k = [x for x in range(3) if x != i]
        target = -w[i] * (w[j] + w[k]) + w[j] * w[k]
        r = sympy.cancel(sol[i] - target)
        rep.exact(f"w{i + 1}' = -w{i + 1}(w{j + 1} + w{k + 1}) + w{j + 1} w{k + 1}", r == 0, residual=str(r)[:200])
    return rep


def s4_s3_equivalence() -> Report:
    """The Halphen X-system implies the x, y, z system under the symmetric substitutions.

    X = -2w maps the X-system to Darboux-Halphen.
    """
    import sympy

    X1, X2, X3 = X = sympy.symbols("X1 X2 X3")
    # d/dt (X_i + X_j) = X_i X_j solved for each dX_k
    dX = {
        X1: (X1 * X2 + X3 * X1 - X2 * X3) / 2,
        X2: (X1 * X2 + X2 * X3 - X3 * X1) / 2,
        X3: (X2 * X3 + X3 * X1 - X1 * X2) / 2,
    }

    def ddt(f):
        return sum(sympy.diff(f, v) * dX[v] for v in X)

    x = (X1 + X2 + X3) / 3
    y = sympy.Rational(4, 3) * (X1**2 + X2**2 + X3**2 - X1 * X2 - X2 * X3 - X3 * X1)
    z = sympy.Rational(4, 27) * (2 * X1 - X2 - X3) * (2 * X2 - X3 - X1) * (2 * X3 - X1 - X2)
    rep = Report("halphen.s4_s3")
    for name, lhs, rhs in (
        ("dx/dt = x^2/2 - y/24", ddt(x), x**2 / 2 - y / 24),
        ("dy/dt = 2xy - 3z", ddt(y), 2 * x * y - 3 * z),
        ("dz/dt = 3xz - y^2/6", ddt(z), 3 * x * z - y**2 / 6),
    ):
        r = sympy.expand(lhs - rhs)
        rep.exact(name, r == 0, residual=str(r)[:200])
    w1, w2, w3 = sympy.symbols("w1 w2 w3")
    dw = [-w1 * (w2 + w3) + w2 * w3, -w2 * (w1 + w3) + w1 * w3, -w3 * (w1 + w2) + w1 * w2]
    sub = {X1: -2 * w1, X2: -2 * w2, X3: -2 * w3}
    ok = True
    for i, j in ((0, 1), (1, 2), (2, 0)):
        lhs = -2 * (dw[i] + dw[j])
        rhs = (X[i] * X[j]).subs(sub)
        ok = ok and sympy.expand(lhs - rhs) == 0
    rep.exact("X_i = -2 w_i maps the X-system to Darboux-Halphen", ok)
    return rep


def degenerate_solutions_check() -> Report:
    """Closed-form solutions: all-equal, two-equal, and the rational Chazy solution."""
    import sympy

    tau, tau0, a, c, d = sympy.symbols("tau tau0 a c d")

    def dh_residuals(w):
        out = []
        for i in range(3):
            j, k = [x for x in range(3) if x != i]
            out.append(sympy.cancel(sympy.diff(w[i], tau) - (-w[i] * (w[j] + w[k]) + w[j] * w[k])))
        return out

    rep = Report("halphen.degenerate")
    w = 1 / (tau - tau0)
    r = dh_residuals([w, w, w])
    rep.exact("w1 = w2 = w3 = 1/(tau - tau0)", all(x == 0 for x in r), residual=str(r))
    L = c * tau + d
    two = [c / L - a / L**2, c / L, c / L]
    r = dh_residuals(two)
    rep.exact("w2 = w3 = c/(c tau + d), w1 = c/(c tau + d) - a/(c tau + d)^2", all(x == 0 for x in r), residual=str(r))
    g = -2 * c / L + sympy.Rational(2, 3) * a / L**2
    chazy = sympy.cancel(sympy.diff(g, tau, 3) - 6 * g * sympy.diff(g, tau, 2) + 9 * sympy.diff(g, tau) ** 2)
    rep.exact("gamma = -2c/(c tau + d) + (2/3) a/(c tau + d)^2 solves Chazy", chazy == 0, residual=str(chazy))
    rep.exact("gamma = -(2/3)(w1 + w2 + w3) on the two-equal family", sympy.cancel(g + sympy.Rational(2, 3) * sum(two)) == 0)
    return rep


def verify_modular(order: int = 32) -> Report:
    """Every series identity at one order (Ramanujan at max(order, 64))."""
    rep = Report(f"modular.order{order}")
    rep.extend(verify_eisenstein(max(order, 64)))
    rep.extend(verify_ramanujan(max(order, 64)))
    rep.extend(verify_vieta(order))
    rep.extend(verify_e_riccati(order))
    rep.extend(verify_chazy_series(max(order, 40)))
    rep.extend(verify_hatted_halphen(order))
    rep.extend(lambda_parameterization_check(min(order, 24)))
    return rep
