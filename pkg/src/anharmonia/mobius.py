"""Finite Möbius groups, their absolute invariants, fixed points and orbits."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .algebra import QQ, Cyclotomic, CyclotomicField, Poly, RatFun, cyc_embed
from .algebra.rings import Ring
from .errors import DegenerateInputError, WholeSphereFixed
from .report import Report

__all__ = [
    "INF",
    "MobiusMap",
    "FiniteMobiusGroup",
    "AbsoluteInvariant",
    "FixedPoints",
    "KINDS",
    "group_catalog",
    "invariant_psi",
    "verify_invariance",
    "fixed_points",
    "orbit",
    "cross_ratio",
    "conductor",
]

KINDS = ("cyclic", "dihedral", "tetrahedral", "octahedral", "icosahedral")
_ALIASES = {
    "cyc": "cyclic",
    "dih": "dihedral",
    "tetra": "tetrahedral",
    "tetr": "tetrahedral",
    "oct": "octahedral",
    "octa": "octahedral",
    "ico": "icosahedral",
    "icosa": "icosahedral",
}


class _Infinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "oo"

    def to_json(self):
        return "oo"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def canonical_kind(kind: str) -> str:
    k = _ALIASES.get(kind.lower(), kind.lower())
    if k not in KINDS:
        raise ValueError(f"unknown group kind {kind!r}; expected one of {', '.join(KINDS)}")
    return k


def conductor(kind: str, parameter: int | None = None) -> int:
    kind = canonical_kind(kind)
    if kind in ("cyclic", "dihedral"):
        return parameter
    return 12 if kind in ("tetrahedral", "octahedral") else 20


class MobiusMap:
    """z -> (a z + b)/(c z + d), scaled so the first nonzero entry is 1."""

    __slots__ = ("a", "b", "c", "d", "field", "label")

    def __init__(self, a, b, c, d, field: Ring, label: str | None = None):
        a, b, c, d = (field.convert(x) for x in (a, b, c, d))
        if a * d - b * c == 0:
            raise DegenerateInputError("Möbius map with zero determinant")
        lead = next(x for x in (a, b, c, d) if x != 0)
        if lead != 1:
            inv = field.one / lead
            a, b, c, d = a * inv, b * inv, c * inv, d * inv
        self.a, self.b, self.c, self.d = a, b, c, d
        self.field = field
        self.label = label

    @classmethod
    def identity(cls, field: Ring) -> "MobiusMap":
        return cls(1, 0, 0, 1, field, "id")

    @property
    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def key(self):
        return tuple(_key(x) for x in self.entries)

    def __eq__(self, other):
        return isinstance(other, MobiusMap) and self.entries == other.entries

    def __hash__(self):
        return hash(self.key())

    def det(self):
        return self.a * self.d - self.b * self.c

    def __call__(self, z):
        a, b, c, d = self.entries
        if z is INF:
            return INF if c == 0 else a / c
        den = c * z + d
        if den == 0:
            return INF
        return (a * z + b) / den

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """self ∘ other."""
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return MobiusMap(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h, self.field)

    __matmul__ = compose

    def inverse(self) -> "MobiusMap":
        return MobiusMap(self.d, -self.b, -self.c, self.a, self.field)

    def __pow__(self, k: int) -> "MobiusMap":
        if k < 0:
            return self.inverse() ** (-k)
        out = MobiusMap.identity(self.field)
        for _ in range(k):
            out = out @ self
        return out

    def is_identity(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d

    def order(self, limit: int = 120) -> int | None:
        g = self
        for k in range(1, limit + 1):
            if g.is_identity():
                return k
            g = g @ self
        return None

    def numeric(self, precision: int = 30):
        return tuple(cyc_embed(_as_cyc(x, self.field), precision) for x in self.entries)

    def to_json(self) -> dict:
        return {"label": self.label, "entries": [_point_json(x) for x in self.entries]}

    def __repr__(self):
        name = f"{self.label}: " if self.label else ""
        return f"MobiusMap({name}({self.a})z + ({self.b}) / ({self.c})z + ({self.d}))"


def _key(x):
    if isinstance(x, Cyclotomic):
        return x.coords + (x.N,) if not x.is_rational() else (x.to_fraction(),)
    return (x,)


def _as_cyc(x, field):
    if isinstance(x, Cyclotomic):
        return x
    N = getattr(field, "N", 1)
    return Cyclotomic.from_rational(N, Fraction(x))


def _point_json(x):
    if x is INF:
        return "oo"
    if isinstance(x, Cyclotomic):
        return str(x.to_fraction()) if x.is_rational() else x.to_json()
    return str(x)


@dataclass
class FiniteMobiusGroup:
    kind: str
    parameter: int | None
    generators: list
    field: Ring
    _elements: list | None = field(default=None, repr=False)

    @property
    def name(self) -> str:
        return f"{self.kind}({self.parameter})" if self.parameter else self.kind

    @property
    def elements(self) -> list:
        if self._elements is None:
            ident = MobiusMap.identity(self.field)
            seen = {ident: None}
            frontier = [ident]
            while frontier:
                nxt = []
                for g in frontier:
                    for h in self.generators:
                        k = h @ g
                        if k not in seen:
                            seen[k] = None
                            nxt.append(k)
                            if len(seen) > 240:
                                raise RuntimeError(f"{self.name} does not close to a finite group")
                frontier = nxt
            self._elements = list(seen)
        return self._elements

    @property
    def order(self) -> int:
        return len(self.elements)

    def elements_of_order(self, p: int) -> list:
        return [g for g in self.elements if g.order() == p]

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return self.order


def _zeta_field(N):
    F = CyclotomicField(N)
    return F, (lambda k=1: F.gen(k))


@lru_cache(maxsize=None)
def group_catalog(kind: str, parameter: int | None = None) -> FiniteMobiusGroup:
    """The generator lists of the five families."""
    kind = canonical_kind(kind)
    if kind in ("cyclic", "dihedral"):
        if parameter is None or parameter < 2:
            raise ValueError(f"{kind} groups need an integer parameter >= 2")
        F, z = _zeta_field(parameter)
        theta = MobiusMap(z(), 0, 0, 1, F, f"Theta_{parameter}")
        gens = [theta]
        if kind == "dihedral":
            gens.append(MobiusMap(0, 1, 1, 0, F, "eps0"))
        return FiniteMobiusGroup(kind, parameter, gens, F)
    if kind == "tetrahedral":
        F, z = _zeta_field(12)
        i = z(3)
        w = (1 - i) / (1 + i)
        gens = [
            MobiusMap(-1, 0, 0, 1, F, "Theta_2"),
            MobiusMap(0, 1, 1, 0, F, "eps0"),
            MobiusMap(w, w, 1, -1, F, "theta_1"),
        ]
        return FiniteMobiusGroup(kind, None, gens, F)
    if kind == "octahedral":
        F, z = _zeta_field(12)
        i = z(3)
        w = (1 - i) / (1 + i)
        gens = [
            MobiusMap(w, w, 1, -1, F, "theta_1"),
            MobiusMap(w, 0, 0, 1, F, "theta_2"),
        ]
        return FiniteMobiusGroup(kind, None, gens, F)
    F, z = _zeta_field(20)
    xi = z(4)
    sqrt5 = 1 + 2 * (xi + xi**4)
    alpha = (xi**4 - xi) / sqrt5
    beta = (xi**2 - xi**3) / sqrt5
    gens = [
        MobiusMap(xi, 0, 0, 1, F, "Theta_5"),
        MobiusMap(0, -1, 1, 0, F, "eps0"),
        MobiusMap(alpha, beta, beta, -alpha, F, "eps1"),
    ]
    return FiniteMobiusGroup(kind, None, gens, F)


def literal_icosahedral_eps0() -> MobiusMap:
    """z -> 1/z in the icosahedral field; kept for the invariance diagnostic."""
    return MobiusMap(0, 1, 1, 0, CyclotomicField(20), "eps0 (z -> 1/z)")


# ---------------------------------------------------------------------------
# absolute invariants
# ---------------------------------------------------------------------------
@dataclass
class AbsoluteInvariant:
    """Psi = psi/phi, with each of psi and phi also kept as a product of powers."""

    kind: str
    parameter: int | None
    psi: Poly
    phi: Poly
    psi_factors: tuple = ()
    phi_factors: tuple = ()

    @property
    def degree(self) -> int:
        return max(self.psi.degree, self.phi.degree)

    @property
    def ring(self):
        return self.psi.ring

    @property
    def ratfun(self) -> RatFun:
        return RatFun(self.psi, self.phi)

    def __call__(self, z):
        if z is INF:
            if self.psi.degree > self.phi.degree:
                return INF
            if self.psi.degree < self.phi.degree:
                return self.ring.zero
            return self.psi.lc / self.phi.lc
        den = self.phi(z)
        if den == 0:
            return INF
        return self.psi(z) / den

    def hom(self, which: str, X, Y):
        """Degree-N homogenization of psi or phi evaluated at (X, Y), using the factored form."""
        factors = self.psi_factors if which == "psi" else self.phi_factors
        poly = self.psi if which == "psi" else self.phi
        N = self.degree
        if not factors:
            return poly.homogeneous_eval(X, Y, N)
        used = sum(f.degree * e for c, f, e in factors if f is not None)
        total = None
        for c, f, e in factors:
            if f is None:
                term = c
            else:
                term = f.homogeneous_eval(X, Y) ** e
                if c != 1:
                    term = term * c
            total = term if total is None else total * term
        if N > used:
            total = total * Y ** (N - used)
        return total

    def to_json(self) -> dict:
        from .algebra import poly_to_json

        return {
            "kind": self.kind,
            "parameter": self.parameter,
            "psi": poly_to_json(self.psi),
            "phi": poly_to_json(self.phi),
            "degree": self.degree,
        }


def _expand(factors, ring, var):
    out = Poly.const(1, ring, var)
    for c, f, e in factors:
        out = out * (c if f is None else f**e)
    return out


@lru_cache(maxsize=None)
def invariant_psi(kind: str, parameter: int | None = None, var: str = "z") -> AbsoluteInvariant:
    kind = canonical_kind(kind)
    Q = QQ
    if kind in ("cyclic", "dihedral") and (parameter is None or parameter < 2):
        raise ValueError(f"{kind} invariants need an integer parameter >= 2")
    z = Poly.gen(Q, var)
    if kind == "cyclic":
        psi_f = ((1, z, parameter),)
        phi_f = ((1, None, 1),)
        ring = Q
    elif kind == "dihedral":
        m = parameter
        psi_f = ((1, z ** (2 * m) + 1, 1),)
        phi_f = ((1, z, m),)
        ring = Q
    elif kind == "tetrahedral":
        ring = CyclotomicField(12)
        zz = Poly.gen(ring, var)
        zeta = ring.gen()
        i_sqrt3 = zeta**3 * (zeta + zeta**11)
        A = zz**4 + 1 + 2 * i_sqrt3 * zz**2
        B = zz**4 + 1 - 2 * i_sqrt3 * zz**2
        psi_f = ((1, A, 3),)
        phi_f = ((1, B, 3),)
    elif kind == "octahedral":
        ring = Q
        psi_f = ((1, 1 + 14 * z**4 + z**8, 3),)
        phi_f = ((108, None, 1), (1, z, 4), (1, 1 - z**4, 4))
    else:
        ring = Q
        psi_f = ((1, -(z**20 + 1) + 228 * (z**15 - z**5) - 494 * z**10, 3),)
        phi_f = ((1728, None, 1), (1, z, 5), (1, z**10 + 11 * z**5 - 1, 5))
    psi = _expand(psi_f, ring, var)
    phi = _expand(phi_f, ring, var)
    return AbsoluteInvariant(kind, parameter, psi, phi, psi_f, phi_f)


def _sample_points(n):
    # 0, 1, -1, 2, -2, ...
    out = [Fraction(0)]
    k = 1
    while len(out) < n:
        out.append(Fraction(k))
        if len(out) < n:
            out.append(Fraction(-k))
        k += 1
    return out


def invariant_under(inv: AbsoluteInvariant, g: MobiusMap):
    """Exact test of Psi(g z) = Psi(z).

    G(z) = psi_h(az+b, cz+d) phi(z) - phi_h(az+b, cz+d) psi(z) has degree at most
    2N, so vanishing at 2N+1 points proves the identity.  Returns the first
    sample point where G is nonzero, or None.
    """
    a, b, c, d = g.entries
    N = inv.degree
    for z in _sample_points(2 * N + 1):
        X = a * z + b
        Y = c * z + d
        ps, ph = inv.psi(z), inv.phi(z)
        lhs = inv.hom("psi", X, Y) * ph
        rhs = inv.hom("phi", X, Y) * ps
        if lhs != rhs:
            return z
    return None


def verify_invariance(group: FiniteMobiusGroup, invariant: AbsoluteInvariant | None = None,
                      all_elements: bool = False, extra=()) -> Report:
    """Psi∘g = Psi for each generator (or every element) as an exact identity."""
    if invariant is None:
        invariant = invariant_psi(group.kind, group.parameter)
    if invariant.kind != group.kind or invariant.parameter != group.parameter:
        raise ValueError("group and invariant kinds differ")
    rep = Report(f"mobius.invariance.{group.name}")
    maps = list(group.generators) + list(extra)
    for g in maps:
        bad = invariant_under(invariant, g)
        rep.exact(f"generator {g.label}", bad is None, residual=f"nonzero at z={bad}")
    if all_elements:
        failures = []
        for idx, g in enumerate(group.elements):
            if invariant_under(invariant, g) is not None:
                failures.append(idx)
        rep.exact(
            "every element",
            not failures,
            residual=f"{len(failures)} failing elements",
            group_order=group.order,
        )
    return rep


# ---------------------------------------------------------------------------
# fixed points, orbits, cross-ratio
# ---------------------------------------------------------------------------
@dataclass
class FixedPoints:
    points: list | None
    numeric: list
    discriminant: object
    exact: bool
    extension: str | None = None

    def __iter__(self):
        return iter(self.points if self.points is not None else self.numeric)

    def __len__(self):
        return len(self.points if self.points is not None else self.numeric)

    def to_json(self) -> dict:
        return {
            "exact": self.exact,
            "points": None if self.points is None else [_point_json(p) for p in self.points],
            "numeric": [
                "oo" if p is INF else [float(p.real), float(p.imag)] for p in self.numeric
            ],
            "extension": self.extension,
        }


def _num(x, field, precision):
    import mpmath

    if x is INF:
        return INF
    if isinstance(x, Cyclotomic):
        return cyc_embed(x, precision)
    return mpmath.mpc(mpmath.mpf(Fraction(x).numerator) / Fraction(x).denominator)


def fixed_points(g: MobiusMap, precision: int = 30) -> FixedPoints:
    """Roots of c x^2 + (d - a) x - b = 0, with infinity when c = 0."""
    import mpmath

    a, b, c, d = g.entries
    F = g.field
    if g.is_identity():
        raise WholeSphereFixed("the identity fixes every point")
    if c == 0:
        if d == a:
            pts = [INF]
        else:
            pts = [b / (d - a), INF]
        return FixedPoints(pts, [_num(p, F, precision) for p in pts], None, True)
    disc = (d - a) ** 2 + 4 * b * c
    root = disc.sqrt() if isinstance(disc, Cyclotomic) else _frac_sqrt(disc)
    if root is not None:
        pts = [(a - d + root) / (2 * c)]
        if root != 0:
            pts.append((a - d - root) / (2 * c))
        return FixedPoints(pts, [_num(p, F, precision) for p in pts], disc, True)
    with mpmath.workdps(precision + 10):
        A, B, C, D = (_num(x, F, precision + 10) for x in (a, b, c, d))
        s = mpmath.sqrt(_num(disc, F, precision + 10))
        approx = [(A - D + s) / (2 * C), (A - D - s) / (2 * C)]
    return FixedPoints(None, approx, disc, False, extension=f"sqrt({disc})")


def _frac_sqrt(x):
    x = Fraction(x)
    if x < 0:
        return None
    from math import isqrt

    n, d = isqrt(x.numerator), isqrt(x.denominator)
    return Fraction(n, d) if n * n == x.numerator and d * d == x.denominator else None


def orbit(point, group: FiniteMobiusGroup) -> list:
    """Distinct images of ``point`` under the group, in element order."""
    if point is not INF:
        point = group.field.convert(point)
    seen = {}
    for g in group.elements:
        seen.setdefault(g(point), None)
    return list(seen)


def stabilizer(point, group: FiniteMobiusGroup) -> list:
    if point is not INF:
        point = group.field.convert(point)
    return [g for g in group.elements if g(point) == point]


def cross_ratio(u1, u2, u3, u4):
    """(u1-u3)(u2-u4) / ((u2-u3)(u1-u4)); factors involving infinity are dropped."""
    pts = (u1, u2, u3, u4)
    if _same(u1, u2) or _same(u3, u4):
        raise DegenerateInputError("cross-ratio with a repeated pair")

    def diff(x, y):
        return None if x is INF or y is INF else x - y

    num = [diff(u1, u3), diff(u2, u4)]
    den = [diff(u2, u3), diff(u1, u4)]
    nv = _prod(f for f in num if f is not None)
    dv = _prod(f for f in den if f is not None)
    if dv == 0:
        if nv == 0:
            raise DegenerateInputError(f"cross-ratio of {pts} is 0/0")
        return INF
    return nv / dv


def _same(x, y):
    if x is INF or y is INF:
        return x is y
    return x == y


def _prod(it):
    out = 1
    for x in it:
        out = x * out
    return out
