"""Multi-modular Cauchy interpolation over QQ and Q(zeta_N).

Exact Euclid swells coefficients badly. Instead, each sample
is reduced modulo primes p = 1 (mod N) at every root of Phi_N in F_p, the
interpolant is found over F_p, its coordinates are solved from the d images,
and the primes are combined by CRT and rational reconstruction. The result is
checked exactly at every sample point, which proves it under the degree bound.
"""
from __future__ import annotations

from fractions import Fraction
from math import isqrt

from sympy import isprime
from sympy.ntheory.modular import crt

from .cyclotomic import Cyclotomic, cyclotomic_polynomial

__all__ = ["rational_interpolate_modular", "rational_interpolate_cyclotomic"]

MAX_PRIMES = 60


# polynomials over F_p: int lists, low -> high, no trailing zeros
def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _sub(a, b, p):
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, y in enumerate(b):
        out[i] = (out[i] - y) % p
    return _trim(out)


def _mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % p for c in out])


def _divmod(a, b, p):
    a = list(a)
    q = [0] * max(0, len(a) - len(b) + 1)
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[i + k] = (a[i + k] - c * y) % p
        _trim(a)
    return _trim(q), a


def _gcd_degree(a, b, p) -> int:
    while b:
        a, b = b, _divmod(a, b, p)[1]
    return len(a) - 1


def _cauchy(xs, ys, num_deg, den_deg, p):
    """(A, B) over F_p with B monic, or None when no fit exists mod p."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            d = (xs[i] - xs[i - j]) % p
            if d == 0:
                return None
            coef[i] = (coef[i] - coef[i - 1]) * pow(d, -1, p) % p
    L = [coef[-1] % p]
    for i in range(n - 2, -1, -1):
        L = _sub(_mul(L, [-xs[i] % p, 1], p), [-coef[i] % p], p)
    M = [1]
    for x in xs:
        M = _mul(M, [-x % p, 1], p)
    r0, r1 = M, _trim(L)
    t0, t1 = [], [1]
    while len(r1) - 1 > num_deg:
        q, r = _divmod(r0, r1, p)
        r0, r1 = r1, r
        t0, t1 = t1, _sub(t0, _mul(q, t1, p), p)
    if not t1 or len(t1) - 1 > den_deg or _gcd_degree(M, t1, p) > 0:
        return None
    inv = pow(t1[-1], -1, p)
    return [c * inv % p for c in r1], [c * inv % p for c in t1]


# field data mod p
def _primes(N: int):
    p = (2**61 // N) * N + 1
    while True:
        p -= N
        if isprime(p):
            yield p


def _order_n_root(N: int, p: int) -> int:
    qs = [q for q in range(2, N + 1) if N % q == 0 and isprime(q)]
    for a in range(2, p):
        r = pow(a, (p - 1) // N, p)
        if all(pow(r, N // q, p) != 1 for q in qs):
            return r
    raise ArithmeticError("no root of unity of order N")


def _inverse_matrix(V, p):
    d = len(V)
    A = [list(row) + [int(i == j) for j in range(d)] for i, row in enumerate(V)]
    for c in range(d):
        piv = next(r for r in range(c, d) if A[r][c] % p)
        A[c], A[piv] = A[piv], A[c]
        inv = pow(A[c][c], -1, p)
        A[c] = [x * inv % p for x in A[c]]
        for r in range(d):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [(x - f * y) % p for x, y in zip(A[r], A[c])]
    return [row[d:] for row in A]


def _embeddings(N: int, p: int):
    """Images of zeta under the d embeddings into F_p, and the inverse Vandermonde."""
    if N == 1:
        return [1], [[1]]
    d = len(cyclotomic_polynomial(N)) - 1
    r = _order_n_root(N, p)
    roots = [pow(r, k, p) for k in range(1, N + 1) if _coprime(k, N)] if N > 1 else [1]
    V = [[pow(z, b, p) for b in range(d)] for z in roots]
    return roots, _inverse_matrix(V, p)


def _coprime(a, b):
    while b:
        a, b = b, a % b
    return a == 1


def _reduce(x, z: int, p: int):
    if isinstance(x, Fraction):
        num, den = (x.numerator,), x.denominator
    else:
        num, den = x._num, x._den
    if den % p == 0:
        return None
    v = 0
    for c in reversed(num):
        v = (v * z + c) % p
    return v * pow(den, -1, p) % p


def _ratrec(a: int, m: int):
    """n/d = a mod m with |n|, d <= sqrt(m/2), or None."""
    bound = isqrt(m // 2)
    r0, r1, s0, s1 = m, a % m, 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    f = Fraction(r1, s1)
    if (f.numerator - a * f.denominator) % m:
        return None
    return f


def rational_interpolate_modular(xs, ys, num_deg: int, den_deg: int, ring, var: str = "T"):
    """A/B over QQ or Q(zeta_N) through the points, or None when no such function exists.

    Returns the string "fallback" when the modular route cannot decide, so the
    caller can use field arithmetic instead.
    """
    from .poly import Poly, RatFun

    N = getattr(ring, "N", 1)
    xs = [ring.convert(x) for x in xs]
    ys = [ring.convert(y) for y in ys]
    pattern = None
    residues: list[list[int]] = []
    moduli: list[int] = []
    previous = None
    no_fit = 0
    for count, p in enumerate(_primes(N)):
        if count >= MAX_PRIMES:
            return "fallback"
        roots, Vinv = _embeddings(N, p)
        images = []
        for z in roots:
            X = [_reduce(x, z, p) for x in xs]
            Y = [_reduce(y, z, p) for y in ys]
            if None in X or None in Y:
                images = None
                break
            images.append(_cauchy(X, Y, num_deg, den_deg, p))
        if images is None:
            continue
        if any(im is None for im in images):
            no_fit += 1
            if no_fit >= 3 and not moduli:
                return None
            continue
        shape = {(len(A), len(B)) for A, B in images}
        if len(shape) != 1:
            continue
        shape = shape.pop()
        if pattern is None or sum(shape) > sum(pattern):
            pattern, residues, moduli, previous = shape, [], [], None
        elif shape != pattern:
            continue
        flat = [A + B[:-1] for A, B in images]
        coords = []
        for k in range(len(flat[0])):
            vals = [f[k] for f in flat]
            coords.extend(sum(Vinv[b][i] * vals[i] for i in range(len(vals))) % p for b in range(len(Vinv)))
        residues.append(coords)
        moduli.append(p)
        m = 1
        for q in moduli:
            m *= q
        lifted = []
        for j in range(len(coords)):
            a = int(crt(moduli, [r[j] for r in residues])[0])
            f = _ratrec(a, m)
            if f is None:
                break
            lifted.append(f)
        else:
            if lifted != previous:
                previous = lifted
                continue
            d = len(Vinv)
            nA, nB = pattern
            if N == 1:
                elems = lifted
            else:
                elems = [Cyclotomic(N, lifted[i * d:(i + 1) * d]) for i in range(nA + nB - 1)]
            A = Poly(elems[:nA] or [ring.zero], ring, var)
            B = Poly(elems[nA:] + [ring.one], ring, var)
            if all(B(x) != 0 and B(x) * y == A(x) for x, y in zip(xs, ys)):
                return RatFun(A, B)
            previous = None
    return "fallback"


rational_interpolate_cyclotomic = rational_interpolate_modular
