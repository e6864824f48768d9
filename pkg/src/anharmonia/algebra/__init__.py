"""Exact arithmetic: cyclotomic numbers, polynomials, rational functions."""
from .cyclotomic import Cyclotomic, cyc_embed, cyclotomic_polynomial, euler_phi
from .poly import (
    FunctionField,
    Poly,
    PolynomialRing,
    RatFun,
    bareiss_det,
    poly_from_json,
    poly_gcd,
    poly_pth_root,
    poly_resultant,
    poly_to_json,
    poly_xgcd,
    ratfun_derivative,
    sylvester_matrix,
)
from .rings import QQ, CyclotomicField, Ring, SympyDomain, exquo, parse_scalar

__all__ = [
    "Cyclotomic",
    "cyc_embed",
    "cyclotomic_polynomial",
    "euler_phi",
    "FunctionField",
    "Poly",
    "PolynomialRing",
    "RatFun",
    "bareiss_det",
    "poly_from_json",
    "poly_gcd",
    "poly_pth_root",
    "poly_resultant",
    "poly_to_json",
    "poly_xgcd",
    "ratfun_derivative",
    "sylvester_matrix",
    "QQ",
    "CyclotomicField",
    "Ring",
    "SympyDomain",
    "exquo",
    "parse_scalar",
]

from .quotient import QElem, QuotientRing, interpolate, rational_interpolate  # noqa: E402

__all__ += ["QElem", "QuotientRing", "interpolate", "rational_interpolate"]
