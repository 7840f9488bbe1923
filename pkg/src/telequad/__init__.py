"""Endpoint-derivative quadrature generated by Bernoulli polynomials."""
from .bounds import (
    HolderPair,
    NormResult,
    asymptotic_estimate,
    composite_error_bound,
    distributional_bound,
    norm_exact,
    norm_numeric,
    panel_error_bound,
    scheme_norm,
    total_variation,
)
from .calculus import Integrand, differentiate, make_integrand, parse_expr
from .exactpoly import RationalPoly, bernoulli_number, bernoulli_poly
from .quad import Interval, QuadratureReport, composite_apply, euler_maclaurin, panel_apply
from .reference import reference_integral
from .scheme import SchemeSpec, Variant, endpoint_weights, is_telescoping, make_scheme, pn, qn

__all__ = [
    "HolderPair",
    "NormResult",
    "asymptotic_estimate",
    "composite_error_bound",
    "distributional_bound",
    "norm_exact",
    "norm_numeric",
    "panel_error_bound",
    "scheme_norm",
    "total_variation",
    "Integrand",
    "differentiate",
    "make_integrand",
    "parse_expr",
    "RationalPoly",
    "bernoulli_number",
    "bernoulli_poly",
    "Interval",
    "QuadratureReport",
    "composite_apply",
    "euler_maclaurin",
    "panel_apply",
    "reference_integral",
    "SchemeSpec",
    "Variant",
    "endpoint_weights",
    "is_telescoping",
    "make_scheme",
    "pn",
    "qn",
]

__version__ = "0.1.0"
