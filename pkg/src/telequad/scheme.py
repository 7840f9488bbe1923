"""Telescoping polynomials and the endpoint schemes they generate.

A degree-n polynomial ``p`` with leading coefficient ``1/n!`` generates the
single-panel rule

    I(p, f) = sum_k (-1)^k (b-a)^(k+1) [p^(n-1-k)(1) f^(k)(b) - p^(n-1-k)(0) f^(k)(a)]

for k = 0..n-1. When ``p^(l)(0) == p^(l)(1)`` for l <= n-2 the derivative
terms cancel between neighbouring panels of a composite rule, and the only
such polynomials are ``B_n(x)/n! + c``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import DegenerateInterval, WrongLeadingCoefficient
from .exactpoly import (
    RationalPoly,
    bernoulli_number,
    bernoulli_poly,
    format_rational,
    poly_derivative,
    poly_eval,
)

__all__ = [
    "Variant",
    "SchemeSpec",
    "WeightTable",
    "is_telescoping",
    "make_scheme",
    "pn",
    "qn",
    "endpoint_weights",
    "scheme_weights",
]


class Variant(str, enum.Enum):
    PN = "pn"
    QN = "qn"
    CUSTOM = "custom"


def _check_normalized(p: RationalPoly) -> int:
    n = p.degree
    if n < 1:
        raise WrongLeadingCoefficient(f"need degree >= 1, got {n}")
    if p.leading != Fraction(1, factorial(n)):
        raise WrongLeadingCoefficient(
            f"leading coefficient {format_rational(p.leading)} != 1/{n}!"
        )
    return n


def is_telescoping(p: RationalPoly) -> bool:
    """True iff ``p^(l)(0) == p^(l)(1)`` for 0 <= l <= n-2 (exact)."""
    n = _check_normalized(p)
    d = p
    for _ in range(n - 1):
        if poly_eval(d, 0) != poly_eval(d, 1):
            return False
        d = poly_derivative(d)
    return True


@dataclass(frozen=True)
class SchemeSpec:
    degree: int
    constant: Fraction
    poly: RationalPoly
    variant: Variant

    @property
    def c(self) -> Fraction:
        return self.constant

    @property
    def is_pn(self) -> bool:
        return self.constant == 0

    @property
    def is_qn(self) -> bool:
        return self.constant == -bernoulli_number(self.degree) / factorial(self.degree)

    def summary(self) -> dict:
        return {
            "degree": self.degree,
            "c": format_rational(self.constant),
            "variant": self.variant.value,
        }


def make_scheme(n: int, c: Fraction | int | str = 0) -> SchemeSpec:
    """The scheme generated by ``B_n(x)/n! + c``.

    The variant tag is inferred from ``c``; when ``B_n == 0`` the two
    distinguished choices coincide and the tag is ``PN``.
    """
    if n < 1:
        raise ValueError(f"degree must be >= 1, got {n}")
    c = Fraction(c)
    poly = bernoulli_poly(n) / factorial(n) + c
    if c == 0:
        variant = Variant.PN
    elif c == -bernoulli_number(n) / factorial(n):
        variant = Variant.QN
    else:
        variant = Variant.CUSTOM
    return SchemeSpec(degree=n, constant=c, poly=poly, variant=variant)


def pn(n: int) -> SchemeSpec:
    return make_scheme(n, 0)


def qn(n: int) -> SchemeSpec:
    return make_scheme(n, -bernoulli_number(n) / factorial(n))


@dataclass(frozen=True)
class WeightTable:
    """Weights ``w_a[k]``, ``w_b[k]`` multiplying ``f^(k)(a)`` and ``f^(k)(b)``."""

    degree: int
    constant: Fraction
    width: Fraction
    w_a: tuple[Fraction, ...]
    w_b: tuple[Fraction, ...]

    def as_floats(self) -> tuple[tuple[float, ...], tuple[float, ...]]:
        return tuple(map(float, self.w_a)), tuple(map(float, self.w_b))

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "c": format_rational(self.constant),
            "f_weights": [
                [k, float(wa), float(wb), format_rational(wa), format_rational(wb)]
                for k, (wa, wb) in enumerate(zip(self.w_a, self.w_b))
            ],
        }


def scheme_weights(spec: SchemeSpec, width: Fraction) -> WeightTable:
    """Exact weight table for a panel of the given (exact) width."""
    n = spec.degree
    # derivs[m] = p^(m)
    derivs = [spec.poly]
    for _ in range(n - 1):
        derivs.append(poly_derivative(derivs[-1]))
    w_a, w_b = [], []
    for k in range(n):
        d = derivs[n - 1 - k]
        scale = (-1) ** k * width ** (k + 1)
        w_a.append(-scale * poly_eval(d, 0))
        w_b.append(scale * poly_eval(d, 1))
    return WeightTable(n, spec.constant, width, tuple(w_a), tuple(w_b))


def endpoint_weights(spec: SchemeSpec, a: float, b: float) -> WeightTable:
    if not a < b:
        raise DegenerateInterval(f"need a < b, got [{a}, {b}]")
    return scheme_weights(spec, Fraction(b) - Fraction(a))
