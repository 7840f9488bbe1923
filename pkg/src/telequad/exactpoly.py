"""Exact rational polynomials and Bernoulli numbers/polynomials.

Scalars are :class:`fractions.Fraction`; a :class:`RationalPoly` stores its
coefficients in ascending powers with no trailing zeros.
"""
from __future__ import annotations

import threading
from fractions import Fraction
from math import comb
from numbers import Rational as _RationalABC
from typing import Iterable, Union

Rational = Fraction

Scalar = Union[Fraction, int, float]

__all__ = [
    "Rational",
    "RationalPoly",
    "BernoulliCache",
    "bernoulli_number",
    "bernoulli_poly",
    "poly_eval",
    "poly_derivative",
    "poly_antiderivative",
    "poly_mul",
    "poly_compose",
    "poly_definite_integral",
    "format_rational",
    "parse_rational",
]


def format_rational(q: Fraction) -> str:
    """Serialize as ``"num/den"`` (integers print without a denominator)."""
    return str(Fraction(q))


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


class RationalPoly:
    """Immutable polynomial with exact rational coefficients.

    ``coeffs[i]`` multiplies ``x**i``. The zero polynomial has no
    coefficients and degree -1.
    """

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self._hash = hash(self.coeffs)

    @classmethod
    def constant(cls, c: Scalar) -> RationalPoly:
        return cls([c])

    @classmethod
    def monomial(cls, power: int, coeff: Scalar = 1) -> RationalPoly:
        return cls([0] * power + [coeff])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, power: int) -> Fraction:
        if 0 <= power < len(self.coeffs):
            return self.coeffs[power]
        return Fraction(0)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RationalPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == RationalPoly([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"RationalPoly({[format_rational(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts: list[str] = []
        for power in range(self.degree, -1, -1):
            c = self.coeffs[power]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if power == 0:
                body = format_rational(mag)
            else:
                xs = "x" if power == 1 else f"x^{power}"
                body = xs if mag == 1 else f"{format_rational(mag)}*{xs}"
            if not parts:
                parts.append(body if sign == "+" else f"-{body}")
            else:
                parts.append(f"{sign} {body}")
        return " ".join(parts)

    def __neg__(self) -> RationalPoly:
        return RationalPoly(-c for c in self.coeffs)

    def __add__(self, other: RationalPoly | Scalar) -> RationalPoly:
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return RationalPoly(self.coeff(i) + other.coeff(i) for i in range(n))

    __radd__ = __add__

    def __sub__(self, other: RationalPoly | Scalar) -> RationalPoly:
        return self + (-_as_poly(other))

    def __rsub__(self, other: Scalar) -> RationalPoly:
        return _as_poly(other) - self

    def __mul__(self, other: RationalPoly | Scalar) -> RationalPoly:
        if isinstance(other, RationalPoly):
            return poly_mul(self, other)
        k = Fraction(other)
        return RationalPoly(k * c for c in self.coeffs)

    __rmul__ = __mul__

    def __truediv__(self, k: Scalar) -> RationalPoly:
        k = Fraction(k)
        return RationalPoly(c / k for c in self.coeffs)

    def __call__(self, x):
        return poly_eval(self, x)

    def derivative(self, order: int = 1) -> RationalPoly:
        p = self
        for _ in range(order):
            p = poly_derivative(p)
        return p

    def float_coeffs(self) -> list[float]:
        return [float(c) for c in self.coeffs]


def _as_poly(x: RationalPoly | Scalar) -> RationalPoly:
    return x if isinstance(x, RationalPoly) else RationalPoly([x])


def poly_eval(p: RationalPoly, x):
    """Horner evaluation.

    Exact for rational ``x``; double precision for float (or ndarray) ``x``.
    """
    if isinstance(x, _RationalABC):
        acc = Fraction(0)
        xq = Fraction(x)
        for c in reversed(p.coeffs):
            acc = acc * xq + c
        return acc
    acc = 0.0 * x
    for c in reversed(p.float_coeffs()):
        acc = acc * x + c
    return acc


def poly_derivative(p: RationalPoly) -> RationalPoly:
    return RationalPoly(i * p.coeffs[i] for i in range(1, len(p.coeffs)))


def poly_antiderivative(p: RationalPoly) -> RationalPoly:
    """Antiderivative with zero constant term."""
    return RationalPoly([0] + [c / (i + 1) for i, c in enumerate(p.coeffs)])


def poly_mul(p: RationalPoly, q: RationalPoly) -> RationalPoly:
    if not p.coeffs or not q.coeffs:
        return RationalPoly()
    out = [Fraction(0)] * (len(p.coeffs) + len(q.coeffs) - 1)
    for i, a in enumerate(p.coeffs):
        if a == 0:
            continue
        for j, b in enumerate(q.coeffs):
            out[i + j] += a * b
    return RationalPoly(out)


def poly_compose(p: RationalPoly, q: RationalPoly) -> RationalPoly:
    """Return ``p(q(x))``."""
    acc = RationalPoly()
    for c in reversed(p.coeffs):
        acc = poly_mul(acc, q) + c
    return acc


def poly_definite_integral(p: RationalPoly, lo: Scalar, hi: Scalar) -> Fraction:
    P = poly_antiderivative(p)
    return poly_eval(P, Fraction(hi)) - poly_eval(P, Fraction(lo))


class BernoulliCache:
    """Grow-only tables of B_n and B_n(x).

    Entries are computed in order under a lock and never mutated, so reads of
    already-present entries need no synchronization.
    """

    def __init__(self) -> None:
        self.numbers: list[Fraction] = [Fraction(1)]
        self.polys: list[RationalPoly] = [RationalPoly([1])]
        self._lock = threading.Lock()

    def number(self, n: int) -> Fraction:
        if n < 0:
            raise ValueError("n must be >= 0")
        if n >= len(self.numbers):
            with self._lock:
                while len(self.numbers) <= n:
                    m = len(self.numbers)
                    # sum_{k=0}^{m} C(m+1, k) B_k = 0, solved for B_m
                    s = sum(comb(m + 1, k) * self.numbers[k] for k in range(m))
                    self.numbers.append(-s / (m + 1))
        return self.numbers[n]

    def poly(self, n: int) -> RationalPoly:
        if n < 0:
            raise ValueError("n must be >= 0")
        if n >= len(self.polys):
            self.number(n)
            with self._lock:
                while len(self.polys) <= n:
                    m = len(self.polys)
                    # B_m(x) = sum_k C(m, k) B_k x^(m-k)
                    cs = [Fraction(0)] * (m + 1)
                    for k in range(m + 1):
                        cs[m - k] = comb(m, k) * self.numbers[k]
                    self.polys.append(RationalPoly(cs))
        return self.polys[n]


_CACHE = BernoulliCache()


def bernoulli_number(n: int) -> Fraction:
    """B_n with the B_1 = -1/2 convention."""
    return _CACHE.number(n)


def bernoulli_poly(n: int) -> RationalPoly:
    return _CACHE.poly(n)

