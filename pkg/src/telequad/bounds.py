"""Norms of scheme polynomials, error bounds and asymptotic estimates."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Optional, Union

import numpy as np

from .calculus import Integrand
from .errors import DegenerateInterval, NoRootInUnitInterval, UnknownKind
from .exactpoly import (
    RationalPoly,
    bernoulli_number,
    bernoulli_poly,
    format_rational,
    poly_derivative,
    poly_eval,
)
from .quad import Interval
from .scheme import SchemeSpec, pn, qn

__all__ = [
    "INF",
    "HolderPair",
    "NormResult",
    "VariationResult",
    "parse_r",
    "find_roots",
    "critical_points",
    "adaptive_simpson",
    "norm_numeric",
    "norm_exact",
    "scheme_norm",
    "panel_error_bound",
    "composite_error_bound",
    "total_variation",
    "alexiewicz_norm",
    "has_root_in_unit_interval",
    "distributional_bound",
    "KINDS",
    "asymptotic_estimate",
    "asymptotic_exact",
    "wallis",
    "cos_power_mean",
    "trig_envelope_deviation",
    "estimate_derivative_norm",
]

INF = math.inf
TWO_PI = 2.0 * math.pi

RLike = Union[float, int, str]


def parse_r(r: RLike) -> float:
    """Accept 1, 2.5, "inf", "∞"; infinity is the exact sentinel ``math.inf``."""
    if isinstance(r, str):
        t = r.strip().lower()
        if t in ("inf", "infinity", "∞"):
            return INF
        r = float(t)
    r = float(r)
    if not r >= 1:
        raise ValueError(f"exponent must be >= 1, got {r}")
    return r


def _r_text(r: float) -> str:
    if r == INF:
        return "inf"
    return str(int(r)) if float(r).is_integer() else repr(float(r))


@dataclass(frozen=True)
class HolderPair:
    """Conjugate exponents with ``1/r + 1/s = 1``."""

    r: float
    s: float

    def __post_init__(self):
        for v in (self.r, self.s):
            if not v >= 1:
                raise ValueError(f"exponents must lie in [1, inf], got {v}")
        inv = (0.0 if self.r == INF else 1 / self.r) + (0.0 if self.s == INF else 1 / self.s)
        if abs(inv - 1.0) > 1e-12:
            raise ValueError(f"1/r + 1/s = {inv} != 1")

    @classmethod
    def from_r(cls, r: RLike) -> HolderPair:
        r = parse_r(r)
        if r == INF:
            return cls(INF, 1.0)
        if r == 1:
            return cls(1.0, INF)
        return cls(r, r / (r - 1))

    @property
    def inv_r(self) -> float:
        return 0.0 if self.r == INF else 1.0 / self.r

    @property
    def r_text(self) -> str:
        return _r_text(self.r)


@dataclass(frozen=True)
class NormResult:
    value: float
    method: str
    exact: Optional[Fraction] = None
    root: int = 1
    formula: Optional[str] = None

    @property
    def exact_text(self) -> Optional[str]:
        if self.exact is None:
            return None
        s = format_rational(self.exact)
        return s if self.root == 1 else f"sqrt({s})"


@dataclass(frozen=True)
class VariationResult:
    value: float
    breakpoints: tuple[float, ...]


# --------------------------------------------------------------------------
# roots and critical points


def _exact_sign(p: RationalPoly, x: float) -> int:
    v = poly_eval(p, Fraction(x))
    return (v > 0) - (v < 0)


def find_roots(
    p: RationalPoly,
    lo: float = 0.0,
    hi: float = 1.0,
    samples: int = 1024,
    tol: float = 1e-14,
    open_interval: bool = False,
) -> list[float]:
    """Real roots of ``p`` in ``[lo, hi]`` found by sign-change bracketing.

    Samples are compared in floating point; bisection uses exact signs at the
    (float) midpoints so each bracket converges deterministically.
    """
    if p.degree < 1:
        return []
    xs = np.linspace(lo, hi, samples)
    ys = poly_eval(p, xs)
    scale = float(np.max(np.abs(ys)))
    signs = [
        _exact_sign(p, float(x)) if abs(y) <= 1e-9 * scale else (1 if y > 0 else -1)
        for x, y in zip(xs, ys)
    ]
    roots: list[float] = []
    for i in range(samples - 1):
        s0, s1 = signs[i], signs[i + 1]
        if s0 == 0:
            roots.append(float(xs[i]))
            continue
        if s0 * s1 < 0:
            a, b = float(xs[i]), float(xs[i + 1])
            while b - a > tol:
                m = 0.5 * (a + b)
                if m <= a or m >= b:
                    break
                sm = _exact_sign(p, m)
                if sm == 0:
                    a = b = m
                    break
                if sm == s0:
                    a = m
                else:
                    b = m
            roots.append(0.5 * (a + b))
    if signs[-1] == 0:
        roots.append(float(xs[-1]))
    if open_interval:
        roots = [x for x in roots if lo < x < hi]
    return roots


@lru_cache(maxsize=1024)
def _critical_points(p: RationalPoly) -> tuple[float, ...]:
    return tuple(find_roots(poly_derivative(p), 0.0, 1.0, open_interval=True))


def critical_points(p: RationalPoly) -> list[float]:
    """Sign changes of ``p'`` strictly inside (0, 1)."""
    return list(_critical_points(p))


def _sup(p: RationalPoly) -> tuple[float, float]:
    best_x, best = 0.0, -1.0
    for x in [0.0, *critical_points(p), 1.0]:
        v = abs(float(poly_eval(p, Fraction(x))))
        if v > best * (1 + 1e-13):
            best_x, best = x, v
    return best, best_x


def argmax_abs(p: RationalPoly) -> float:
    """Smallest maximizer of ``|p|`` on [0, 1] (ties broken to the left)."""
    return _sup(p)[1]


# --------------------------------------------------------------------------
# adaptive Simpson


def adaptive_simpson(
    g: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-12,
    initial: int = 8,
    max_depth: int = 50,
) -> float:
    """Adaptive Simpson with Richardson correction and tolerance splitting."""
    if a == b:
        return 0.0
    pieces = []
    edges = np.linspace(a, b, initial + 1)
    stack = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        lo, hi = float(lo), float(hi)
        m = 0.5 * (lo + hi)
        flo, fm, fhi = g(lo), g(m), g(hi)
        whole = (hi - lo) / 6 * (flo + 4 * fm + fhi)
        stack.append((lo, hi, flo, fm, fhi, whole, tol / initial, 0))
    while stack:
        lo, hi, flo, fm, fhi, whole, eps, depth = stack.pop()
        m = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + m), 0.5 * (m + hi)
        flm, frm = g(lm), g(rm)
        left = (m - lo) / 6 * (flo + 4 * flm + fm)
        right = (hi - m) / 6 * (fm + 4 * frm + fhi)
        delta = left + right - whole
        if depth >= max_depth or abs(delta) <= 15 * eps:
            pieces.append(left + right + delta / 15)
        else:
            stack.append((lo, m, flo, flm, fm, left, eps / 2, depth + 1))
            stack.append((m, hi, fm, frm, fhi, right, eps / 2, depth + 1))
    return math.fsum(pieces)


# --------------------------------------------------------------------------
# norms


@lru_cache(maxsize=4096)
def norm_numeric(p: RationalPoly, r: float) -> NormResult:
    """``(int_0^1 |p|^r)^(1/r)``, or ``max |p|`` for ``r = inf``.

    For finite ``r`` the integrand is normalized by ``max |p|`` and split at
    the real roots of ``p`` before adaptive Simpson (absolute tolerance 1e-12
    on the normalized integrand).
    """
    r = parse_r(r)
    sup, _ = _sup(p)
    if r == INF:
        return NormResult(sup, "critical-point")
    if sup == 0.0:
        return NormResult(0.0, "numeric-adaptive")
    coeffs = [c / sup for c in p.float_coeffs()][::-1]

    def g(x: float) -> float:
        acc = 0.0
        for c in coeffs:
            acc = acc * x + c
        return abs(acc) ** r

    cuts = sorted({0.0, 1.0, *find_roots(p, 0.0, 1.0, open_interval=True)})
    pieces = [
        adaptive_simpson(g, lo, hi, tol=1e-12 * (hi - lo))
        for lo, hi in zip(cuts[:-1], cuts[1:])
    ]
    return NormResult(sup * math.fsum(pieces) ** (1.0 / r), "numeric-adaptive")


def norm_exact(spec: SchemeSpec, r: RLike) -> Optional[NormResult]:
    """Closed-form norms of ``p_n`` and ``q_n`` where available, else ``None``.

    Covered: ``||q_n||_1`` (n even), ``||p_n||_1`` (n odd), ``||p_n||_2``,
    ``||q_n||_2``, ``||p_n||_inf`` and ``||q_n||_inf`` (n even).
    """
    r = parse_r(r)
    n = spec.degree
    Bn = bernoulli_number(n)
    fn = factorial(n)
    is_p, is_q = spec.is_pn, spec.is_qn
    exact, root, formula = None, 1, None
    if r == 1:
        if is_q and n % 2 == 0:
            exact, formula = abs(Bn) / fn, "q_even_L1"
        elif is_p and n % 2 == 1:
            exact = Fraction(2 ** (n + 1) - 1) * abs(bernoulli_number(n + 1)) / (
                factorial(n + 1) * 2 ** (n - 1)
            )
            formula = "p_odd_L1"
    elif r == 2:
        base = abs(bernoulli_number(2 * n)) / factorial(2 * n)
        if is_p:
            exact, root, formula = base, 2, "p_L2"
        elif is_q:
            exact, root, formula = base + (Bn / fn) ** 2, 2, "q_L2"
    elif r == INF and n % 2 == 0:
        if is_p:
            exact, formula = abs(Bn) / fn, "p_even_Linf"
        elif is_q:
            exact, formula = abs(poly_eval(spec.poly, Fraction(1, 2))), "q_even_Linf"
    if exact is None:
        return None
    value = float(exact) if root == 1 else math.sqrt(exact)
    return NormResult(value, "exact-closed-form", exact=exact, root=root, formula=formula)


def scheme_norm(spec: SchemeSpec, r: RLike) -> NormResult:
    r = parse_r(r)
    return norm_exact(spec, r) or norm_numeric(spec.poly, r)


# --------------------------------------------------------------------------
# error bounds


def panel_error_bound(
    spec: SchemeSpec, hp: HolderPair, fn_norm: float, a: float, b: float
) -> float:
    """``(b-a)^(n+1/r) ||p||_r ||f^(n)||_s`` for one panel."""
    if not a < b:
        raise DegenerateInterval(f"need a < b, got [{a}, {b}]")
    if fn_norm < 0:
        raise ValueError("norm of f^(n) must be nonnegative")
    width = b - a
    return width ** (spec.degree + hp.inv_r) * scheme_norm(spec, hp.r).value * fn_norm


def composite_error_bound(
    spec: SchemeSpec, hp: HolderPair, fn_norm_total: float, iv: Interval
) -> float:
    """Composite bound; ``fn_norm_total`` is ``||f^(n)||_s`` over all of [a, b]."""
    n = spec.degree
    return panel_error_bound(spec, hp, fn_norm_total, iv.a, iv.b) / iv.panels**n


# --------------------------------------------------------------------------
# variation and the Alexiewicz estimate


def total_variation(p: RationalPoly) -> VariationResult:
    xs = [0.0, *critical_points(p), 1.0]
    vals = [float(poly_eval(p, Fraction(x))) for x in xs]
    value = math.fsum(abs(v1 - v0) for v0, v1 in zip(vals[:-1], vals[1:]))
    return VariationResult(value, tuple(xs))


def _ternary(g: Callable[[float], float], lo: float, hi: float, tol: float, sign: float) -> float:
    """Best value of ``sign * g`` on [lo, hi] assuming it is unimodal there."""
    while hi - lo > tol:
        m1 = lo + (hi - lo) / 3
        m2 = hi - (hi - lo) / 3
        if sign * g(m1) < sign * g(m2):
            lo = m1
        else:
            hi = m2
    return g(0.5 * (lo + hi))


def alexiewicz_norm(
    f: Integrand, n: int, a: float, b: float, samples: int = 4097, tol: float = 1e-10
) -> float:
    """``max - min`` of ``f^(n-1)`` on [a, b]: the Alexiewicz norm of ``f^(n)``."""
    if n < 1:
        raise ValueError("order must be >= 1")
    g = f.derivative(n - 1)
    xs = np.linspace(a, b, samples)
    ys = np.asarray(g(xs), dtype=float) * np.ones_like(xs)
    out = []
    for sign in (1.0, -1.0):
        i = int(np.argmax(sign * ys))
        lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, samples - 1)]
        refined = _ternary(g, float(lo), float(hi), tol, sign)
        out.append(max(sign * ys[i], sign * refined) * sign)
    return out[0] - out[1]


def has_root_in_unit_interval(p: RationalPoly) -> bool:
    vals = [poly_eval(p, Fraction(x)) for x in (0.0, *critical_points(p), 1.0)]
    return min(vals) <= 0 <= max(vals)


def distributional_bound(spec: SchemeSpec, f: Integrand, iv: Interval) -> float:
    """``(b-a)^n / N^(n-1) * ||f^(n)||_A * V p_n``; needs a root of ``p`` in [0, 1]."""
    if not has_root_in_unit_interval(spec.poly):
        raise NoRootInUnitInterval(f"{spec.poly} has no real root in [0, 1]")
    n = spec.degree
    alex = alexiewicz_norm(f, n, iv.a, iv.b)
    var = total_variation(pn(n).poly).value
    return (iv.b - iv.a) ** n / iv.panels ** (n - 1) * alex * var


# --------------------------------------------------------------------------
# asymptotics


KINDS = ("pn_inf", "q2n_inf", "pn_1", "q2n_1", "pn_r_even", "pn_r_odd", "variation_pn")


def wallis(r: int) -> float:
    """``int_0^(pi/2) cos^r x dx`` for integer ``r >= 2``."""
    if int(r) != r or r < 2:
        raise ValueError(f"need an integer r >= 2, got {r}")
    r = int(r)
    if r % 2 == 0:
        num = math.prod(range(1, r, 2))
        den = math.prod(range(2, r + 1, 2))
        return num / den * math.pi / 2
    num = math.prod(range(2, r, 2))
    den = math.prod(range(1, r + 1, 2))
    return num / den


def cos_power_mean(r: int) -> float:
    """``int_0^1 |cos(2 pi x)|^r dx = (2/pi) * wallis(r)``."""
    return 2 / math.pi * wallis(r)


def _check_kind_args(kind: str, n: int, r) -> None:
    if kind not in KINDS:
        raise UnknownKind(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if kind.startswith("pn_r_"):
        if r is None or int(r) != r or r < 2:
            raise ValueError(f"{kind} needs an integer r >= 2")
        want = 0 if kind == "pn_r_even" else 1
        if int(r) % 2 != want or (want == 1 and r < 3):
            raise ValueError(f"{kind} does not accept r = {r}")


def asymptotic_estimate(kind: str, n: int, r: Optional[int] = None) -> float:
    """Leading-order value as the degree grows.

    ``q2n_*`` kinds refer to ``q_{2n}``; the ``pn_r_*`` kinds take the
    integer exponent ``r`` (even or odd, respectively).
    """
    _check_kind_args(kind, n, r)
    if kind == "pn_inf":
        return 2 / TWO_PI**n
    if kind == "q2n_inf":
        return 4 / TWO_PI ** (2 * n)
    if kind == "pn_1":
        return 8 / TWO_PI ** (n + 1)
    if kind == "q2n_1":
        return 2 / TWO_PI ** (2 * n)
    if kind == "variation_pn":
        return 8 / TWO_PI**n
    if kind == "pn_r_even":
        r = int(r)
        ratio = math.prod(range(1, r, 2)) / math.prod(range(2, r + 1, 2))
        return 2 / TWO_PI**n * ratio ** (1 / r)
    r = int(r)
    return 2 / TWO_PI**n * cos_power_mean(r) ** (1 / r)


def asymptotic_exact(kind: str, n: int, r: Optional[int] = None) -> float:
    """The quantity that :func:`asymptotic_estimate` approximates."""
    _check_kind_args(kind, n, r)
    if kind == "pn_inf":
        return scheme_norm(pn(n), INF).value
    if kind == "q2n_inf":
        return scheme_norm(qn(2 * n), INF).value
    if kind == "pn_1":
        return scheme_norm(pn(n), 1).value
    if kind == "q2n_1":
        return scheme_norm(qn(2 * n), 1).value
    if kind == "variation_pn":
        return total_variation(pn(n).poly).value
    return norm_numeric(pn(n).poly, float(r)).value


def trig_envelope_deviation(n: int, points: int = 513) -> float:
    """Max over a uniform grid of ``|±(2 pi)^n B_n(x) / (2 n!) - trig(2 pi x)|``.

    ``trig`` is cos for even ``n`` and sin for odd ``n``; the sign is
    ``(-1)^(m-1)`` with ``m = n // 2``.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    m = n // 2
    sign = (-1) ** (m - 1)
    xs = np.linspace(0.0, 1.0, points)
    scaled = bernoulli_poly(n) * Fraction(sign, 2 * factorial(n))
    vals = TWO_PI**n * poly_eval(scaled, xs)
    trig = np.cos(TWO_PI * xs) if n % 2 == 0 else np.sin(TWO_PI * xs)
    return float(np.max(np.abs(vals - trig)))


def estimate_derivative_norm(
    f: Integrand, n: int, a: float, b: float, s: float, samples: int = 4097
) -> float:
    """Sampled estimate of ``||f^(n)||_s`` on [a, b].

    Composite Simpson on ``samples`` points for finite ``s``; the sample
    maximum for ``s = inf``. An estimate, not a guaranteed upper bound.
    """
    if samples % 2 == 0:
        samples += 1
    xs = np.linspace(a, b, samples)
    ys = np.abs(np.asarray(f(xs, n), dtype=float) * np.ones_like(xs))
    if s == INF:
        return float(np.max(ys))
    w = np.ones(samples)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    h = (b - a) / (samples - 1)
    return float((h / 3 * np.dot(w, ys**s)) ** (1.0 / s))
