"""Single-panel, composite and closed-form application of a scheme."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import factorial
from typing import Optional, Sequence

import numpy as np

from .calculus import Integrand
from .errors import DegenerateInterval
from .exactpoly import bernoulli_number, format_rational
from .reference import reference_integral
from .scheme import SchemeSpec, endpoint_weights, make_scheme, scheme_weights

__all__ = [
    "Interval",
    "QuadratureReport",
    "pairwise_sum",
    "panel_apply",
    "composite_apply",
    "euler_maclaurin",
    "error_actual",
    "default_workers",
]

THREADS_ENV = "TELEQUAD_THREADS"


def default_workers() -> int:
    """Worker cap from ``TELEQUAD_THREADS``; 0 or unset means one."""
    try:
        n = int(os.environ.get(THREADS_ENV, "0"))
    except ValueError:
        n = 0
    return max(n, 1)


@dataclass(frozen=True)
class Interval:
    a: float
    b: float
    panels: int = 1

    def __post_init__(self):
        if not self.a < self.b:
            raise DegenerateInterval(f"need a < b, got [{self.a}, {self.b}]")
        if self.panels < 1:
            raise ValueError(f"need at least one panel, got {self.panels}")

    @property
    def N(self) -> int:
        return self.panels

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.panels

    def nodes(self) -> np.ndarray:
        xs = self.a + np.arange(self.panels + 1) * self.h
        xs[-1] = self.b
        return xs


@dataclass(frozen=True)
class QuadratureReport:
    value: float
    scheme: SchemeSpec
    interval: Interval
    bound: Optional[float] = None
    reference: Optional[float] = None
    actual_error: Optional[float] = None
    bound_exponents: Optional[object] = None
    extra: dict = field(default_factory=dict)

    def with_reference(self, reference: float) -> QuadratureReport:
        return replace(self, reference=reference, actual_error=reference - self.value)

    def to_json(self) -> dict:
        out = {
            "value": self.value,
            "bound": self.bound,
            "reference": self.reference,
            "actual_error": self.actual_error,
            "degree": self.scheme.degree,
            "c": format_rational(self.scheme.constant),
            "variant": self.scheme.variant.value,
            "N": self.interval.panels,
            "a": self.interval.a,
            "b": self.interval.b,
        }
        if self.bound_exponents is not None:
            out["r"] = self.bound_exponents.r_text
        out.update(self.extra)
        return out


def pairwise_sum(values: Sequence[float]) -> float:
    """Sum by recursive halving; the combination tree depends only on length."""
    n = len(values)
    if n == 0:
        return 0.0
    if n == 1:
        return float(values[0])
    if n == 2:
        return float(values[0]) + float(values[1])
    mid = n // 2
    return pairwise_sum(values[:mid]) + pairwise_sum(values[mid:])


def _panel_values(w_a, w_b, left, right):
    """Per-panel scheme values; ``left[k]``/``right[k]`` hold f^(k) at panel ends."""
    acc = None
    for k in range(len(w_a)):
        for w, fx in ((w_a[k], left[k]), (w_b[k], right[k])):
            if w == 0.0:
                continue
            term = w * fx
            acc = term if acc is None else acc + term
    if acc is None:
        return 0.0 * left[0]
    return acc


def panel_apply(spec: SchemeSpec, f: Integrand, a: float, b: float) -> float:
    if a == b:
        return 0.0
    n = spec.degree
    f.require(n - 1)
    w_a, w_b = endpoint_weights(spec, a, b).as_floats()
    left = [f(a, k) for k in range(n)]
    right = [f(b, k) for k in range(n)]
    return float(_panel_values(w_a, w_b, left, right))


def _derivs_at(f: Integrand, n: int, xs: np.ndarray, workers: int) -> list[np.ndarray]:
    if workers <= 1 or len(xs) < 2 * workers:
        return [np.asarray(f(xs, k), dtype=float) * np.ones_like(xs) for k in range(n)]
    chunks = np.array_split(xs, workers)

    def job(chunk):
        return [np.asarray(f(chunk, k), dtype=float) * np.ones_like(chunk) for k in range(n)]

    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(job, chunks))
    return [np.concatenate([p[k] for p in parts]) for k in range(n)]


def composite_apply(
    spec: SchemeSpec, f: Integrand, iv: Interval, workers: Optional[int] = None
) -> QuadratureReport:
    """Sum of ``panel_apply`` over the ``N`` equal panels of ``iv``.

    Weights are formed once in exact arithmetic for the panel width ``h`` and
    rounded to double; panel values are combined by :func:`pairwise_sum`.
    """
    n = spec.degree
    f.require(n - 1)
    workers = default_workers() if workers is None else workers
    w_a, w_b = scheme_weights(spec, Fraction(iv.h)).as_floats()
    xs = iv.nodes()
    D = _derivs_at(f, n, xs, workers)
    vals = _panel_values(w_a, w_b, [d[:-1] for d in D], [d[1:] for d in D])
    return QuadratureReport(value=pairwise_sum(list(vals)), scheme=spec, interval=iv)


def euler_maclaurin(
    n: int, c: Fraction | int, f: Integrand, iv: Interval
) -> QuadratureReport:
    """Closed form of the composite rule generated by ``B_n(x)/n! + c``.

    The final correction is ``(-1)^n h^n (B_n/n! + c)(f^(n-1)(a) - f^(n-1)(b))``,
    which is what expanding the composite rule actually produces.
    """
    if n < 2:
        raise ValueError("closed form needs n >= 2")
    f.require(n - 1)
    c = Fraction(c)
    a, b, N = iv.a, iv.b, iv.panels
    h = iv.h
    hq = Fraction(h)
    xs = iv.nodes()
    interior = pairwise_sum(list(np.asarray(f(xs[1:-1]), dtype=float))) if N > 1 else 0.0
    total = h * (f(a) + f(b)) / 2 + h * interior
    for k in range(2, n):
        Bk = bernoulli_number(k)
        if Bk == 0:
            continue
        coef = float(Bk / factorial(k) * hq**k)
        total += coef * (f(a, k - 1) - f(b, k - 1))
    last = (-1) ** n * (bernoulli_number(n) / factorial(n) + c) * hq**n
    if last != 0:
        total += float(last) * (f(a, n - 1) - f(b, n - 1))
    return QuadratureReport(value=float(total), scheme=make_scheme(n, c), interval=iv)


def error_actual(spec: SchemeSpec, f: Integrand, iv: Interval, tol: float = 1e-13) -> float:
    """Oracle integral minus the composite value."""
    ref = reference_integral(f, iv.a, iv.b, tol)
    return ref - composite_apply(spec, f, iv).value
