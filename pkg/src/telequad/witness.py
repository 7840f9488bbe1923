"""Extremal integrands that (nearly) attain the single-panel Hölder bound.

Witnesses are carried on a uniform grid: ``f^(n)`` is sampled, and the lower
derivatives are cumulative trapezoid integrals with zero constants at ``a``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .bounds import INF, HolderPair, argmax_abs, panel_error_bound
from .calculus import Integrand
from .errors import InsufficientGrid
from .exactpoly import poly_eval
from .quad import panel_apply
from .reference import reference_integral
from .scheme import SchemeSpec

__all__ = [
    "SampledFunction",
    "SampledIntegrand",
    "DeltaSpike",
    "antidifferentiate_n",
    "extremal_integrand",
    "sampled_norm",
    "SharpnessResult",
    "sharpness",
    "reference_integral",
]


class SampledFunction:
    """Piecewise-linear interpolant of ``values`` on a uniform grid of [a, b]."""

    def __init__(self, a: float, b: float, values: Sequence[float]):
        values = np.asarray(values, dtype=float)
        if values.ndim != 1 or len(values) < 2:
            raise InsufficientGrid(f"need at least 2 grid points, got {np.size(values)}")
        if not a < b:
            raise ValueError(f"need a < b, got [{a}, {b}]")
        self.a = float(a)
        self.b = float(b)
        self.values = values
        self.values.setflags(write=False)

    @property
    def M(self) -> int:
        return len(self.values)

    @property
    def spacing(self) -> float:
        return (self.b - self.a) / (self.M - 1)

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(self.a, self.b, self.M)

    def __call__(self, x):
        return np.interp(x, self.grid, self.values)

    def integral(self) -> float:
        """Exact integral of the interpolant."""
        v = self.values
        return float(self.spacing * (0.5 * (v[0] + v[-1]) + np.sum(v[1:-1])))


class SampledIntegrand(Integrand):
    def __init__(self, levels: Sequence[SampledFunction], label: str = ""):
        super().__init__(levels, levels[0].a, levels[0].b, label=label)
        self.levels = tuple(levels)


def _cumtrapz(values: np.ndarray, h: float) -> np.ndarray:
    out = np.empty_like(values)
    out[0] = 0.0
    np.cumsum(0.5 * h * (values[1:] + values[:-1]), out=out[1:])
    return out


def antidifferentiate_n(
    g: SampledFunction, n: int, seeds: Optional[Sequence[float]] = None
) -> SampledIntegrand:
    """Integrand with ``f^(n) = g``.

    ``seeds[j]`` is the value of ``f^(j)`` at ``a`` (default 0).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if g.M < 2:
        raise InsufficientGrid("need at least 2 grid points")
    seeds = list(seeds) if seeds is not None else [0.0] * n
    if len(seeds) != n:
        raise ValueError(f"need {n} seed values, got {len(seeds)}")
    levels = [g]
    for j in range(n - 1, -1, -1):
        vals = seeds[j] + _cumtrapz(levels[0].values, g.spacing)
        levels.insert(0, SampledFunction(g.a, g.b, vals))
    return SampledIntegrand(levels)


@dataclass(frozen=True)
class DeltaSpike:
    """Box of half-width ``1/(2k)`` centred at ``center``.

    Height is ``k`` inside (0, 1) and ``2k`` at an endpoint, where half the
    box falls outside the unit interval.
    """

    center: float
    k: int

    @property
    def half_width(self) -> float:
        return 1.0 / (2 * self.k)

    @property
    def at_endpoint(self) -> bool:
        return self.center <= 0.0 or self.center >= 1.0

    @property
    def height(self) -> float:
        return 2.0 * self.k if self.at_endpoint else float(self.k)

    def sample(self, x: np.ndarray) -> np.ndarray:
        return np.where(np.abs(x - self.center) < self.half_width, self.height, 0.0)


def extremal_integrand(
    spec: SchemeSpec,
    hp: HolderPair,
    a: float = 0.0,
    b: float = 1.0,
    grid_size: int = 8193,
    k: int = 256,
) -> SampledIntegrand:
    """Integrand whose ``f^(n)`` makes Hölder's inequality (nearly) tight.

    ``f^(n)(a + (b-a)x)`` is ``sgn p(x)`` for r = 1, ``|p|^(r/s) sgn p`` for
    finite r > 1, and a unit-mass spike at the maximizer of ``|p|`` for
    r = inf (parameterized by ``k``).
    """
    if grid_size < 1025:
        raise ValueError(f"grid_size must be >= 1025, got {grid_size}")
    x = np.linspace(0.0, 1.0, grid_size)
    p = poly_eval(spec.poly, x)
    if hp.r == 1:
        g = np.sign(p)
    elif hp.r == INF:
        spike = DeltaSpike(argmax_abs(spec.poly), k)
        g = spike.sample(x)
        # unit mass of the interpolant on [0, 1]
        g = g / SampledFunction(0.0, 1.0, g).integral()
    else:
        g = np.abs(p) ** (hp.r / hp.s) * np.sign(p)
    f = antidifferentiate_n(SampledFunction(a, b, g), spec.degree)
    f.label = f"extremal(n={spec.degree}, r={hp.r_text})"
    return f


def sampled_norm(g: SampledFunction, s: float) -> float:
    """Exact ``L^s`` norm over [a, b] of the piecewise-linear interpolant."""
    v = g.values
    if s == INF:
        return float(np.max(np.abs(v)))
    h = g.spacing
    v0, v1 = v[:-1], v[1:]
    a0, a1 = np.abs(v0), np.abs(v1)
    cross = v0 * v1 < 0
    with np.errstate(divide="ignore", invalid="ignore"):
        # same sign: int_0^h |linear|^s = h (a1^(s+1) - a0^(s+1)) / ((s+1)(a1 - a0))
        same = h * (a1 ** (s + 1) - a0 ** (s + 1)) / ((s + 1) * (a1 - a0))
        near = np.abs(a1 - a0) <= 1e-6 * np.maximum(a1, a0)
        simpson = h / 6 * (a0**s + 4 * (0.5 * (a0 + a1)) ** s + a1**s)
        same = np.where(near, simpson, same)
        t = a0 / (a0 + a1)
        split = h * (t * a0**s + (1 - t) * a1**s) / (s + 1)
    cells = np.where(cross, split, same)
    return float(np.sum(cells) ** (1.0 / s))


@dataclass(frozen=True)
class SharpnessResult:
    degree: int
    variant: str
    r: str
    grid: int
    achieved: float
    bound: float
    ratio: float
    k: Optional[int] = None

    def to_json(self) -> dict:
        out = {
            "degree": self.degree,
            "variant": self.variant,
            "r": self.r,
            "grid": self.grid,
            "achieved": self.achieved,
            "bound": self.bound,
            "ratio": self.ratio,
        }
        if self.k is not None:
            out["k"] = self.k
        return out


def sharpness(
    spec: SchemeSpec,
    hp: HolderPair,
    a: float = 0.0,
    b: float = 1.0,
    grid_size: int = 8193,
    k: int = 256,
) -> SharpnessResult:
    """Realized single-panel error of the witness against the Hölder bound.

    The realized error is the exact integral of the sampled ``f`` minus the
    scheme applied to the same ``f``.
    """
    f = extremal_integrand(spec, hp, a, b, grid_size, k)
    achieved = abs(f.levels[0].integral() - panel_apply(spec, f, a, b))
    fn_norm = sampled_norm(f.levels[-1], hp.s)
    bound = panel_error_bound(spec, hp, fn_norm, a, b)
    return SharpnessResult(
        degree=spec.degree,
        variant=spec.variant.value,
        r=hp.r_text,
        grid=grid_size,
        achieved=achieved,
        bound=bound,
        ratio=achieved / bound if bound > 0 else float("nan"),
        k=k if hp.r == INF else None,
    )
