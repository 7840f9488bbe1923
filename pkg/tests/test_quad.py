import itertools
import json
import math
from fractions import Fraction as F
from math import factorial

import numpy as np
import pytest

from telequad.calculus import Integrand, make_integrand
from telequad.errors import DegenerateInterval, InsufficientDerivativeOrder
from telequad.exactpoly import bernoulli_number
from telequad.quad import (
    Interval,
    composite_apply,
    error_actual,
    euler_maclaurin,
    pairwise_sum,
    panel_apply,
)
from telequad.reference import reference_integral
from telequad.scheme import make_scheme, pn, qn


def poly_integrand(coeffs, order):
    """Integrand for sum coeffs[i] x^i with exact derivative table."""
    fs = []
    for k in range(order + 1):
        ck = [c * math.perm(i, k) for i, c in enumerate(coeffs)][k:]
        fs.append((lambda cs: lambda x: np.polynomial.polynomial.polyval(x, cs) + 0 * np.asarray(x, float))(ck or [0.0]))
    return Integrand.from_functions(fs)


def exact_poly_integral(coeffs, a, b):
    a, b = F(a), F(b)
    return float(sum(F(c) * (b ** (i + 1) - a ** (i + 1)) / (i + 1) for i, c in enumerate(coeffs)))


def test_panel_examples():
    x = make_integrand("x", 2, 0, 1)
    assert panel_apply(qn(2), x, 0.0, 1.0) == 0.5
    x2 = make_integrand("x^2", 2, 0, 1)
    assert panel_apply(pn(2), x2, 0.0, 1.0) == pytest.approx(1 / 3, abs=1e-16)
    one = make_integrand("1", 8, -2, 3)
    for n in range(1, 8):
        for spec in (pn(n), qn(n), make_scheme(n, F(1, 7))):
            assert panel_apply(spec, one, -2.0, 3.0) == pytest.approx(5.0, rel=1e-15)


def test_panel_degenerate_returns_zero():
    assert panel_apply(pn(3), make_integrand("exp(x)", 3, 0, 1), 0.5, 0.5) == 0.0


def test_insufficient_order():
    f = make_integrand("exp(x)", 1, 0, 1)
    with pytest.raises(InsufficientDerivativeOrder):
        panel_apply(pn(3), f, 0.0, 1.0)
    with pytest.raises(InsufficientDerivativeOrder):
        composite_apply(pn(3), f, Interval(0.0, 1.0, 4))


def test_interval_invariants():
    with pytest.raises(DegenerateInterval):
        Interval(1.0, 1.0)
    with pytest.raises(DegenerateInterval):
        Interval(2.0, 1.0)
    with pytest.raises(ValueError):
        Interval(0.0, 1.0, 0)
    iv = Interval(0.0, 1.0, 3)
    assert iv.nodes()[-1] == 1.0 and iv.h == pytest.approx(1 / 3)


def test_composite_examples():
    x2 = make_integrand("x^2", 2, 0, 1)
    assert composite_apply(qn(2), x2, Interval(0.0, 1.0, 2)).value == 0.375
    x3 = make_integrand("x^3", 4, 0, 1)
    assert composite_apply(pn(4), x3, Interval(0.0, 1.0, 1)).value == pytest.approx(0.25, abs=1e-16)
    errs = [1 / 3 - composite_apply(qn(2), x2, Interval(0.0, 1.0, N)).value for N in (1, 2, 4, 8)]
    slope = np.polyfit(np.log([1, 2, 4, 8]), np.log(np.abs(errs)), 1)[0]
    assert slope == pytest.approx(-2.0, abs=1e-9)


def test_euler_maclaurin_examples():
    x2 = make_integrand("x^2", 2, 0, 1)
    iv = Interval(0.0, 1.0, 2)
    assert euler_maclaurin(2, F(-1, 12), x2, iv).value == 0.375
    f = make_integrand("exp(x)", 4, 0, 1)
    iv = Interval(0.0, 1.0, 10)
    v = euler_maclaurin(4, 0, f, iv).value
    from telequad.bounds import HolderPair, composite_error_bound

    for r in ("inf", 1):
        hp = HolderPair.from_r(r)
        fn = math.e if hp.s == math.inf else math.e - 1
        assert abs((math.e - 1) - v) <= composite_error_bound(pn(4), hp, fn, iv)


def test_euler_maclaurin_requires_n_ge_2():
    with pytest.raises(ValueError):
        euler_maclaurin(1, 0, make_integrand("x", 1, 0, 1), Interval(0.0, 1.0))


def _path_grid():
    fs = [
        make_integrand("exp(x)", 8, 0, 1),
        make_integrand("sin(x)", 8, 0, 1),
        make_integrand("1/(1+x^2)", 8, 0, 1),
    ]
    for n, N, f in itertools.product(range(2, 9), (1, 3, 16), fs):
        for c in (F(0), -bernoulli_number(n) / factorial(n), F(1, 7)):
            yield n, c, N, f


def test_path_equivalence():
    worst = 0.0
    for n, c, N, f in _path_grid():
        iv = Interval(0.0, 1.0, N)
        em = euler_maclaurin(n, c, f, iv).value
        ca = composite_apply(make_scheme(n, c), f, iv).value
        worst = max(worst, abs(em - ca) / (1 + abs(ca)))
    assert worst <= 1e-12


def test_panel_additivity():
    f = make_integrand("exp(x)*sin(3*x)", 6, -1, 2)
    for spec in (qn(2), pn(4), make_scheme(5, F(1, 7))):
        whole = composite_apply(spec, f, Interval(-1.0, 2.0, 12)).value
        left = composite_apply(spec, f, Interval(-1.0, 0.5, 6)).value
        right = composite_apply(spec, f, Interval(0.5, 2.0, 6)).value
        assert whole == pytest.approx(left + right, rel=1e-13)


def test_panel_sum_matches_panelwise_loop():
    f = make_integrand("cos(x)", 5, 0, 2)
    spec = make_scheme(5, F(-2, 9))
    iv = Interval(0.0, 2.0, 7)
    xs = iv.nodes()
    loop = sum(panel_apply(spec, f, float(xs[i]), float(xs[i + 1])) for i in range(7))
    assert composite_apply(spec, f, iv).value == pytest.approx(loop, rel=1e-13)


@pytest.mark.parametrize("n", range(1, 9))
def test_exactness_degrees(n):
    rng = np.random.default_rng(n)
    for _ in range(3):
        coeffs = list(rng.integers(-5, 6, size=n + 1).astype(float))
        coeffs[-1] = coeffs[-1] or 1.0
        exact = exact_poly_integral(coeffs, -0.5, 1.5)
        f_n = poly_integrand(coeffs, n)
        f_lo = poly_integrand(coeffs[:-1], n)
        exact_lo = exact_poly_integral(coeffs[:-1], -0.5, 1.5)
        for N in (1, 3):
            iv = Interval(-0.5, 1.5, N)
            assert composite_apply(pn(n), f_n, iv).value == pytest.approx(exact, rel=1e-13, abs=1e-13)
            assert composite_apply(qn(n), f_lo, iv).value == pytest.approx(exact_lo, rel=1e-13, abs=1e-13)


@pytest.mark.parametrize("n", range(1, 9))
def test_qn_error_on_monomial(n):
    f = make_integrand(f"x^{n}", n, 0, 1)
    err = error_actual(qn(n), f, Interval(0.0, 1.0, 1))
    assert err == pytest.approx((-1) ** (n + 1) * float(bernoulli_number(n)), abs=1e-13)


def test_error_actual_example():
    f = make_integrand("exp(x)", 2, 0, 1)
    assert abs(error_actual(qn(2), f, Interval(0.0, 1.0, 10))) <= math.e / 1200


def test_trapezoid_bit_for_bit():
    f = make_integrand("exp(x)*cos(x)", 2, 0, 3)
    for N in (1, 2, 7, 64, 1000):
        iv = Interval(0.0, 3.0, N)
        xs = iv.nodes()
        y = np.exp(xs) * np.cos(xs)
        half = float(F(iv.h) / 2)
        manual = pairwise_sum(list(half * y[:-1] + half * y[1:]))
        assert composite_apply(qn(2), f, iv).value == manual


def test_pairwise_sum():
    assert pairwise_sum([]) == 0.0
    assert pairwise_sum([1.0, 1e100, 1.0, -1e100]) == 0.0
    vals = [0.1] * 1000
    assert abs(pairwise_sum(vals) - 100.0) < 1e-12


def test_workers_do_not_change_value():
    f = make_integrand("exp(sin(x))", 3, 0, 1)
    iv = Interval(0.0, 1.0, 500)
    v1 = composite_apply(pn(3), f, iv, workers=1).value
    v4 = composite_apply(pn(3), f, iv, workers=4).value
    assert v1 == v4


def test_env_threads(monkeypatch):
    from telequad.quad import default_workers

    monkeypatch.setenv("TELEQUAD_THREADS", "3")
    assert default_workers() == 3
    monkeypatch.setenv("TELEQUAD_THREADS", "0")
    assert default_workers() == 1


@pytest.mark.parametrize("n", [2, 4, 6])
def test_convergence_order_qn_exp(n):
    f = make_integrand("exp(x)", n, 0, 1)
    Ns = [2, 4, 8, 16, 32, 64]
    ref = math.e - 1
    errs = [abs(ref - composite_apply(qn(n), f, Interval(0.0, 1.0, N)).value) for N in Ns]
    slope = np.polyfit(np.log(Ns), np.log(errs), 1)[0]
    assert -slope >= n - 0.1


def test_report_json():
    f = make_integrand("exp(x)", 2, 0, 1)
    rep = composite_apply(qn(2), f, Interval(0.0, 1.0, 10))
    rep = rep.with_reference(reference_integral(f, 0.0, 1.0, 1e-13))
    out = json.loads(json.dumps(rep.to_json()))
    assert out["actual_error"] == rep.reference - rep.value
    assert {"value", "bound", "reference", "actual_error", "degree", "c", "N", "a", "b"} <= set(out)
    assert out["c"] == "-1/12" and out["N"] == 10
