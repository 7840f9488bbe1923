import json
import random
from fractions import Fraction as F
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from telequad.errors import DegenerateInterval, WrongLeadingCoefficient
from telequad.exactpoly import RationalPoly, bernoulli_number, bernoulli_poly
from telequad.scheme import Variant, endpoint_weights, is_telescoping, make_scheme, pn, qn


def test_is_telescoping_examples():
    assert is_telescoping(bernoulli_poly(3) / 6 + 7)
    assert is_telescoping(RationalPoly([5, 1]))
    assert not is_telescoping(RationalPoly([0, 0, F(1, 2)]))


def test_wrong_leading_coefficient():
    with pytest.raises(WrongLeadingCoefficient):
        is_telescoping(RationalPoly([0, 0, 1]))
    with pytest.raises(WrongLeadingCoefficient):
        is_telescoping(RationalPoly([3]))


def test_make_scheme_examples():
    s = make_scheme(2, F(-1, 12))
    assert s.poly == RationalPoly([0, F(-1, 2), F(1, 2)])
    assert s.variant is Variant.QN
    s4 = make_scheme(4, 0)
    assert s4.poly == bernoulli_poly(4) / 24 and s4.variant is Variant.PN
    s3 = make_scheme(3, 0)
    assert s3.variant is Variant.PN and s3.is_pn and s3.is_qn
    assert qn(3).variant is Variant.PN
    assert make_scheme(5, F(1, 7)).variant is Variant.CUSTOM
    assert qn(1).poly == RationalPoly([0, 1]) and qn(1).variant is Variant.QN


@given(st.integers(1, 12), st.fractions(max_denominator=1000).filter(lambda c: abs(c) < 100))
def test_constructive_direction(n, c):
    s = make_scheme(n, c)
    assert s.poly.degree == n and s.poly.leading == F(1, factorial(n))
    assert is_telescoping(s.poly)


def test_exclusive_direction():
    rng = random.Random(7)
    for n in range(2, 9):
        base = bernoulli_poly(n) / factorial(n)
        for k in range(1, n + 1):
            power = n - k
            for _ in range(5):
                delta = F(rng.choice([-1, 1]) * rng.randint(1, 50), rng.randint(1, 50))
                p = base + RationalPoly.monomial(power, delta)
                assert is_telescoping(p) is (k == n), (n, k, delta)


def test_weights_trapezoid_examples():
    w = endpoint_weights(qn(2), 0.0, 1.0)
    assert (w.w_a[0], w.w_b[0]) == (F(1, 2), F(1, 2))
    assert (w.w_a[1], w.w_b[1]) == (0, 0)
    w = endpoint_weights(pn(2), 0.0, 1.0)
    assert (w.w_a[0], w.w_b[0]) == (F(1, 2), F(1, 2))
    assert (w.w_a[1], w.w_b[1]) == (F(1, 12), F(-1, 12))


@pytest.mark.parametrize("n", range(1, 10))
@pytest.mark.parametrize("c", [F(0), F(1, 7), F(-3, 2)])
def test_function_weights_sum_to_width(n, c):
    w = endpoint_weights(make_scheme(n, c), -0.5, 2.0)
    assert w.w_a[0] + w.w_b[0] == F(5, 2)


@pytest.mark.parametrize("n", range(2, 12))
def test_qn_drops_top_derivative(n):
    w = endpoint_weights(qn(n), 0.0, 1.0)
    assert w.w_a[n - 1] == 0 and w.w_b[n - 1] == 0


def test_weights_scale_with_width():
    w1 = endpoint_weights(pn(4), 0.0, 1.0)
    w2 = endpoint_weights(pn(4), 1.0, 1.5)
    for k in range(4):
        assert w2.w_a[k] == w1.w_a[k] * F(1, 2) ** (k + 1)


def test_degenerate_interval():
    with pytest.raises(DegenerateInterval):
        endpoint_weights(pn(2), 1.0, 1.0)
    with pytest.raises(DegenerateInterval):
        endpoint_weights(pn(2), 1.0, 0.0)


def test_weights_json():
    out = endpoint_weights(pn(2), 0.0, 1.0).to_json()
    assert json.loads(json.dumps(out)) == {
        "degree": 2,
        "c": "0",
        "f_weights": [[0, 0.5, 0.5, "1/2", "1/2"], [1, 1 / 12, -1 / 12, "1/12", "-1/12"]],
    }


def test_qn_constant():
    for n in range(1, 10):
        assert qn(n).constant == -bernoulli_number(n) / factorial(n)
