import math

import numpy as np
import pytest

from telequad.calculus import Integrand, make_integrand

ACCEPTANCE_LINES: list[str] = []

E = math.e


def _exp():
    return Integrand.from_functions([np.exp] * 9, label="exp")


def _sin():
    cycle = [np.sin, np.cos, lambda x: -np.sin(x), lambda x: -np.cos(x)]
    return Integrand.from_functions([cycle[k % 4] for k in range(9)], label="sin")


def _xexp():
    return Integrand.from_functions(
        [(lambda k: lambda x: (x + k) * np.exp(x))(k) for k in range(9)], label="x*exp(x)"
    )


def _runge():
    return make_integrand("1/(1+x^2)", 8, 0.0, 1.0)


def _xexp_l2(n):
    def F(x):
        u = x + n
        return math.exp(2 * x) * (u * u / 2 - u / 2 + 0.25)

    return math.sqrt(F(1.0) - F(0.0))


# ||f^(n)||_s on [0, 1] for even n, by hand; keyed by s
DERIV_NORMS = {
    "exp": lambda n: {math.inf: E, 1.0: E - 1, 2.0: math.sqrt((E * E - 1) / 2)},
    "sin": lambda n: {
        math.inf: math.sin(1.0),
        1.0: 1 - math.cos(1.0),
        2.0: math.sqrt(0.5 - math.sin(2.0) / 4),
    },
    "x*exp(x)": lambda n: {math.inf: (1 + n) * E, 1.0: n * E - (n - 1), 2.0: _xexp_l2(n)},
}


@pytest.fixture(scope="session")
def corpus():
    """The three smooth integrands used by the bound-validity grids."""
    return [_exp(), _sin(), _xexp()]


@pytest.fixture(scope="session")
def path_corpus():
    return [_exp(), _sin(), _runge()]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
