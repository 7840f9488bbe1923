"""Expression parsing, symbolic differentiation and integrands.

Grammar (usual precedence, ``^`` binds tightest and is right-associative,
unary minus binds tighter than ``*``/``/``)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' unary)?
    atom    := number | 'x' | 'pi' | 'e' | name '(' expr ')' | '(' expr ')'

Exponents must fold to a nonnegative integer constant. Functions: exp, sin,
cos, log.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, Union

import numpy as np

from .errors import (
    EvaluationDomainError,
    ExprSyntaxError,
    InsufficientDerivativeOrder,
    UnknownFunction,
)

__all__ = [
    "Expr",
    "Const",
    "Named",
    "Var",
    "Neg",
    "Add",
    "Sub",
    "Mul",
    "Div",
    "Pow",
    "Func",
    "FUNCTIONS",
    "parse_expr",
    "differentiate",
    "simplify",
    "to_text",
    "compile_expr",
    "Integrand",
    "make_integrand",
]

FUNCTIONS = ("exp", "sin", "cos", "log")
NAMED = {"pi": math.pi, "e": math.e}


class Expr:
    """Base class of expression nodes (all immutable dataclasses)."""

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Const(Expr):
    value: Fraction


@dataclass(frozen=True)
class Named(Expr):
    name: str


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exp: int


@dataclass(frozen=True)
class Func(Expr):
    name: str
    arg: Expr


ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))
X = Var()


# --------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ExprSyntaxError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.take()
        if val != value or kind != "op":
            raise ExprSyntaxError(f"expected {value!r}", pos)

    def parse(self) -> Expr:
        e = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {val!r}", pos)
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            e = Add(e, rhs) if op == "+" else Sub(e, rhs)
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.unary()
            e = Mul(e, rhs) if op == "*" else Div(e, rhs)
        return e

    def unary(self) -> Expr:
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            pos = self.take()[2]
            ex = simplify(self.unary())
            if (
                not isinstance(ex, Const)
                or ex.value.denominator != 1
                or ex.value < 0
            ):
                raise ExprSyntaxError("exponent must be a nonnegative integer", pos + 1)
            return Pow(base, int(ex.value))
        return base

    def atom(self) -> Expr:
        kind, val, pos = self.take()
        if kind == "num":
            return Const(Fraction(val))
        if kind == "name":
            if val == "x":
                return X
            if self.peek()[:2] == ("op", "("):
                if val not in FUNCTIONS:
                    raise UnknownFunction(val, pos)
                self.take()
                arg = self.expr()
                self.expect(")")
                return Func(val, arg)
            if val in NAMED:
                return Named(val)
            raise ExprSyntaxError(f"unknown name {val!r}", pos)
        if (kind, val) == ("op", "("):
            e = self.expr()
            self.expect(")")
            return e
        what = "end of input" if kind == "end" else repr(val)
        raise ExprSyntaxError(f"unexpected {what}", pos)


def parse_expr(text: str) -> Expr:
    """Parse ``text`` into an (unsimplified) expression tree."""
    return _Parser(text).parse()


# --------------------------------------------------------------------------
# simplification: smart constructors applied bottom-up


def _c(v) -> Const:
    return Const(Fraction(v))


def mk_neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return _c(-a.value)
    if isinstance(a, Neg):
        return a.arg
    if isinstance(a, Mul) and isinstance(a.left, Const):
        return mk_mul(_c(-a.left.value), a.right)
    return Neg(a)


def mk_add(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return _c(a.value + b.value)
    if a == ZERO:
        return b
    if b == ZERO:
        return a
    return Add(a, b)


def mk_sub(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return _c(a.value - b.value)
    if b == ZERO:
        return a
    if a == ZERO:
        return mk_neg(b)
    return Sub(a, b)


def mk_mul(a: Expr, b: Expr) -> Expr:
    if isinstance(b, Const) and not isinstance(a, Const):
        a, b = b, a
    if isinstance(a, Const):
        if isinstance(b, Const):
            return _c(a.value * b.value)
        if a.value == 0:
            return ZERO
        if a.value == 1:
            return b
        if a.value == -1:
            return mk_neg(b)
        if isinstance(b, Mul) and isinstance(b.left, Const):
            return mk_mul(_c(a.value * b.left.value), b.right)
    return Mul(a, b)


def mk_div(a: Expr, b: Expr) -> Expr:
    if isinstance(b, Const) and b.value != 0:
        return mk_mul(_c(1 / b.value), a)
    if a == ZERO:
        return ZERO
    return Div(a, b)


def mk_pow(a: Expr, n: int) -> Expr:
    if n == 0:
        return ONE
    if n == 1:
        return a
    if isinstance(a, Const):
        return _c(a.value**n)
    if isinstance(a, Pow):
        return mk_pow(a.base, a.exp * n)
    return Pow(a, n)


def mk_func(name: str, a: Expr) -> Expr:
    if a == ZERO:
        if name in ("exp", "cos"):
            return ONE
        if name == "sin":
            return ZERO
    if name == "log" and a == ONE:
        return ZERO
    return Func(name, a)


def simplify(e: Expr) -> Expr:
    """Constant folding and 0/1 identities; idempotent."""
    if isinstance(e, (Const, Named, Var)):
        return e
    if isinstance(e, Neg):
        return mk_neg(simplify(e.arg))
    if isinstance(e, Add):
        return mk_add(simplify(e.left), simplify(e.right))
    if isinstance(e, Sub):
        return mk_sub(simplify(e.left), simplify(e.right))
    if isinstance(e, Mul):
        return mk_mul(simplify(e.left), simplify(e.right))
    if isinstance(e, Div):
        return mk_div(simplify(e.left), simplify(e.right))
    if isinstance(e, Pow):
        return mk_pow(simplify(e.base), e.exp)
    if isinstance(e, Func):
        return mk_func(e.name, simplify(e.arg))
    raise TypeError(f"not an expression: {e!r}")


# --------------------------------------------------------------------------
# differentiation


def differentiate(e: Expr) -> Expr:
    """d/dx of ``e``, lightly simplified."""
    return _diff(simplify(e))


def _diff(e: Expr) -> Expr:
    if isinstance(e, (Const, Named)):
        return ZERO
    if isinstance(e, Var):
        return ONE
    if isinstance(e, Neg):
        return mk_neg(_diff(e.arg))
    if isinstance(e, Add):
        return mk_add(_diff(e.left), _diff(e.right))
    if isinstance(e, Sub):
        return mk_sub(_diff(e.left), _diff(e.right))
    if isinstance(e, Mul):
        u, v = e.left, e.right
        return mk_add(mk_mul(_diff(u), v), mk_mul(u, _diff(v)))
    if isinstance(e, Div):
        u, v = e.left, e.right
        num = mk_sub(mk_mul(_diff(u), v), mk_mul(u, _diff(v)))
        return mk_div(num, mk_pow(v, 2))
    if isinstance(e, Pow):
        du = _diff(e.base)
        return mk_mul(mk_mul(_c(e.exp), mk_pow(e.base, e.exp - 1)), du)
    if isinstance(e, Func):
        u = e.arg
        du = _diff(u)
        if e.name == "exp":
            return mk_mul(mk_func("exp", u), du)
        if e.name == "sin":
            return mk_mul(mk_func("cos", u), du)
        if e.name == "cos":
            return mk_neg(mk_mul(mk_func("sin", u), du))
        if e.name == "log":
            return mk_div(du, u)
    raise TypeError(f"not an expression: {e!r}")


# --------------------------------------------------------------------------
# printing

_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _prec(e: Expr) -> int:
    if isinstance(e, (Add, Sub)):
        return _PREC_ADD
    if isinstance(e, (Mul, Div)):
        return _PREC_MUL
    if isinstance(e, Neg):
        return _PREC_NEG
    if isinstance(e, Pow):
        return _PREC_POW
    if isinstance(e, Const):
        if e.value.denominator != 1:
            return _PREC_MUL
        return _PREC_NEG if e.value < 0 else _PREC_ATOM
    return _PREC_ATOM


def _wrap(e: Expr, min_prec: int) -> str:
    s = to_text(e)
    return f"({s})" if _prec(e) < min_prec else s


def to_text(e: Expr) -> str:
    """Render in the input grammar; ``parse_expr`` reads it back."""
    if isinstance(e, Const):
        return str(e.value)
    if isinstance(e, Named):
        return e.name
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Neg):
        return "-" + _wrap(e.arg, _PREC_NEG)
    if isinstance(e, (Add, Sub)):
        op = "+" if isinstance(e, Add) else "-"
        return f"{_wrap(e.left, _PREC_ADD)} {op} {_wrap(e.right, _PREC_ADD + 1)}"
    if isinstance(e, (Mul, Div)):
        op = "*" if isinstance(e, Mul) else "/"
        return f"{_wrap(e.left, _PREC_MUL)}{op}{_wrap(e.right, _PREC_MUL + 1)}"
    if isinstance(e, Pow):
        return f"{_wrap(e.base, _PREC_ATOM)}^{e.exp}"
    if isinstance(e, Func):
        return f"{e.name}({to_text(e.arg)})"
    raise TypeError(f"not an expression: {e!r}")


# --------------------------------------------------------------------------
# evaluation


def _log(v):
    if np.any(np.asarray(v) <= 0):
        raise EvaluationDomainError("log of nonpositive value")
    return np.log(v)


_UFUNCS = {"exp": np.exp, "sin": np.sin, "cos": np.cos, "log": _log}


def compile_expr(e: Expr) -> Callable:
    """Return an evaluator accepting a float or an ndarray of abscissae."""
    if isinstance(e, Const):
        v = float(e.value)
        return lambda x: v + 0.0 * np.asarray(x, dtype=float)
    if isinstance(e, Named):
        v = NAMED[e.name]
        return lambda x: v + 0.0 * np.asarray(x, dtype=float)
    if isinstance(e, Var):
        return lambda x: np.asarray(x, dtype=float)
    if isinstance(e, Neg):
        f = compile_expr(e.arg)
        return lambda x: -f(x)
    if isinstance(e, Pow):
        f, n = compile_expr(e.base), e.exp
        return lambda x: f(x) ** n
    if isinstance(e, Func):
        f, g = compile_expr(e.arg), _UFUNCS[e.name]
        return lambda x: g(f(x))
    f, g = compile_expr(e.left), compile_expr(e.right)
    if isinstance(e, Add):
        return lambda x: f(x) + g(x)
    if isinstance(e, Sub):
        return lambda x: f(x) - g(x)
    if isinstance(e, Mul):
        return lambda x: f(x) * g(x)
    if isinstance(e, Div):

        def div(x):
            d = g(x)
            if np.any(d == 0):
                raise EvaluationDomainError("division by zero")
            return f(x) / d

        return div
    raise TypeError(f"not an expression: {e!r}")


def _scalarize(fn: Callable) -> Callable:
    def call(x):
        y = fn(x)
        if np.ndim(y) == 0:
            return float(y)
        return y

    return call


class Integrand:
    """A function on ``[a, b]`` with evaluators for ``f, f', ..., f^(max_order)``.

    Evaluators take a float or an ndarray and must be pure.
    """

    def __init__(
        self,
        evaluators: Sequence[Callable],
        a: float,
        b: float,
        exprs: Sequence[Expr] | None = None,
        label: str = "",
    ):
        if not evaluators:
            raise ValueError("need at least the order-0 evaluator")
        self._evaluators = tuple(_scalarize(f) for f in evaluators)
        self.a = float(a)
        self.b = float(b)
        self.exprs = tuple(exprs) if exprs is not None else None
        self.label = label

    @classmethod
    def from_functions(cls, funcs: Sequence[Callable], a: float = 0.0, b: float = 1.0, label: str = ""):
        return cls(funcs, a, b, label=label)

    @property
    def max_order(self) -> int:
        return len(self._evaluators) - 1

    def require(self, order: int) -> None:
        if order > self.max_order:
            raise InsufficientDerivativeOrder(
                f"need derivative of order {order}, integrand provides up to {self.max_order}"
            )

    def derivative(self, k: int) -> Callable:
        self.require(k)
        return self._evaluators[k]

    def __call__(self, x, k: int = 0):
        return self.derivative(k)(x)

    def derivative_table(self) -> list[str]:
        if self.exprs is None:
            return []
        return [to_text(e) for e in self.exprs]


Source = Union[str, Expr]


def make_integrand(e: Source, max_order: int, a: float, b: float, probe: int = 33) -> Integrand:
    """Integrand whose derivative table comes from repeated differentiation.

    Each order is probed at ``probe`` points of ``[a, b]`` so that domain
    errors surface at construction.
    """
    if max_order < 0:
        raise ValueError("max_order must be >= 0")
    text = e if isinstance(e, str) else to_text(e)
    expr = simplify(parse_expr(e) if isinstance(e, str) else e)
    exprs = [expr]
    for _ in range(max_order):
        exprs.append(differentiate(exprs[-1]))
    evaluators = [compile_expr(x) for x in exprs]
    if probe and b >= a:
        xs = np.linspace(a, b, probe)
        for k, f in enumerate(evaluators):
            with np.errstate(all="ignore"):
                y = f(xs)
            if not np.all(np.isfinite(y)):
                raise EvaluationDomainError(f"order-{k} derivative not finite on [{a}, {b}]")
    return Integrand(evaluators, a, b, exprs=exprs, label=text)
