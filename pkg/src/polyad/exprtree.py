"""Small expression trees over {+, -, *, /, pow, exp, sqrt, const, coord}.

The dispersion relations are stored as trees so that one definition
serves four consumers:

* pointwise evaluation (scalars or numpy arrays, for grids),
* symbolic partial differentiation (returns a new tree),
* truncated-Taylor ("jet") evaluation, where each coordinate is a
  series in the flow time and every node operates on series,
* conversion to sympy (for the independent high-precision oracle).

Series are 1-d float arrays c[0..N] representing sum c_n s**n truncated
at order N.  The recurrences for exp, sqrt, division and real powers
are the classical power-series ones; integer powers use repeated
multiplication so that a zero constant term is harmless.

Trees are JSON-serializable in prefix notation, e.g.
["+", ["pow", ["coord", 0], 2], 1]  for  k_0**2 + 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

__all__ = [
    "Expr",
    "Const",
    "Coord",
    "Add",
    "Sub",
    "Mul",
    "Div",
    "Pow",
    "Exp",
    "Sqrt",
    "evaluate",
    "diff",
    "jet",
    "to_sympy",
    "parse_prefix",
    "to_prefix",
]


class Expr:
    """Base marker class; concrete nodes are frozen dataclasses."""

    __slots__ = ()


@dataclass(frozen=True)
class Const(Expr):
    value: float


@dataclass(frozen=True)
class Coord(Expr):
    axis: int


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
    exponent: float


@dataclass(frozen=True)
class Exp(Expr):
    arg: Expr


@dataclass(frozen=True)
class Sqrt(Expr):
    arg: Expr


# -- pointwise evaluation -------------------------------------------------


def evaluate(expr: Expr, point: Sequence):
    """Evaluate at a point; coordinates may be scalars or numpy arrays."""
    match expr:
        case Const(value):
            return value
        case Coord(axis):
            return point[axis]
        case Add(left, right):
            return evaluate(left, point) + evaluate(right, point)
        case Sub(left, right):
            return evaluate(left, point) - evaluate(right, point)
        case Mul(left, right):
            return evaluate(left, point) * evaluate(right, point)
        case Div(left, right):
            return evaluate(left, point) / evaluate(right, point)
        case Pow(base, exponent):
            return evaluate(base, point) ** exponent
        case Exp(arg):
            return np.exp(evaluate(arg, point))
        case Sqrt(arg):
            return np.sqrt(evaluate(arg, point))
    raise TypeError(f"not an expression node: {expr!r}")


# -- symbolic differentiation ----------------------------------------------

_ZERO = Const(0.0)
_ONE = Const(1.0)


def _is_const(e: Expr, v: float) -> bool:
    return isinstance(e, Const) and e.value == v


def _add(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0.0):
        return b
    if _is_const(b, 0.0):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    return Add(a, b)


def _sub(a: Expr, b: Expr) -> Expr:
    if _is_const(b, 0.0):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    return Sub(a, b)


def _mul(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0.0) or _is_const(b, 0.0):
        return _ZERO
    if _is_const(a, 1.0):
        return b
    if _is_const(b, 1.0):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    return Mul(a, b)


def diff(expr: Expr, axis: int) -> Expr:
    """Exact partial derivative with respect to coordinate `axis`."""
    match expr:
        case Const(_):
            return _ZERO
        case Coord(ax):
            return _ONE if ax == axis else _ZERO
        case Add(left, right):
            return _add(diff(left, axis), diff(right, axis))
        case Sub(left, right):
            return _sub(diff(left, axis), diff(right, axis))
        case Mul(left, right):
            return _add(_mul(diff(left, axis), right), _mul(left, diff(right, axis)))
        case Div(left, right):
            num = _sub(_mul(diff(left, axis), right), _mul(left, diff(right, axis)))
            if _is_const(num, 0.0):
                return _ZERO
            return Div(num, Pow(right, 2))
        case Pow(base, exponent):
            if exponent == 0:
                return _ZERO
            inner = diff(base, axis)
            return _mul(_mul(Const(exponent), Pow(base, exponent - 1)), inner)
        case Exp(arg):
            return _mul(Exp(arg), diff(arg, axis))
        case Sqrt(arg):
            return _mul(Div(Const(0.5), Sqrt(arg)), diff(arg, axis))
    raise TypeError(f"not an expression node: {expr!r}")


# -- truncated Taylor (jet) arithmetic --------------------------------------


def _series_const(value: float, n: int) -> np.ndarray:
    s = np.zeros(n)
    s[0] = value
    return s


def _series_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = len(a)
    out = np.zeros(n)
    for i in range(n):
        out[i] = np.dot(a[: i + 1], b[i::-1])
    return out


def _series_div(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if b[0] == 0.0:
        raise ZeroDivisionError("series division by a series with zero constant term")
    n = len(a)
    out = np.zeros(n)
    out[0] = a[0] / b[0]
    for i in range(1, n):
        out[i] = (a[i] - np.dot(b[1 : i + 1], out[i - 1 :: -1])) / b[0]
    return out


def _series_exp(a: np.ndarray) -> np.ndarray:
    n = len(a)
    out = np.zeros(n)
    out[0] = np.exp(a[0])
    for i in range(1, n):
        out[i] = np.dot(np.arange(1, i + 1) * a[1 : i + 1], out[i - 1 :: -1]) / i
    return out


def _series_sqrt(a: np.ndarray) -> np.ndarray:
    if a[0] <= 0.0:
        raise ValueError("series sqrt requires a positive constant term")
    n = len(a)
    out = np.zeros(n)
    out[0] = np.sqrt(a[0])
    for i in range(1, n):
        acc = a[i] - np.dot(out[1:i], out[i - 1 : 0 : -1])
        out[i] = acc / (2 * out[0])
    return out


def _series_pow(a: np.ndarray, p: float) -> np.ndarray:
    if p == int(p) and p >= 0:
        # Repeated multiplication tolerates a zero constant term.
        n = len(a)
        out = _series_const(1.0, n)
        for _ in range(int(p)):
            out = _series_mul(out, a)
        return out
    if a[0] <= 0.0:
        raise ValueError("fractional series power requires a positive constant term")
    n = len(a)
    out = np.zeros(n)
    out[0] = a[0] ** p
    for i in range(1, n):
        acc = 0.0
        for j in range(1, i + 1):
            acc += (p * j - (i - j)) * a[j] * out[i - j]
        out[i] = acc / (i * a[0])
    return out


def jet(expr: Expr, coords: Sequence[np.ndarray]) -> np.ndarray:
    """Evaluate the tree with each coordinate given as a truncated series."""
    n = len(coords[0])
    match expr:
        case Const(value):
            return _series_const(value, n)
        case Coord(axis):
            return np.array(coords[axis], dtype=float)
        case Add(left, right):
            return jet(left, coords) + jet(right, coords)
        case Sub(left, right):
            return jet(left, coords) - jet(right, coords)
        case Mul(left, right):
            return _series_mul(jet(left, coords), jet(right, coords))
        case Div(left, right):
            return _series_div(jet(left, coords), jet(right, coords))
        case Pow(base, exponent):
            return _series_pow(jet(base, coords), exponent)
        case Exp(arg):
            return _series_exp(jet(arg, coords))
        case Sqrt(arg):
            return _series_sqrt(jet(arg, coords))
    raise TypeError(f"not an expression node: {expr!r}")


# -- sympy bridge ------------------------------------------------------------


def to_sympy(expr: Expr, symbols: Sequence):
    """Translate the tree into a sympy expression over the given symbols."""
    import sympy

    match expr:
        case Const(value):
            return sympy.Float(value) if value != int(value) else sympy.Integer(int(value))
        case Coord(axis):
            return symbols[axis]
        case Add(left, right):
            return to_sympy(left, symbols) + to_sympy(right, symbols)
        case Sub(left, right):
            return to_sympy(left, symbols) - to_sympy(right, symbols)
        case Mul(left, right):
            return to_sympy(left, symbols) * to_sympy(right, symbols)
        case Div(left, right):
            return to_sympy(left, symbols) / to_sympy(right, symbols)
        case Pow(base, exponent):
            expo = sympy.Integer(int(exponent)) if exponent == int(exponent) else sympy.Float(exponent)
            return to_sympy(base, symbols) ** expo
        case Exp(arg):
            return sympy.exp(to_sympy(arg, symbols))
        case Sqrt(arg):
            return sympy.sqrt(to_sympy(arg, symbols))
    raise TypeError(f"not an expression node: {expr!r}")


# -- prefix notation ----------------------------------------------------------

PrefixForm = Union[int, float, list]

_BINARY = {"+": Add, "-": Sub, "*": Mul, "/": Div}


def parse_prefix(form: PrefixForm) -> Expr:
    """Build a tree from JSON prefix notation.

    Grammar: a number is a constant; ["coord", i] is coordinate i;
    ["+"|"-"|"*"|"/", a, b] are binary; ["pow", a, p] takes a numeric
    exponent; ["exp", a] and ["sqrt", a] are unary.
    """
    if isinstance(form, (int, float)):
        return Const(float(form))
    if not isinstance(form, list) or not form:
        raise ValueError(f"malformed prefix form: {form!r}")
    head = form[0]
    if head == "coord":
        return Coord(int(form[1]))
    if head in _BINARY:
        if len(form) != 3:
            raise ValueError(f"operator {head!r} expects two operands")
        return _BINARY[head](parse_prefix(form[1]), parse_prefix(form[2]))
    if head == "pow":
        return Pow(parse_prefix(form[1]), float(form[2]))
    if head == "exp":
        return Exp(parse_prefix(form[1]))
    if head == "sqrt":
        return Sqrt(parse_prefix(form[1]))
    raise ValueError(f"unknown operator {head!r}")


def to_prefix(expr: Expr) -> PrefixForm:
    match expr:
        case Const(value):
            return value
        case Coord(axis):
            return ["coord", axis]
        case Add(left, right):
            return ["+", to_prefix(left), to_prefix(right)]
        case Sub(left, right):
            return ["-", to_prefix(left), to_prefix(right)]
        case Mul(left, right):
            return ["*", to_prefix(left), to_prefix(right)]
        case Div(left, right):
            return ["/", to_prefix(left), to_prefix(right)]
        case Pow(base, exponent):
            return ["pow", to_prefix(base), exponent]
        case Exp(arg):
            return ["exp", to_prefix(arg)]
        case Sqrt(arg):
            return ["sqrt", to_prefix(arg)]
    raise TypeError(f"not an expression node: {expr!r}")
