"""Exact symbolic iteration of g -> om' * (g' - 2 m x g) for the 1-d oracle.

The iterates of D = v d/dx on the dispersion targets factor as
g_n(x) * E(x)**m with E the Gaussian weight, so only the algebraic part
g_n needs symbolic treatment (see dispersion.symbolic_dv_oracle).  For
dispersion relations built from polynomials and square roots of
rational functions, every g_n lives in the ring

    QQ(x)[r_1, ..., r_m] / (r_i**2 - inner_i(x)),

where r_i stands for sqrt(inner_i).  Elements are stored as maps from
square-free monomials in the r_i to univariate rational coefficients.
The derivation is diagonal in this basis (r_i' = inner_i' r_i /
(2 inner_i)) and multiplication folds r_i**2 back into the coefficient,
so the whole chain needs only univariate `cancel` calls.  The generic
multivariate GCDs over radical extensions that dominate a naive sympy
chain never occur.
"""

from __future__ import annotations

from typing import Dict, Tuple

import sympy

Monomial = Tuple[int, ...]
State = Dict[Monomial, sympy.Expr]

_HALF = sympy.Rational(1, 2)


def extract_radicals(expr: sympy.Expr, x: sympy.Symbol) -> list[sympy.Expr]:
    """All sqrt subexpressions involving x; nested radicals are rejected."""
    rads = sorted(
        {p for p in expr.atoms(sympy.Pow) if p.exp == _HALF and p.base.has(x)},
        key=sympy.default_sort_key,
    )
    for r in rads:
        inner_rads = [p for p in r.base.atoms(sympy.Pow) if p.exp == _HALF and p.base.has(x)]
        if inner_rads:
            raise ValueError("nested radicals are not supported by the oracle ring")
    return rads


class RadicalChain:
    """The differential ring described in the module docstring."""

    def __init__(self, x: sympy.Symbol, radicals: list[sympy.Expr]):
        self.x = x
        self.radicals = radicals
        self.inners = [r.base for r in radicals]
        self.m = len(radicals)
        self._dlog_half = [
            sympy.cancel(sympy.diff(inner, x) / (2 * inner)) for inner in self.inners
        ]

    # -- construction -----------------------------------------------------

    def from_expr(self, expr: sympy.Expr) -> State:
        """Collect an expression that is polynomial in the radicals."""
        syms = [sympy.Dummy(f"r{i}", positive=True) for i in range(self.m)]
        swapped = sympy.expand(expr.xreplace(dict(zip(self.radicals, syms))))
        if swapped.has(sympy.Pow) and any(
            p.base in syms and (p.exp < 0 or p.exp != int(p.exp))
            for p in swapped.atoms(sympy.Pow)
        ):
            raise ValueError("expression is not polynomial in its radicals")
        state: State = {}
        terms = swapped.as_ordered_terms() if swapped != 0 else []
        for term in terms:
            indep, dep = term.as_independent(*syms, as_Mul=True)
            coeff = indep
            key = [0] * self.m
            if dep != 1:
                for base, e in dep.as_powers_dict().items():
                    i = syms.index(base)
                    coeff *= self.inners[i] ** (int(e) // 2)
                    key[i] = int(e) % 2
            k = tuple(key)
            state[k] = state.get(k, 0) + coeff

        return self._tidy(state)

    @staticmethod
    def _tidy(state: State) -> State:
        out = {}
        for key, coeff in state.items():
            c = sympy.cancel(coeff)
            if c != 0:
                out[key] = c
        return out

    # -- ring operations ----------------------------------------------------

    def derive(self, state: State) -> State:
        out: State = {}
        for key, coeff in state.items():
            extra = sympy.Integer(0)
            for i, e in enumerate(key):
                if e:
                    extra += self._dlog_half[i]
            out[key] = sympy.diff(coeff, self.x) + coeff * extra
        return self._tidy(out)

    def add(self, a: State, b: State) -> State:
        out = dict(a)
        for key, coeff in b.items():
            out[key] = out.get(key, 0) + coeff
        return self._tidy(out)

    def scale(self, factor: sympy.Expr, state: State) -> State:
        return self._tidy({k: factor * v for k, v in state.items()})

    def mul(self, a: State, b: State) -> State:
        out: State = {}
        for ka, ca in a.items():
            for kb, cb in b.items():
                coeff = ca * cb
                key = []
                for i in range(self.m):
                    e = ka[i] + kb[i]
                    coeff *= self.inners[i] ** (e // 2)
                    key.append(e % 2)
                k = tuple(key)
                out[k] = out.get(k, 0) + coeff
        return self._tidy(out)

    # -- evaluation ------------------------------------------------------------

    def evaluator(self, state: State):
        """High-precision callable p -> value (p an mpmath float)."""
        import mpmath

        parts = [
            (key, sympy.lambdify(self.x, coeff, modules="mpmath"))
            for key, coeff in state.items()
        ]
        inner_fns = [
            sympy.lambdify(self.x, inner, modules="mpmath") for inner in self.inners
        ]

        def call(p):
            rads = [mpmath.sqrt(fn(p)) for fn in inner_fns]
            total = mpmath.mpf(0)
            for key, fn in parts:
                term = fn(p)
                for i, e in enumerate(key):
                    if e:
                        term *= rads[i]
                total += term
            return total

        return call
