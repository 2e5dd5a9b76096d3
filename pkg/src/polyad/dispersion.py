"""Dispersion numerics: the weighted gradient field and its derivative flow.

A dispersion pair (omega1, omega2) induces, for each total momentum xi,

  omega_xi(k) = omega1(xi - k) + omega2(k)
  v_xi(k)     = exp(-|k|**2 - |xi|**2) * grad(omega_xi)(k)
  w(k)        = (i/2) * div(v_xi)(k)

and the directional derivative D_v = i v_xi . grad.  Iterates D_v**n f
are computed by propagating a truncated Taylor jet of the flow ODE
gamma' = v_xi(gamma), gamma_0 = k, and reading off n! times the n-th
coefficient of f(gamma_s); each application of D_v contributes one
factor i, carried exactly as a quarter-turn counter.

For d = 1 an independent oracle is provided: exact symbolic iteration
g -> v * g' in sympy, evaluated in high-precision arithmetic.  The two
paths share only the input trees, not the differentiation machinery.

Growth certificates take grid maxima of |D_v**n f| against the envelope
n! <h>**(2 s2) exp(-|h|**2).  A grid maximum is a lower bound on the
true supremum, so the certificate is a consistency check on the bound
shape, not a proof.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import exprtree as et
from .exprtree import Expr
from .polyindex import Polyindex1, PolyindexD

__all__ = [
    "DispersionSpec",
    "preset",
    "load_spec",
    "omega_xi",
    "grad_omega_xi",
    "vector_field",
    "div_v",
    "w_field",
    "flow_jet",
    "dv_iterates",
    "eval_M_symbol",
    "envelope",
    "growth_certificate",
    "GrowthReport",
    "symbolic_dv_oracle",
]

_I_POW = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)


@dataclass(frozen=True)
class DispersionSpec:
    """A named analytic dispersion pair with its growth data."""

    name: str
    dim: int
    omega1: Expr
    omega2: Expr
    strip_radius: float
    s1: float
    s2: float
    growth_const: float

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.s2 <= 0 or self.s1 > self.s2:
            raise ValueError("growth exponents must satisfy s1 <= s2, s2 > 0")

    @property
    def p(self) -> float:
        return self.s2


def _quadratic(dim: int) -> Expr:
    out: Expr = et.Const(1.0)
    for axis in range(dim):
        out = et.Add(out, et.Pow(et.Coord(axis), 2))
    return out


def preset(name: str, dim: int = 1) -> DispersionSpec:
    """Built-in pairs: "parabolic" (entire) and "relativistic" (strip-limited)."""
    if name == "parabolic":
        q = _quadratic(dim)
        return DispersionSpec(name, dim, q, q, math.inf, 2.0, 2.0, 2.0)
    if name == "relativistic":
        q = et.Sqrt(_quadratic(dim))
        return DispersionSpec(name, dim, q, q, 0.45, 1.0, 1.0, 2.0)
    raise ValueError(f"unknown preset {name!r}")


def load_spec(path: str) -> DispersionSpec:
    """Load a spec from JSON; omega trees are given in prefix notation."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return DispersionSpec(
        name=data["name"],
        dim=int(data["dim"]),
        omega1=et.parse_prefix(data["omega1"]),
        omega2=et.parse_prefix(data["omega2"]),
        strip_radius=float(data.get("strip_radius", math.inf)),
        s1=float(data["s1"]),
        s2=float(data["s2"]),
        growth_const=float(data.get("growth_const", 1.0)),
    )


@lru_cache(maxsize=64)
def _first_derivs(expr: Expr, dim: int) -> tuple[Expr, ...]:
    return tuple(et.diff(expr, axis) for axis in range(dim))


@lru_cache(maxsize=64)
def _second_derivs(expr: Expr, dim: int) -> tuple[Expr, ...]:
    return tuple(et.diff(et.diff(expr, axis), axis) for axis in range(dim))


def _as_vec(x, dim: int) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if arr.shape != (dim,):
        raise ValueError(f"expected a point of dimension {dim}, got shape {arr.shape}")
    return arr


# -- pointwise fields ---------------------------------------------------------


def omega_xi(spec: DispersionSpec, xi, k) -> float:
    xi = _as_vec(xi, spec.dim)
    k = _as_vec(k, spec.dim)
    return float(et.evaluate(spec.omega1, xi - k) + et.evaluate(spec.omega2, k))


def grad_omega_xi(spec: DispersionSpec, xi, k) -> np.ndarray:
    """Gradient of omega_xi; the reflected argument flips the omega1 part's sign."""
    xi = _as_vec(xi, spec.dim)
    k = _as_vec(k, spec.dim)
    d1 = _first_derivs(spec.omega1, spec.dim)
    d2 = _first_derivs(spec.omega2, spec.dim)
    return np.array(
        [
            -et.evaluate(d1[s], xi - k) + et.evaluate(d2[s], k)
            for s in range(spec.dim)
        ]
    )


def _gaussian(xi: np.ndarray, k: np.ndarray) -> float:
    return math.exp(-float(k @ k) - float(xi @ xi))


def vector_field(spec: DispersionSpec, xi, k) -> np.ndarray:
    xi = _as_vec(xi, spec.dim)
    k = _as_vec(k, spec.dim)
    return _gaussian(xi, k) * grad_omega_xi(spec, xi, k)


def div_v(spec: DispersionSpec, xi, k) -> float:
    xi = _as_vec(xi, spec.dim)
    k = _as_vec(k, spec.dim)
    grad = grad_omega_xi(spec, xi, k)
    dd1 = _second_derivs(spec.omega1, spec.dim)
    dd2 = _second_derivs(spec.omega2, spec.dim)
    lap = sum(
        et.evaluate(dd1[s], xi - k) + et.evaluate(dd2[s], k) for s in range(spec.dim)
    )
    return _gaussian(xi, k) * float(lap - 2.0 * (k @ grad))


def w_field(spec: DispersionSpec, xi, k) -> complex:
    """(i/2) div(v_xi); purely imaginary on real inputs."""
    return 0.5j * div_v(spec, xi, k)


# -- jet-side composition -----------------------------------------------------


def _coord_series(gamma: np.ndarray) -> list[np.ndarray]:
    return [np.ascontiguousarray(gamma[:, s]) for s in range(gamma.shape[1])]


def _reflected_series(xi: np.ndarray, coords: list[np.ndarray]) -> list[np.ndarray]:
    out = []
    for s, c in enumerate(coords):
        r = -c.copy()
        r[0] += xi[s]
        out.append(r)
    return out


def _gaussian_series(spec, xi: np.ndarray, coords: list[np.ndarray]) -> np.ndarray:
    n = len(coords[0])
    arg = np.zeros(n)
    for c in coords:
        arg -= et._series_mul(c, c)
    arg[0] -= float(xi @ xi)
    return et._series_exp(arg)


def _grad_series(spec, xi, coords, refl) -> list[np.ndarray]:
    d1 = _first_derivs(spec.omega1, spec.dim)
    d2 = _first_derivs(spec.omega2, spec.dim)
    return [
        -et.jet(d1[s], refl) + et.jet(d2[s], coords) for s in range(spec.dim)
    ]


def _v_series(spec, xi: np.ndarray, gamma: np.ndarray) -> list[np.ndarray]:
    coords = _coord_series(gamma)
    refl = _reflected_series(xi, coords)
    g = _gaussian_series(spec, xi, coords)
    grad = _grad_series(spec, xi, coords, refl)
    return [et._series_mul(g, comp) for comp in grad]


def _target_series(spec, xi: np.ndarray, gamma: np.ndarray, target: str, sigma: int) -> np.ndarray:
    coords = _coord_series(gamma)
    refl = _reflected_series(xi, coords)
    if target == "omega":
        return et.jet(spec.omega1, refl) + et.jet(spec.omega2, coords)
    if target == "v":
        g = _gaussian_series(spec, xi, coords)
        grad = _grad_series(spec, xi, coords, refl)
        return et._series_mul(g, grad[sigma])
    if target == "w":
        g = _gaussian_series(spec, xi, coords)
        grad = _grad_series(spec, xi, coords, refl)
        dd1 = _second_derivs(spec.omega1, spec.dim)
        dd2 = _second_derivs(spec.omega2, spec.dim)
        lap = sum(et.jet(dd1[s], refl) + et.jet(dd2[s], coords) for s in range(spec.dim))
        for s in range(spec.dim):
            lap = lap - 2.0 * et._series_mul(coords[s], grad[s])
        # Half the divergence; the i/2 phase is attached by the caller.
        return 0.5 * et._series_mul(g, lap)
    raise ValueError(f"unknown target {target!r}")


def flow_jet(spec: DispersionSpec, xi, k, N: int) -> np.ndarray:
    """Taylor coefficients (N+1, dim) of the flow gamma_s starting at k.

    Standard jet recursion: the (n+1)-st coefficient is the n-th
    coefficient of v(gamma) divided by n+1.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    xi = _as_vec(xi, spec.dim)
    k = _as_vec(k, spec.dim)
    gamma = np.zeros((N + 1, spec.dim))
    gamma[0] = k
    for n in range(N):
        v = _v_series(spec, xi, gamma[: n + 1])
        for s in range(spec.dim):
            gamma[n + 1, s] = v[s][n] / (n + 1)
    return gamma


def dv_iterates(
    spec: DispersionSpec, xi, k, N: int, target: str = "omega", sigma: int = 0
) -> np.ndarray:
    """D_v**n applied to the target, n = 0..N, evaluated at k.

    Entry n is i**n * d^n/ds^n f(gamma_s)|_0; the w target carries one
    extra factor i from its own definition.  Entry 0 is f(k).
    """
    xi = _as_vec(xi, spec.dim)
    k = _as_vec(k, spec.dim)
    gamma = flow_jet(spec, xi, k, N)
    series = _target_series(spec, xi, gamma, target, sigma)
    offset = 1 if target == "w" else 0
    out = np.empty(N + 1, dtype=complex)
    for n in range(N + 1):
        out[n] = _I_POW[(n + offset) % 4] * math.factorial(n) * series[n]
    return out


def eval_M_symbol(
    alpha: Polyindex1, beta: PolyindexD, spec: DispersionSpec, xi, k
) -> complex:
    """The multiplier product prod (D_v**i w)**alpha(i) prod (D_v**i v_s)**beta_s(i)."""
    if beta.dim != spec.dim:
        raise ValueError("beta dimension must match the spec dimension")
    out: complex = 1.0 + 0.0j
    if alpha.pairs:
        w_iter = dv_iterates(spec, xi, k, max(alpha.support), "w")
        for i, m in alpha.pairs:
            out *= w_iter[i] ** m
    for s in range(beta.dim):
        comp = beta.component(s)
        if comp.pairs:
            v_iter = dv_iterates(spec, xi, k, max(comp.support), "v", sigma=s)
            for i, m in comp.pairs:
                out *= v_iter[i] ** m
    return out


# -- growth certificates ------------------------------------------------------


def envelope(spec: DispersionSpec, h) -> float:
    """<h>**(2 s2) * exp(-|h|**2), the pointwise growth envelope."""
    h = _as_vec(h, spec.dim)
    h2 = float(h @ h)
    return (1.0 + h2) ** spec.s2 * math.exp(-h2)


@dataclass(frozen=True)
class GrowthReport:
    spec_name: str
    target: str
    N: int
    xi_values: tuple[float, ...]
    ratios: tuple[tuple[float, ...], ...]  # per xi: (R_1, ..., R_N)
    fitted: tuple[float, ...]  # per xi: max_n R_n
    neighbor_diff: float

    def to_json(self) -> dict:
        return {
            "spec": self.spec_name,
            "target": self.target,
            "N": self.N,
            "xi": list(self.xi_values),
            "ratios": [list(r) for r in self.ratios],
            "fitted": list(self.fitted),
            "neighbor_diff": self.neighbor_diff,
        }


def growth_certificate(
    spec: DispersionSpec,
    xi_values: Sequence[float],
    grid: Iterable,
    N: int,
    target: str = "omega",
    sigma: int = 0,
) -> GrowthReport:
    """Fit the growth constant R_n = (sup |D_v**n f| / (n! envelope))**(1/n).

    The fitted constant per xi is max_n R_n over 1 <= n <= N; the
    neighbor difference of fitted constants across the xi grid is a
    continuity proxy.  Grid maxima under-estimate suprema; see module
    docstring.
    """
    points = [np.atleast_1d(np.asarray(p, dtype=float)) for p in grid]
    xis = [_as_vec(x, spec.dim) for x in xi_values]
    ratios_all = []
    fitted_all = []
    for xi in xis:
        sup = np.zeros(N + 1)
        for pt in points:
            vals = np.abs(dv_iterates(spec, xi, pt, N, target, sigma))
            env = envelope(spec, pt)
            for n in range(1, N + 1):
                sup[n] = max(sup[n], vals[n] / (math.factorial(n) * env))
        ratios = tuple(sup[n] ** (1.0 / n) for n in range(1, N + 1))
        ratios_all.append(ratios)
        fitted_all.append(max(ratios))
    neighbor = 0.0
    for a, b in zip(fitted_all, fitted_all[1:]):
        neighbor = max(neighbor, abs(a - b))
    return GrowthReport(
        spec_name=spec.name,
        target=target,
        N=N,
        xi_values=tuple(float(x[0]) if spec.dim == 1 else tuple(x) for x in xis),
        ratios=tuple(ratios_all),
        fitted=tuple(fitted_all),
        neighbor_diff=neighbor,
    )


# -- independent symbolic oracle (d = 1) ---------------------------------------


def symbolic_dv_oracle(
    spec: DispersionSpec,
    xi: float,
    points: Sequence[float],
    N: int,
    target: str = "omega",
    digits: int = 30,
) -> np.ndarray:
    """(v d/dx)**n f at the given points via exact symbolic differentiation.

    Returns a real array of shape (N+1, len(points)); the i**n phases
    (plus one extra factor for the w target) are left to the caller.
    Only d = 1 specs are supported; evaluation runs at `digits` decimal
    digits so that the float64 jet path is compared against a strictly
    more precise reference.
    """
    import mpmath
    import sympy

    from ._oracle import RadicalChain, extract_radicals

    if spec.dim != 1:
        raise ValueError("the symbolic oracle is one-dimensional")
    x = sympy.Symbol("x", real=True)
    xi_s = sympy.nsimplify(xi, rational=True)
    om = et.to_sympy(spec.omega1, [xi_s - x]) + et.to_sympy(spec.omega2, [x])

    # With E = exp(-x**2 - xi**2) and v = E * om', every iterate factors
    # as (v d/dx)**n f = g_n * E**m_n with a purely algebraic g_n:
    # differentiating g * E**m gives (g' - 2 m x g) * E**m, so
    # g_{n+1} = om' * (g_n' - 2 m_n x g_n).  The chain is run in a small
    # radical ring (see _oracle) where each step needs only univariate
    # cancellation.
    ring = RadicalChain(x, extract_radicals(om, x))
    om_state = ring.from_expr(om)
    omp_state = ring.derive(om_state)
    if target == "omega":
        g, m = om_state, 0
    elif target == "v":
        g, m = omp_state, 1
    elif target == "w":
        g = ring.scale(
            _HALF_SYM(),
            ring.add(ring.derive(omp_state), ring.scale(-2 * x, omp_state)),
        )
        m = 1
    else:
        raise ValueError(f"unknown target {target!r}")

    out = np.empty((N + 1, len(points)))
    with mpmath.workdps(digits):
        mp_points = [mpmath.mpf(float(p)) for p in points]
        gauss = [mpmath.exp(-p * p - mpmath.mpf(xi) ** 2) for p in mp_points]
        for n in range(N + 1):
            fn = ring.evaluator(g)
            for i, p in enumerate(mp_points):
                out[n, i] = float(fn(p) * gauss[i] ** m)
            if n < N:
                g = ring.mul(omp_state, ring.add(ring.derive(g), ring.scale(-2 * m * x, g)))
                m += 1
    return out


def _HALF_SYM():
    import sympy

    return sympy.Rational(1, 2)
