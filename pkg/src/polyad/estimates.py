"""Numerical certification of the factorial inequalities.

Three scalar inequalities control the size of the closed-form
coefficients; all involve a free constant C > 0 whose admissible range
is found empirically, never claimed globally:

* the floor-profile inequality pair for beta_ell
  (size bound and squared reduced-order-factorial bound),
* the reduced-order-factorial bound
  c**|gamma| * gamma! <= C**(order(beta)+order(b)) * beta_dot * b_dot
  with c = C/(8e),
* the coefficient bound derived from it, relating the closed-form
  coefficient to C**(order(beta)+order(b)) * k! / (c**|gamma| gamma!
  beta_bar b_bar).

Every inequality is evaluated on two paths with independent failure
modes: an overflow-free exact path (big integers and Fractions built
from the binary values of the float constants) and a log-space path
accumulating lgamma terms with fsum.  The exact path is used whenever
both sides stay below 1e5000; the factorials involved overflow doubles
almost immediately, which is why a plain float path does not exist.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .enumeration import IndexQuadruple
from .polyindex import Polyindex1, PolyindexD, gamma_of

__all__ = [
    "EstimateConfig",
    "beta_ell",
    "check_beta_ell",
    "beta_ell_logs",
    "check_redordfac",
    "redordfac_logs",
    "coefficient_bound_check",
    "coefficient_bound_logs",
    "find_min_C",
]

_EXACT_LOG10_LIMIT = 5000.0


@dataclass(frozen=True)
class EstimateConfig:
    """The constant C with its derived companions.

    epsilon defaults to 0.5, the midpoint of the allowed interval (0, 1):
    it balances the degradation of c_double_prime against the size slack
    in the floor-profile inequality.
    """

    C: float
    epsilon: float = 0.5

    def __post_init__(self) -> None:
        if self.C <= 0:
            raise ValueError("C must be positive")
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")

    @property
    def c_prime(self) -> float:
        return self.C / (4 * (1 + self.epsilon))

    @property
    def c_double_prime(self) -> float:
        return self.C / (4 * math.e * (1 + self.epsilon))

    @property
    def c(self) -> float:
        return self.C / (8 * math.e)


def beta_ell(ell: int, C: float) -> Polyindex1:
    """The floor profile: multiplicity floor(ell / (C**i (i+1))) at degree i.

    Requires C > 1 so that the support is finite; the entry at degree 0
    is always ell itself.
    """
    if ell < 1:
        raise ValueError("ell must be >= 1")
    if C <= 1:
        raise ValueError("C must exceed 1 (otherwise the support is not finite)")
    entries = {}
    i = 0
    scale = 1.0
    while scale * (i + 1) <= ell:
        m = int(ell // (scale * (i + 1)))
        if m:
            entries[i] = m
        i += 1
        scale *= C
    return Polyindex1.from_map(entries)


# -- log-space helpers -------------------------------------------------


def _log_reduced_order_factorial(p: Polyindex1 | PolyindexD) -> float:
    if isinstance(p, PolyindexD):
        return math.fsum(_log_reduced_order_factorial(c) for c in p.components)
    return math.fsum(
        math.lgamma(m + 1) + m * math.log(i + 1) for i, m in p.pairs
    )


def _log_order_factorial(p: Polyindex1 | PolyindexD) -> float:
    if isinstance(p, PolyindexD):
        return math.fsum(_log_order_factorial(c) for c in p.components)
    return math.fsum(
        math.lgamma(m + 1) + m * math.lgamma(i + 2) for i, m in p.pairs
    )


def _log_factorial_ratio(p: Polyindex1 | PolyindexD) -> float:
    if isinstance(p, PolyindexD):
        return math.fsum(_log_factorial_ratio(c) for c in p.components)
    return math.fsum(m * math.lgamma(i + 1) for i, m in p.pairs)


def _exact_feasible(*logs: float) -> bool:
    return all(lg / math.log(10) < _EXACT_LOG10_LIMIT for lg in logs)


# -- beta_ell inequalities ----------------------------------------------


def beta_ell_logs(ell: int, config: EstimateConfig) -> tuple[float, float]:
    """Logs of (lhs, rhs) of the squared factorial inequality for beta_ell."""
    p = beta_ell(ell, config.C)
    lhs = 2 * p.order * math.log(config.C) + 2 * _log_reduced_order_factorial(p)
    rhs = 2 * p.size * math.log(config.c_double_prime) + math.lgamma(2 * p.size + 1)
    return lhs, rhs


def check_beta_ell(ell: int, config: EstimateConfig) -> tuple[bool, bool]:
    """Evaluate the two floor-profile inequalities.

    Returns (size_ok, factorial_ok):
      size_ok       |beta_ell| <= (1 + epsilon) * ell
      factorial_ok  C**(2 order) * (reduced order factorial)**2
                    >= c_double_prime**(2 size) * (2 size)!
    """
    p = beta_ell(ell, config.C)
    size_ok = Fraction(p.size) <= Fraction(1 + config.epsilon) * ell

    lhs_log, rhs_log = beta_ell_logs(ell, config)
    if _exact_feasible(lhs_log, rhs_log):
        lhs = Fraction(config.C) ** (2 * p.order) * p.reduced_order_factorial() ** 2
        rhs = Fraction(config.c_double_prime) ** (2 * p.size) * math.factorial(2 * p.size)
        factorial_ok = lhs >= rhs
    else:
        factorial_ok = lhs_log >= rhs_log
    return size_ok, factorial_ok


# -- reduced-order-factorial inequality ----------------------------------


def redordfac_logs(
    beta: PolyindexD, b: PolyindexD, config: EstimateConfig
) -> tuple[float, float]:
    """Logs of (lhs, rhs) of c**|gamma| gamma! <= C**orders beta_dot b_dot."""
    gamma = gamma_of(beta, b)
    lhs = gamma.size * math.log(config.c) + math.fsum(
        math.lgamma(o + 1) for o in gamma.orders
    )
    rhs = (beta.order + b.order) * math.log(config.C) + (
        _log_reduced_order_factorial(beta) + _log_reduced_order_factorial(b)
    )
    return lhs, rhs


def check_redordfac(beta: PolyindexD, b: PolyindexD, config: EstimateConfig) -> bool:
    if beta.dim != b.dim:
        raise ValueError("dimension mismatch")
    lhs_log, rhs_log = redordfac_logs(beta, b, config)
    if not _exact_feasible(lhs_log, rhs_log):
        return lhs_log <= rhs_log
    gamma = gamma_of(beta, b)
    lhs = Fraction(config.c) ** gamma.size * gamma.factorial()
    rhs = (
        Fraction(config.C) ** (beta.order + b.order)
        * beta.reduced_order_factorial()
        * b.reduced_order_factorial()
    )
    return lhs <= rhs


# -- coefficient bound ----------------------------------------------------


def coefficient_bound_logs(
    q: IndexQuadruple, config: EstimateConfig
) -> tuple[float, float]:
    """Logs of the cross-multiplied coefficient bound.

    The bound  k!/(a'' b'' ...) <= C**orders k! / (c**|g| g! beta_bar b_bar)
    is equivalent (k! cancels, all factors positive) to

      c**|gamma| gamma! beta_bar b_bar
        <= C**(order(beta)+order(b)) alpha'' beta'' a'' b''.
    """
    gamma = gamma_of(q.beta, q.b)
    lhs = (
        gamma.size * math.log(config.c)
        + math.fsum(math.lgamma(o + 1) for o in gamma.orders)
        + _log_factorial_ratio(q.beta)
        + _log_factorial_ratio(q.b)
    )
    rhs = (q.beta.order + q.b.order) * math.log(config.C) + math.fsum(
        (
            _log_order_factorial(q.alpha),
            _log_order_factorial(q.beta),
            _log_order_factorial(q.a),
            _log_order_factorial(q.b),
        )
    )
    return lhs, rhs


def coefficient_bound_check(q: IndexQuadruple, config: EstimateConfig) -> bool:
    lhs_log, rhs_log = coefficient_bound_logs(q, config)
    if not _exact_feasible(lhs_log, rhs_log):
        return lhs_log <= rhs_log
    gamma = gamma_of(q.beta, q.b)
    lhs = (
        Fraction(config.c) ** gamma.size
        * gamma.factorial()
        * q.beta.factorial_ratio()
        * q.b.factorial_ratio()
    )
    rhs = (
        Fraction(config.C) ** (q.beta.order + q.b.order)
        * q.alpha.order_factorial()
        * q.beta.order_factorial()
        * q.a.order_factorial()
        * q.b.order_factorial()
    )
    return lhs <= rhs


# -- empirical threshold ---------------------------------------------------


def _pairs_stats(pairs: Iterable[tuple[PolyindexD, PolyindexD]]):
    stats = []
    for beta, b in pairs:
        gamma = gamma_of(beta, b)
        stats.append(
            (
                gamma.size,
                math.fsum(math.lgamma(o + 1) for o in gamma.orders),
                beta.order + b.order,
                _log_reduced_order_factorial(beta) + _log_reduced_order_factorial(b),
            )
        )
    return stats


def _quads_stats(quads: Iterable[IndexQuadruple]):
    stats = []
    for q in quads:
        gamma = gamma_of(q.beta, q.b)
        lhs_fixed = (
            math.fsum(math.lgamma(o + 1) for o in gamma.orders)
            + _log_factorial_ratio(q.beta)
            + _log_factorial_ratio(q.b)
        )
        rhs_fixed = math.fsum(
            (
                _log_order_factorial(q.alpha),
                _log_order_factorial(q.beta),
                _log_order_factorial(q.a),
                _log_order_factorial(q.b),
            )
        )
        stats.append((gamma.size, lhs_fixed, q.beta.order + q.b.order, rhs_fixed))
    return stats


def find_min_C(
    ells: Sequence[int],
    pairs: Sequence[tuple[PolyindexD, PolyindexD]] = (),
    quads: Sequence[IndexQuadruple] = (),
    epsilon: float = 0.5,
    tol: float = 1e-3,
    hi_cap: float = 2.0**30,
) -> float:
    """Smallest C (within tol) passing every check on the scan domain.

    Bisection over the predicate "all beta_ell / reduced-order-factorial /
    coefficient checks pass at C".  The scan uses the log-space path for
    speed; the returned threshold is the passing endpoint of the final
    bracket.  The threshold is empirical for the given domain only.
    """
    if not (ells or pairs or quads):
        raise ValueError("scan domain is empty")
    pair_stats = _pairs_stats(pairs)
    quad_stats = _quads_stats(quads)

    def passes(C: float) -> bool:
        config = EstimateConfig(C, epsilon)
        log_c = math.log(config.c)
        log_C = math.log(C)
        for g_size, lhs_fixed, ord_sum, rhs_fixed in pair_stats:
            if g_size * log_c + lhs_fixed > ord_sum * log_C + rhs_fixed:
                return False
        for g_size, lhs_fixed, ord_sum, rhs_fixed in quad_stats:
            if g_size * log_c + lhs_fixed > ord_sum * log_C + rhs_fixed:
                return False
        for ell in ells:
            size_ok, factorial_ok = check_beta_ell(ell, config)
            if not (size_ok and factorial_ok):
                return False
        return True

    lo = 1.0 + 1e-6
    hi = 16.0
    while not passes(hi):
        hi *= 2
        if hi > hi_cap:
            raise ValueError(f"no passing C found up to {hi_cap}")
    if passes(lo):
        return lo
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if passes(mid):
            hi = mid
        else:
            lo = mid
    return hi
