"""Closed-form commutator expansions and the one-step rewrite oracle.

A formal expansion at level k is an exact integer-coefficient linear
combination of monomials, each keyed by an index quadruple
(alpha, beta, a, b) of total order k.  The convolution kernel inside a
monomial is fully determined by (beta, b), so the quadruple is the whole
key.

Two independent constructions are provided and must agree exactly:

* ``closed_expansion`` assigns each quadruple the closed-form
  coefficient k! / (alpha'' beta'' a'' b'') where x'' is the order
  factorial of x (an exact division; a remainder is an internal bug).

* ``adjoint_step`` applies the one-step commutation rewrite to every
  monomial of a level-k expansion and collects the level-(k+1) result.
  Its eight rules each raise the total order by exactly one:

  (1) shift a degree of alpha from i to i+1, weighted by alpha(i);
  (2) the same for each component of beta;
  (3) bump alpha at degree 0;
  (4) bump a at degree 0;
  (5) bump beta at degree 0 in each axis;
  (6) bump b at degree 0 in each axis;
  (7) shift a degree of a, weighted;
  (8) shift a degree of b per axis, weighted.

``verify_induction`` iterates the rewrite from the level-0 base and
compares against the closed form, level by level, as exact maps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

from .enumeration import IndexQuadruple, index_set
from .polyindex import Polyindex1, PolyindexD

__all__ = [
    "FormalExpansion",
    "IntegralityError",
    "closed_coefficient",
    "closed_expansion",
    "adjoint_step",
    "verify_induction",
    "InductionReport",
]


class IntegralityError(ArithmeticError):
    """The closed-form coefficient failed to divide exactly (a bug, never data)."""


def closed_coefficient(q: IndexQuadruple) -> int:
    """k! / (alpha'' beta'' a'' b'') with k the total order of q, exactly."""
    k = q.total_order
    denom = (
        q.alpha.order_factorial()
        * q.beta.order_factorial()
        * q.a.order_factorial()
        * q.b.order_factorial()
    )
    quotient, remainder = divmod(math.factorial(k), denom)
    if remainder:
        raise IntegralityError(f"non-integer coefficient at {q!r}")
    return quotient


@dataclass
class FormalExpansion:
    """All level-k monomials with their exact integer coefficients."""

    dim: int
    level: int
    terms: dict[IndexQuadruple, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for q, c in self.terms.items():
            if c < 1:
                raise ValueError(f"non-positive coefficient {c} at {q!r}")
            if q.total_order != self.level:
                raise ValueError(
                    f"term of order {q.total_order} in level-{self.level} expansion"
                )

    @staticmethod
    def base(dim: int) -> "FormalExpansion":
        """The level-0 expansion: the bare interaction term."""
        return FormalExpansion(dim, 0, {IndexQuadruple.zero(dim): 1})

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient_sum(self) -> int:
        return sum(self.terms.values())

    def sorted_items(self) -> list[tuple[IndexQuadruple, int]]:
        """Terms in canonical (deterministic) order for serialization."""
        return sorted(self.terms.items(), key=lambda item: item[0].sort_key())

    def to_json(self) -> list[dict]:
        return [
            {**q.to_json(), "coeff": str(c)}
            for q, c in self.sorted_items()
        ]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FormalExpansion):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.level == other.level
            and self.terms == other.terms
        )


def closed_expansion(d: int, k: int) -> FormalExpansion:
    """One term per index quadruple of order k, closed-form coefficients."""
    terms = {q: closed_coefficient(q) for q in index_set(d, k)}
    return FormalExpansion(d, k, terms)


def _rewrite_contributions(
    q: IndexQuadruple, coeff: int, d: int
) -> Iterator[tuple[IndexQuadruple, int]]:
    alpha, beta, a, b = q.alpha, q.beta, q.a, q.b
    # Degree shifts are weighted by the multiplicity they consume, so a
    # drop is never attempted on an absent degree.
    for i, m in alpha.pairs:
        yield IndexQuadruple(alpha.drop(i).bump(i + 1), beta, a, b), coeff * m
    for axis in range(d):
        for i, m in beta.component(axis).pairs:
            yield IndexQuadruple(alpha, beta.drop(i, axis).bump(i + 1, axis), a, b), coeff * m
    yield IndexQuadruple(alpha.bump(0), beta, a, b), coeff
    yield IndexQuadruple(alpha, beta, a.bump(0), b), coeff
    for axis in range(d):
        yield IndexQuadruple(alpha, beta.bump(0, axis), a, b), coeff
        yield IndexQuadruple(alpha, beta, a, b.bump(0, axis)), coeff
    for i, m in a.pairs:
        yield IndexQuadruple(alpha, beta, a.drop(i).bump(i + 1), b), coeff * m
    for axis in range(d):
        for i, m in b.component(axis).pairs:
            yield IndexQuadruple(alpha, beta, a, b.drop(i, axis).bump(i + 1, axis)), coeff * m


def adjoint_step(e: FormalExpansion) -> FormalExpansion:
    """Apply the one-step commutation rewrite to every term of e.

    Contributions are collected by key with big-integer addition; the
    merge is associative and commutative, so any processing order (or a
    parallel split of the source terms) yields the same expansion.
    """
    out: dict[IndexQuadruple, int] = {}
    for q, coeff in e.terms.items():
        for key, contribution in _rewrite_contributions(q, coeff, e.dim):
            out[key] = out.get(key, 0) + contribution
    return FormalExpansion(e.dim, e.level + 1, out)


@dataclass(frozen=True)
class InductionStep:
    level: int
    term_count: int
    matches: bool
    first_mismatch: str | None


@dataclass(frozen=True)
class InductionReport:
    dim: int
    max_order: int
    steps: tuple[InductionStep, ...]

    @property
    def passed(self) -> bool:
        return all(s.matches for s in self.steps)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "max_order": self.max_order,
            "passed": self.passed,
            "steps": [
                {
                    "level": s.level,
                    "term_count": s.term_count,
                    "matches": s.matches,
                    "first_mismatch": s.first_mismatch,
                }
                for s in self.steps
            ],
        }


def _first_mismatch(got: FormalExpansion, want: FormalExpansion) -> str | None:
    keys = set(got.terms) | set(want.terms)
    for q in sorted(keys, key=lambda x: x.sort_key()):
        cg = got.terms.get(q, 0)
        cw = want.terms.get(q, 0)
        if cg != cw:
            return f"{q.to_json()}: rewrite={cg} closed-form={cw}"
    return None


def verify_induction(d: int, max_order: int) -> InductionReport:
    """Check that the rewrite iterated from level 0 equals the closed form.

    The comparison is exact map equality at every level up to max_order.
    A discrepancy is reported, not raised.
    """
    if max_order < 1:
        raise ValueError("max_order must be >= 1")
    steps = []
    current = FormalExpansion.base(d)
    for k in range(1, max_order + 1):
        current = adjoint_step(current)
        expected = closed_expansion(d, k)
        matches = current == expected
        steps.append(
            InductionStep(
                level=k,
                term_count=len(expected),
                matches=matches,
                first_mismatch=None if matches else _first_mismatch(current, expected),
            )
        )
        if not matches:
            break
    return InductionReport(d, max_order, tuple(steps))
