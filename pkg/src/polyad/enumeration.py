"""Enumeration of polyindices, weak compositions and summation index sets.

Polyindices of a fixed order k are in bijection with the integer
partitions of k: a partition is encoded by letting the multiplicity at
degree i-1 count the parts equal to i.  The partition function p(k) is
computed independently by Euler's pentagonal-number recurrence, which
shares no code with the enumeration path and acts as its oracle.

The summation index set for the commutator expansion at order k in
dimension d consists of quadruples (alpha, beta, a, b) whose orders form
a weak composition of k over 2d+2 slots.  Enumeration order is
lexicographic in (composition tuple, per-slot partition index), which
keeps golden files stable.  Iterators are lazy; counts are available in
closed form without enumerating.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .polyindex import Polyindex1, PolyindexD

__all__ = [
    "IndexQuadruple",
    "partitions",
    "polyindices_of_order",
    "partition_count",
    "partition_bound",
    "weak_compositions",
    "index_set",
    "index_set_size",
    "sequence_count_identity",
    "terms_bound_report",
]


def partitions(k: int) -> Iterator[tuple[int, ...]]:
    """Partitions of k as non-increasing part tuples, largest part first."""
    if k < 0:
        raise ValueError("k must be >= 0")

    def gen(remaining: int, cap: int, prefix: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            yield prefix
            return
        for part in range(min(cap, remaining), 0, -1):
            yield from gen(remaining - part, part, prefix + (part,))

    yield from gen(k, k, ())


@lru_cache(maxsize=None)
def polyindices_of_order(k: int) -> tuple[Polyindex1, ...]:
    """All 1-dimensional polyindices of order k, in deterministic order.

    There are exactly partition_count(k) of them: the multiplicity at
    degree i-1 counts the parts of size i in the matching partition.
    """
    out = []
    for parts in partitions(k):
        mult: dict[int, int] = {}
        for part in parts:
            mult[part - 1] = mult.get(part - 1, 0) + 1
        out.append(Polyindex1.from_map(mult))
    return tuple(out)


@lru_cache(maxsize=None)
def partition_count(k: int) -> int:
    """p(k) by the pentagonal-number recurrence (exact, independent oracle)."""
    if k < 0:
        return 0
    if k == 0:
        return 1
    total = 0
    j = 1
    while True:
        g1 = j * (3 * j - 1) // 2
        g2 = j * (3 * j + 1) // 2
        if g1 > k and g2 > k:
            break
        sign = 1 if j % 2 else -1
        term = partition_count(k - g1) if g1 <= k else 0
        term += partition_count(k - g2) if g2 <= k else 0
        total += sign * term
        j += 1
    return total


def partition_bound(k: int) -> float:
    """The elementary upper bound exp(pi * sqrt(2k/3)); strict for k >= 1."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return math.exp(math.pi * math.sqrt(2 * k / 3))


def weak_compositions(k: int, m: int) -> Iterator[tuple[int, ...]]:
    """All m-tuples of naturals summing to k, lexicographically ascending."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if m == 1:
        yield (k,)
        return
    for first in range(k + 1):
        for rest in weak_compositions(k - first, m - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class IndexQuadruple:
    """One summation index (alpha, beta, a, b) of the expansion."""

    alpha: Polyindex1
    beta: PolyindexD
    a: Polyindex1
    b: PolyindexD

    def __post_init__(self) -> None:
        if self.beta.dim != self.b.dim:
            raise ValueError("beta and b must have the same dimension")

    @property
    def dim(self) -> int:
        return self.beta.dim

    @property
    def total_order(self) -> int:
        return self.alpha.order + self.beta.order + self.a.order + self.b.order

    def sort_key(self):
        return (
            self.alpha.sort_key(),
            self.beta.sort_key(),
            self.a.sort_key(),
            self.b.sort_key(),
        )

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha.to_pairs(),
            "beta": self.beta.to_triples(),
            "a": self.a.to_pairs(),
            "b": self.b.to_triples(),
        }

    @staticmethod
    def zero(dim: int) -> "IndexQuadruple":
        return IndexQuadruple(
            Polyindex1.zero(), PolyindexD.zero(dim), Polyindex1.zero(), PolyindexD.zero(dim)
        )


def index_set(d: int, k: int) -> Iterator[IndexQuadruple]:
    """All quadruples of total order k in dimension d, lazily.

    Slot order within a composition: alpha, a, then the d components of
    beta, then the d components of b.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    slots = 2 * d + 2
    for comp in weak_compositions(k, slots):
        pools = [polyindices_of_order(kj) for kj in comp]

        def assemble(chosen: tuple[Polyindex1, ...]) -> IndexQuadruple:
            alpha, a = chosen[0], chosen[1]
            beta = PolyindexD(tuple(chosen[2 : 2 + d]))
            b = PolyindexD(tuple(chosen[2 + d : 2 + 2 * d]))
            return IndexQuadruple(alpha, beta, a, b)

        yield from _product_map(pools, assemble)


def _product_map(pools: Sequence[Sequence[Polyindex1]], assemble) -> Iterator[IndexQuadruple]:
    def rec(idx: int, chosen: tuple[Polyindex1, ...]) -> Iterator[IndexQuadruple]:
        if idx == len(pools):
            yield assemble(chosen)
            return
        for item in pools[idx]:
            yield from rec(idx + 1, chosen + (item,))

    yield from rec(0, ())


def index_set_size(d: int, k: int) -> int:
    """|index_set(d, k)| via the composition-product formula (no enumeration)."""
    slots = 2 * d + 2
    return sum(
        math.prod(partition_count(kj) for kj in comp)
        for comp in weak_compositions(k, slots)
    )


def sequence_count_identity(d: int, k: int) -> tuple[int, int]:
    """Monotone-sequence count, two ways: direct enumeration and binomial.

    Counts sequences 0 <= k_1 <= ... <= k_{2d+1} <= k.  The first entry
    is the brute-force count, the second is C(k + 2d + 1, 2d + 1).
    """
    length = 2 * d + 1
    from itertools import combinations_with_replacement

    direct = sum(1 for _ in combinations_with_replacement(range(k + 1), length))
    return direct, math.comb(k + 2 * d + 1, 2 * d + 1)


def terms_bound_report(d: int, k_max: int, exhaustive_limit: int = 2_000_000) -> list[dict]:
    """Per-order growth table for the summation index set.

    For each k <= k_max reports the exact count (formula; additionally
    cross-checked by exhaustive enumeration while counts stay below
    exhaustive_limit), the smallest geometric base g with
    count(k') <= g**k' for all 1 <= k' <= k, and the combinatorial
    upper bound  exp(pi*sqrt(2k/3)*(2d+2)) * C(k+2d+1, 2d+1).
    """
    rows: list[dict] = []
    fitted = 0.0
    for k in range(k_max + 1):
        count = index_set_size(d, k)
        enumerated = None
        if count <= exhaustive_limit:
            enumerated = sum(1 for _ in index_set(d, k))
        if k >= 1:
            fitted = max(fitted, count ** (1.0 / k))
        bound = (
            math.comb(k + 2 * d + 1, 2 * d + 1)
            if k == 0
            else partition_bound(k) ** (2 * d + 2) * math.comb(k + 2 * d + 1, 2 * d + 1)
        )
        rows.append(
            {
                "d": d,
                "k": k,
                "count": count,
                "enumerated": enumerated,
                "fitted_base": fitted if k >= 1 else None,
                "upper_bound": bound,
            }
        )
    return rows
