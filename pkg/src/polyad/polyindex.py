"""Exact arithmetic over polyindices.

A 1-dimensional polyindex is a finitely supported map from a degree
i >= 0 to a multiplicity >= 1.  It records how many factors of each
derivative order appear in a commutator monomial.  The canonical form
is a tuple of (degree, multiplicity) pairs, sorted by degree, with no
zero multiplicities stored; equality and hashing are therefore exact
and deterministic.

A d-dimensional polyindex is a tuple of d one-dimensional components,
one per coordinate axis.

Three factorial-like invariants are attached to every polyindex:

  order_factorial          prod m_i! * ((i+1)!)**m_i
  reduced_order_factorial  prod m_i! * (i+1)**m_i
  factorial_ratio          prod (i!)**m_i

They satisfy, exactly and for every polyindex,

  order_factorial == reduced_order_factorial * factorial_ratio.

Everything in this module is pure: all values are immutable and all
operations return new values, so they are freely shareable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

__all__ = [
    "Polyindex1",
    "PolyindexD",
    "MultiIndex",
    "gamma_of",
]

# Canonical storage: ((degree, multiplicity), ...) sorted by degree.
Pairs = tuple[tuple[int, int], ...]


def _canonical(entries: Iterable[tuple[int, int]]) -> Pairs:
    merged: dict[int, int] = {}
    for i, m in entries:
        if i < 0:
            raise ValueError(f"negative degree {i}")
        if m < 0:
            raise ValueError(f"negative multiplicity {m} at degree {i}")
        if m:
            merged[i] = merged.get(i, 0) + m
    return tuple(sorted(merged.items()))


@dataclass(frozen=True)
class Polyindex1:
    """A finitely supported map degree -> multiplicity (1-dimensional)."""

    pairs: Pairs = ()

    def __post_init__(self) -> None:
        if self.pairs != _canonical(self.pairs):
            raise ValueError(f"pairs not in canonical form: {self.pairs!r}")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero() -> "Polyindex1":
        return Polyindex1()

    @staticmethod
    def delta(i: int) -> "Polyindex1":
        """The polyindex with a single entry of multiplicity 1 at degree i."""
        return Polyindex1(_canonical([(i, 1)]))

    @staticmethod
    def from_map(entries: Mapping[int, int] | Iterable[tuple[int, int]]) -> "Polyindex1":
        if isinstance(entries, Mapping):
            entries = entries.items()
        return Polyindex1(_canonical(entries))

    # -- basic queries ---------------------------------------------------

    def multiplicity(self, i: int) -> int:
        for j, m in self.pairs:
            if j == i:
                return m
        return 0

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.pairs)

    @property
    def order(self) -> int:
        """sum m_i * (i+1)."""
        return sum(m * (i + 1) for i, m in self.pairs)

    @property
    def size(self) -> int:
        """sum m_i, the number of factors."""
        return sum(m for _, m in self.pairs)

    # -- factorial invariants (exact big integers) -----------------------

    def order_factorial(self) -> int:
        out = 1
        for i, m in self.pairs:
            out *= math.factorial(m) * math.factorial(i + 1) ** m
        return out

    def reduced_order_factorial(self) -> int:
        out = 1
        for i, m in self.pairs:
            out *= math.factorial(m) * (i + 1) ** m
        return out

    def factorial_ratio(self) -> int:
        out = 1
        for i, m in self.pairs:
            out *= math.factorial(i) ** m
        return out

    # -- bump / drop -----------------------------------------------------

    def bump(self, i: int) -> "Polyindex1":
        """Increment the multiplicity at degree i (order grows by i+1)."""
        return Polyindex1(_canonical(self.pairs + ((i, 1),)))

    def drop(self, i: int) -> "Polyindex1":
        """Decrement the multiplicity at degree i.

        Dropping an absent degree is a caller bug: rewrite rules weight
        every drop by the multiplicity, so a zero multiplicity must have
        vanished before this is reached.
        """
        m = self.multiplicity(i)
        if m < 1:
            raise ValueError(f"drop at degree {i}: multiplicity is 0")
        return Polyindex1(_canonical([(j, n - 1 if j == i else n) for j, n in self.pairs]))

    def __add__(self, other: "Polyindex1") -> "Polyindex1":
        return Polyindex1(_canonical(self.pairs + other.pairs))

    # -- serialization ---------------------------------------------------

    def to_pairs(self) -> list[list[int]]:
        """JSON encoding: sorted [degree, multiplicity] pairs."""
        return [[i, m] for i, m in self.pairs]

    @staticmethod
    def from_pairs(data: Iterable[Iterable[int]]) -> "Polyindex1":
        return Polyindex1(_canonical((int(i), int(m)) for i, m in data))

    def sort_key(self) -> Pairs:
        return self.pairs

    def __repr__(self) -> str:
        inner = ", ".join(f"{i}: {m}" for i, m in self.pairs)
        return "Polyindex1({" + inner + "})"


@dataclass(frozen=True)
class PolyindexD:
    """A d-dimensional polyindex: one Polyindex1 per coordinate axis."""

    components: tuple[Polyindex1, ...]

    def __post_init__(self) -> None:
        if not self.components:
            raise ValueError("dimension must be >= 1")

    @staticmethod
    def zero(dim: int) -> "PolyindexD":
        return PolyindexD((Polyindex1.zero(),) * dim)

    @staticmethod
    def delta(i: int, axis: int, dim: int) -> "PolyindexD":
        return PolyindexD.zero(dim).bump(i, axis)

    @staticmethod
    def from_components(components: Iterable[Polyindex1]) -> "PolyindexD":
        return PolyindexD(tuple(components))

    @property
    def dim(self) -> int:
        return len(self.components)

    def component(self, axis: int) -> Polyindex1:
        return self.components[axis]

    @property
    def order(self) -> int:
        return sum(c.order for c in self.components)

    @property
    def size(self) -> int:
        return sum(c.size for c in self.components)

    def order_factorial(self) -> int:
        return math.prod(c.order_factorial() for c in self.components)

    def reduced_order_factorial(self) -> int:
        return math.prod(c.reduced_order_factorial() for c in self.components)

    def factorial_ratio(self) -> int:
        return math.prod(c.factorial_ratio() for c in self.components)

    def _check_axis(self, axis: int) -> None:
        if not 0 <= axis < self.dim:
            raise ValueError(f"axis {axis} out of range for dimension {self.dim}")

    def bump(self, i: int, axis: int) -> "PolyindexD":
        self._check_axis(axis)
        comps = list(self.components)
        comps[axis] = comps[axis].bump(i)
        return PolyindexD(tuple(comps))

    def drop(self, i: int, axis: int) -> "PolyindexD":
        self._check_axis(axis)
        comps = list(self.components)
        comps[axis] = comps[axis].drop(i)
        return PolyindexD(tuple(comps))

    def __add__(self, other: "PolyindexD") -> "PolyindexD":
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} != {other.dim}")
        return PolyindexD(tuple(a + b for a, b in zip(self.components, other.components)))

    def to_triples(self) -> list[list[int]]:
        """JSON encoding: [degree, axis, multiplicity] triples, sorted."""
        triples = [
            [i, axis, m]
            for axis, comp in enumerate(self.components)
            for i, m in comp.pairs
        ]
        triples.sort()
        return triples

    @staticmethod
    def from_triples(data: Iterable[Iterable[int]], dim: int) -> "PolyindexD":
        per_axis: list[list[tuple[int, int]]] = [[] for _ in range(dim)]
        for i, axis, m in data:
            if not 0 <= axis < dim:
                raise ValueError(f"axis {axis} out of range for dimension {dim}")
            per_axis[int(axis)].append((int(i), int(m)))
        return PolyindexD(tuple(Polyindex1(_canonical(p)) for p in per_axis))

    def sort_key(self) -> tuple[Pairs, ...]:
        return tuple(c.pairs for c in self.components)

    def __repr__(self) -> str:
        return f"PolyindexD({list(self.components)!r})"


@dataclass(frozen=True)
class MultiIndex:
    """A d-tuple of derivative orders, one per axis."""

    orders: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(o < 0 for o in self.orders):
            raise ValueError(f"negative order in {self.orders}")

    @staticmethod
    def zero(dim: int) -> "MultiIndex":
        return MultiIndex((0,) * dim)

    @staticmethod
    def unit(axis: int, dim: int) -> "MultiIndex":
        orders = [0] * dim
        orders[axis] = 1
        return MultiIndex(tuple(orders))

    @property
    def dim(self) -> int:
        return len(self.orders)

    @property
    def size(self) -> int:
        return sum(self.orders)

    def factorial(self) -> int:
        return math.prod(math.factorial(o) for o in self.orders)

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        return MultiIndex(tuple(a + b for a, b in zip(self.orders, other.orders)))

    def __repr__(self) -> str:
        return f"MultiIndex{self.orders!r}"


def gamma_of(beta: PolyindexD, b: PolyindexD) -> MultiIndex:
    """Induced multiindex: per-axis sizes of beta and b, added.

    This is the derivative order carried by the convolution kernel that
    the pair (beta, b) selects; its total size equals size(beta) + size(b).
    """
    if beta.dim != b.dim:
        raise ValueError(f"dimension mismatch: {beta.dim} != {b.dim}")
    return MultiIndex(
        tuple(bc.size + cc.size for bc, cc in zip(beta.components, b.components))
    )
