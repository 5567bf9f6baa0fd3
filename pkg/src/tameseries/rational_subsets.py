"""Rational subsets of the nonnegative integers and finite partitions.

A rational subset is a union of residue classes modulo a period h,
adjusted by finitely many added and removed indices. Construction
normalizes the period to the minimal one and canonicalizes the
exception sets, so equality of values is equality of subsets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .polynomials import Poly
from .rational_functions import RationalFunctionRep


def _minimal_period(h: int, residues: frozenset[int]) -> tuple[int, frozenset[int]]:
    for div in sorted(d for d in range(1, h + 1) if h % d == 0):
        if all((r + div) % h in residues for r in residues):
            return div, frozenset(r % div for r in residues)
    return h, residues


@dataclass(frozen=True)
class RationalSubset:
    period: int
    residues: frozenset[int]
    added: frozenset[int]
    removed: frozenset[int]

    @classmethod
    def make(cls, period: int, residues, added=(), removed=()) -> "RationalSubset":
        if period < 1:
            raise ValueError("period must be positive")
        res = frozenset(r % period for r in residues)
        add = frozenset(int(a) for a in added)
        rem = frozenset(int(b) for b in removed)
        if any(a < 0 for a in add) or any(b < 0 for b in rem):
            raise ValueError("exception indices must be nonnegative")
        if add & rem:
            raise ValueError(f"indices both added and removed: {sorted(add & rem)}")
        h, res = _minimal_period(period, res)
        add = frozenset(a for a in add if a % h not in res)
        rem = frozenset(b for b in rem if b % h in res)
        return cls(h, res, add, rem)

    @classmethod
    def residue_class(cls, e: int, h: int) -> "RationalSubset":
        return cls.make(h, {e})

    @classmethod
    def everything(cls) -> "RationalSubset":
        return cls.make(1, {0})

    def membership(self, n: int) -> bool:
        if n in self.added:
            return True
        if n in self.removed:
            return False
        return n % self.period in self.residues

    __contains__ = membership

    def generating_function(self) -> RationalFunctionRep:
        """Exact rational function whose expansion is the indicator series."""
        h = self.period
        base = Poly([1 if r in self.residues else 0 for r in range(h)])
        correction = Poly.zero()
        for a in self.added:
            correction = correction + Poly.monomial(a)
        for b in self.removed:
            correction = correction - Poly.monomial(b)
        one_minus = Poly([1] + [0] * (h - 1) + [-1])
        return RationalFunctionRep(base + correction * one_minus, one_minus).reduce()

    def complement(self) -> "RationalSubset":
        comp = frozenset(range(self.period)) - self.residues
        return RationalSubset.make(self.period, comp, added=self.removed, removed=self.added)

    def intersect_class(self, e: int, h: int) -> "RationalSubset":
        """Intersection with the residue class e modulo h."""
        lcm = self.period * h // math.gcd(self.period, h)
        res = frozenset(
            r for r in range(lcm) if r % self.period in self.residues and r % h == e % h
        )
        add = frozenset(a for a in self.added if a % h == e % h)
        rem = frozenset(b for b in self.removed if b % h == e % h)
        return RationalSubset.make(lcm, res, added=add, removed=rem)

    def to_json(self) -> dict:
        return {
            "h": self.period,
            "residues": sorted(self.residues),
            "added": sorted(self.added),
            "removed": sorted(self.removed),
        }

    @classmethod
    def from_json(cls, data: dict) -> "RationalSubset":
        return cls.make(
            data["h"], data.get("residues", ()), data.get("added", ()), data.get("removed", ())
        )


def membership(subset: RationalSubset, n: int) -> bool:
    return subset.membership(n)


def generating_function(subset: RationalSubset) -> RationalFunctionRep:
    return subset.generating_function()


@dataclass(frozen=True)
class RationalPartition:
    parts: tuple[RationalSubset, ...]
    exceptional: frozenset[int]

    def validate(self, window: int | None = None) -> None:
        """Check disjointness and covering outside the exceptional set."""
        if window is None:
            period = partition_period(self)
            bound = max(self.exceptional) + 1 if self.exceptional else 0
            for part in self.parts:
                for s in (part.added, part.removed):
                    if s:
                        bound = max(bound, max(s) + 1)
            window = 4 * period + bound
        for n in range(window):
            if n in self.exceptional:
                continue
            hits = sum(1 for part in self.parts if part.membership(n))
            if hits != 1:
                raise ValueError(f"index {n} is covered {hits} times")


def standard_partition(h: int) -> RationalPartition:
    if h < 1:
        raise ValueError("period must be positive")
    parts = tuple(RationalSubset.residue_class(e, h) for e in range(h))
    return RationalPartition(parts, frozenset())


def partition_period(partition: RationalPartition) -> int:
    period = 1
    for part in partition.parts:
        period = period * part.period // math.gcd(period, part.period)
    return period
