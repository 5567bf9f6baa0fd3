"""Growth of free products of finite cyclic groups.

Two independent routes to the same counts. growth_series composes the
factors' spherical series through the reciprocal rule and returns an
exact rational function for the cumulative counts. bfs_counts walks
normal forms with a dynamic program over (last factor, total length)
and never touches rational functions; it exists to check the first
route, not to be fast.

Generator convention: each factor Z/pZ contributes the generator pair
{a, a^-1}, so the nontrivial element a^k has length min(k, p-k). Other
conventions change the series; this one makes [2,3] come out as
(1+t)(1+2t)/((1-2t^2)(1-t)).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .polynomials import Poly
from .rational_functions import RationalFunctionRep

BFS_LENGTH_GUARD = 20


@dataclass(frozen=True)
class FreeProductSpec:
    orders: tuple[int, ...]

    def __post_init__(self):
        if len(self.orders) < 1:
            raise ValueError("need at least one factor")
        if any(p < 2 for p in self.orders):
            raise ValueError("factor orders must be at least 2")

    @classmethod
    def make(cls, orders) -> "FreeProductSpec":
        return cls(tuple(int(p) for p in orders))

    def to_json(self) -> dict:
        return {"orders": list(self.orders)}


def spherical_series(order: int) -> Poly:
    """Counts of elements of Z/order by word length over {a, a^-1}."""
    counts: dict[int, int] = {}
    for k in range(order):
        w = min(k, order - k)
        counts[w] = counts.get(w, 0) + 1
    return Poly([counts.get(w, 0) for w in range(max(counts) + 1)])


def growth_series(spec: FreeProductSpec) -> RationalFunctionRep:
    """Cumulative growth series of the free product, exact and reduced.

    The spherical series of a free product satisfies
    1/sigma = sum_i 1/sigma_i - (n-1); cumulative counts divide by 1-t.
    """
    factors = [spherical_series(p) for p in spec.orders]
    product = Poly.one()
    for f in factors:
        product = product * f
    acc = Poly.zero()
    for i in range(len(factors)):
        partial = Poly.one()
        for j, f in enumerate(factors):
            if j != i:
                partial = partial * f
        acc = acc + partial
    denominator = acc - (len(factors) - 1) * product
    one_minus_t = Poly([1, -1])
    return RationalFunctionRep(product, denominator * one_minus_t).reduce()


def _syllable_length_counts(order: int) -> dict[int, int]:
    counts: dict[int, int] = {}
    for k in range(1, order):
        w = min(k, order - k)
        counts[w] = counts.get(w, 0) + 1
    return counts


def bfs_counts(spec: FreeProductSpec, n_max: int) -> list[int]:
    """Cumulative element counts by length, up to n_max (guarded).

    State (last factor, length) with syllable-multiset transitions;
    word content never materializes.
    """
    if n_max > BFS_LENGTH_GUARD:
        raise ValueError(f"n_max {n_max} exceeds the guard {BFS_LENGTH_GUARD}")
    factor_syllables = [_syllable_length_counts(p) for p in spec.orders]
    nfac = len(spec.orders)
    # spherical[l][i] = words of length l ending in a factor-i syllable
    spherical = [[0] * nfac for _ in range(n_max + 1)]
    for length in range(1, n_max + 1):
        for i in range(nfac):
            total = 0
            for w, mult in factor_syllables[i].items():
                if w > length:
                    continue
                prev = length - w
                if prev == 0:
                    total += mult
                else:
                    total += mult * sum(
                        spherical[prev][j] for j in range(nfac) if j != i
                    )
            spherical[length][i] = total
    cumulative = []
    running = 1  # the empty word
    cumulative.append(running)
    for length in range(1, n_max + 1):
        running += sum(spherical[length])
        cumulative.append(running)
    return cumulative
