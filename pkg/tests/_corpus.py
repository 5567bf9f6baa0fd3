"""Seeded generators for randomized suites.

The duality corpus builds rational functions whose boundary behavior is
known by construction, not by running the code under test:

* the dominant part is N(t)/(1 - t^h/c), where N is assembled so that the
  class-restricted evaluations N^(e)(c) hit prescribed positive rationals;
  the per-class ratio limits are then ratios of those prescribed values,
  and all h boundary poles (the roots of t^h = c) carry nonzero residues,
  which is certified by an exact gcd check;
* some entries instead take their leading coefficients from a stratum
  sample, so the numerator kills part of the boundary circle and the
  reduced denominator has degree < h;
* every entry gets off-circle noise poles and holomorphic additions at
  modulus at least twice the boundary radius, added as separate rational
  terms so they cannot disturb the boundary residues.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from tameseries import Poly, RationalFunctionRep, enumerate_labels, stratum_sample
from tameseries.opposite_algebra import _cycle_poly
from tameseries.polynomials import poly_gcd


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    rep: RationalFunctionRep
    period: int
    initials: tuple[Fraction, ...]
    cycle_product: Fraction
    boundary_root_count: int  # top boundary poles after reduction


def _random_fraction(rng: random.Random, lo: int = 1, hi: int = 9) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(lo, hi))


def _minimal_period(values: list[Fraction]) -> int:
    h = len(values)
    for d in range(1, h + 1):
        if h % d == 0 and all(values[i] == values[i % d] for i in range(h)):
            return d
    return h


def _initials_from_class_values(ws: list[Fraction], c: Fraction) -> list[Fraction]:
    """Per-class ratio limits of N/(1 - t^h/c) when N^(e)(c) = ws[e]."""
    h = len(ws)
    out = [Fraction(0)] * h
    for e in range(1, h):
        out[e] = ws[e - 1] / ws[e]
    out[0] = c * ws[h - 1] / ws[0]
    return out


def _noise_terms(rng: random.Random, radius_ceiling: int) -> list[RationalFunctionRep]:
    """Rational pieces holomorphic on twice the boundary disc."""
    terms = []
    for _ in range(rng.randint(1, 2)):
        k = rng.randint(radius_ceiling, radius_ceiling + 5)
        num = Poly([Fraction(rng.randint(1, 5))])
        mult = rng.randint(1, 2)
        den = Poly([1, Fraction(-1, k)])
        full = den
        for _ in range(mult - 1):
            full = full * den
        terms.append(RationalFunctionRep.make(num, full))
    if rng.random() < 0.5:
        coeffs = [Fraction(rng.randint(-4, 4)) for _ in range(rng.randint(1, 4))]
        terms.append(RationalFunctionRep.make(Poly(coeffs), Poly([1])))
    return terms


def _assemble(rng, numerator: Poly, h: int, inv_c: Fraction, tag: str,
              initials: list[Fraction], cycle_product: Fraction) -> CorpusEntry:
    denominator = _cycle_poly(inv_c, h)  # 1 - t^h/c
    shared = poly_gcd(numerator, denominator).degree
    rep = RationalFunctionRep.make(numerator, denominator)
    radius = max(cycle_product, 1 / cycle_product)  # >= boundary radius for any h
    for term in _noise_terms(rng, 2 * (int(radius) + 1)):
        rep = rep + term
    return CorpusEntry(tag, rep.reduce(), h, tuple(initials), cycle_product, h - shared)


def _full_circle_entry(rng: random.Random, h: int, tag: str) -> CorpusEntry | None:
    c = _random_fraction(rng)
    ws = [_random_fraction(rng) for _ in range(h)]
    initials = _initials_from_class_values(ws, c)
    if _minimal_period(initials) != h:
        return None
    # numerator with N^(e)(c) = ws[e]: coefficient e is a small integer,
    # coefficient e+h mops up the difference
    low = [Fraction(rng.randint(-3, 3)) for _ in range(h)]
    coeffs = low + [(ws[e] - low[e]) / c for e in range(h)]
    numerator = Poly(coeffs)
    if numerator[0] == 0:
        return None
    # every boundary root must keep its residue; at a root x of t^h - c the
    # numerator collapses to sum_e ws[e] x^e, so test that witness instead
    witness = Poly(ws)
    if poly_gcd(witness, Poly([-c] + [Fraction(0)] * (h - 1) + [Fraction(1)])).degree > 0:
        return None
    return _assemble(rng, numerator, h, 1 / c, tag, initials, c)


def _stratum_entry(rng: random.Random, h: int, tag: str) -> CorpusEntry | None:
    labels = [l for l in enumerate_labels(h) if l.degree() < h]
    if not labels:
        return None
    label = labels[rng.randrange(len(labels))]
    r = Fraction(rng.randint(1, 3))
    try:
        initials = list(stratum_sample(label, r, rng.randrange(1 << 30)))
    except ArithmeticError:
        return None
    if _minimal_period(initials) != h:
        return None
    # detection reconstructs rationals only up to a denominator cap
    if any(v.denominator > 10**4 or abs(v.numerator) > 10**5 for v in initials):
        return None
    A = r**h
    # leading coefficients follow the prescribed ratios exactly, so the
    # series is p(t)/(1 - t^h/A) with deg p < h
    gam = [Fraction(1)]
    for n in range(1, h):
        gam.append(gam[-1] / initials[n % h])
    return _assemble(rng, Poly(gam), h, 1 / A, tag, initials, A)


def duality_corpus(count: int = 60, seed: int = 20240816) -> list[CorpusEntry]:
    rng = random.Random(seed)
    plain = max(count - count // 6, 1)
    entries: list[CorpusEntry] = []
    budget = 400 * count
    while len(entries) < count and budget:
        budget -= 1
        if len(entries) < plain:
            entry = _full_circle_entry(rng, rng.randint(1, 6), f"circle-{len(entries)}")
        else:
            entry = _stratum_entry(rng, rng.randint(2, 6), f"stratum-{len(entries)}")
        if entry is not None:
            entries.append(entry)
    if len(entries) < count:
        raise RuntimeError(f"corpus generation stalled at {len(entries)}/{count}")
    return entries


def operator_corpus(count: int = 100, seed: int = 777216) -> list[tuple[RationalFunctionRep, int]]:
    """Random reduced rational functions paired with a sectioning period."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        den_deg = rng.randint(1, 6)
        den = [Fraction(1)] + [
            Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(den_deg)
        ]
        if all(c == 0 for c in den[1:]):
            continue
        num_deg = rng.randint(0, 6)
        num = [Fraction(rng.randint(-5, 5), rng.randint(1, 2)) for _ in range(num_deg + 1)]
        if all(c == 0 for c in num):
            continue
        rep = RationalFunctionRep.make(Poly(num), Poly(den)).reduce()
        if rep.denominator.degree == 0:
            continue
        out.append((rep, rng.randint(1, 5)))
    return out


def positive_tuples(count: int, h_max: int, seed: int = 424242) -> list[tuple[Fraction, ...]]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        h = rng.randint(1, h_max)
        out.append(tuple(_random_fraction(rng) for _ in range(h)))
    return out
