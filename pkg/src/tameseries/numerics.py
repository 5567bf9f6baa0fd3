"""Precision plumbing shared by the numeric paths.

Exact data lives in fractions.Fraction; everything inexact goes through
mpmath under an explicit working precision. Helpers here convert between
the two worlds, compare exact radicals, and wrap the few mpmath services
the package relies on (roots of unity, singular values, dyadic export).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpc, mpf

DEFAULT_PRECISION_BITS = 256
DEFAULT_DETECT_TOLERANCE = "1e-30"
DEFAULT_PASS_TOLERANCE = "1e-20"
RECONSTRUCT_ERROR_CAP = "1e-20"
RECONSTRUCT_DENOMINATOR_CAP = 10**6
ROOT_PRECISION_CAP_BITS = 2**10


def precision_from_env(default: int = DEFAULT_PRECISION_BITS) -> int:
    raw = os.environ.get("TSL_PRECISION_BITS")
    if raw is None:
        return default
    bits = int(raw)
    if bits < 64:
        raise ValueError("TSL_PRECISION_BITS must be at least 64")
    return bits


def workprec(bits: int):
    """Context manager setting the mpmath working precision in bits."""
    return mp.workprec(bits)


def to_mpf(x) -> mpf:
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpf(x)


def to_mpc(x) -> mpc:
    if isinstance(x, Fraction):
        return mp.mpc(to_mpf(x))
    if isinstance(x, tuple) and len(x) == 2:
        return mp.mpc(to_mpf(x[0]), to_mpf(x[1]))
    return mp.mpc(x)


def mpf_to_fraction(x: mpf) -> Fraction:
    """Exact value of a finite mpf as a Fraction (mpf values are dyadic)."""
    sign, man, exp, _ = mp.mpf(x)._mpf_
    if man == 0:
        if exp != 0:
            raise ValueError("cannot convert a non-finite value")
        return Fraction(0)
    # man is a gmpy2 mpz when mpmath runs on the gmpy backend; normalize so
    # downstream Fractions (and their JSON forms) carry plain ints.
    val = Fraction(int(man)) * (Fraction(2) ** int(exp))
    return -val if sign else val


def reconstruct_fraction(
    x,
    error_bound,
    max_denominator: int = RECONSTRUCT_DENOMINATOR_CAP,
) -> Fraction | None:
    """Continued-fraction rationalization of a high-precision value.

    Returns the candidate only when it sits within the caller's error bound
    (plus a few ulp of slack), so an accidental near-rational at low
    accuracy is not promoted to an exact claim.
    """
    x = mp.mpf(x)
    if not mp.isfinite(x):
        return None
    cand = mpf_to_fraction(x).limit_denominator(max_denominator)
    slack = mp.mpf(2) ** (8 - mp.prec) * (1 + abs(x))
    if abs(x - to_mpf(cand)) <= mp.mpf(error_bound) + slack:
        return cand
    return None


@dataclass(frozen=True)
class Enclosure:
    """A value with a one-sided error radius. value may be mpf or mpc."""

    value: object
    error: object

    def overlaps(self, other: "Enclosure") -> bool:
        return abs(self.value - other.value) <= self.error + other.error

    def definitely_less(self, other: "Enclosure") -> bool:
        return self.value + self.error < other.value - other.error


@dataclass(frozen=True)
class Radical:
    """The positive real number base**(1/index), compared exactly."""

    base: Fraction
    index: int

    def __post_init__(self):
        if self.base <= 0 or self.index < 1:
            raise ValueError("radical requires a positive base and index >= 1")

    def _cross(self, other: "Radical") -> tuple[Fraction, Fraction]:
        import math

        l = self.index * other.index // math.gcd(self.index, other.index)
        return self.base ** (l // self.index), other.base ** (l // other.index)

    def __eq__(self, other):
        if not isinstance(other, Radical):
            return NotImplemented
        a, b = self._cross(other)
        return a == b

    def __lt__(self, other):
        a, b = self._cross(other)
        return a < b

    def __le__(self, other):
        a, b = self._cross(other)
        return a <= b

    def __hash__(self):
        return hash(("radical", self.base, self.index))

    def to_mpf(self) -> mpf:
        return mp.root(to_mpf(self.base), self.index)

    def power(self, k: int) -> "Radical":
        return Radical(self.base**k, self.index)

    def __repr__(self):
        if self.index == 1:
            return f"Radical({self.base})"
        return f"Radical({self.base}^(1/{self.index}))"


def roots_of_unity(h: int) -> list[mpc]:
    return [mp.expjpi(mp.mpf(2 * k) / h) for k in range(h)]


def numeric_rank(rows, tolerance) -> int:
    """Rank of a small dense matrix from its singular values."""
    import mpmath

    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    if nr == 0 or nc == 0:
        return 0
    complex_entries = any(isinstance(to_mpc(v), mpc) and mp.im(to_mpc(v)) != 0 for row in rows for v in row)
    A = mp.matrix(nr, nc)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            A[i, j] = to_mpc(v) if complex_entries else mp.re(to_mpc(v))
    if complex_entries:
        sv = mpmath.svd_c(A, compute_uv=False)
    else:
        sv = mpmath.svd_r(A, compute_uv=False)
    svals = [mp.mpf(sv[i]) for i in range(sv.rows)]
    if not svals:
        return 0
    top = max(svals)
    if top == 0:
        return 0
    cut = max(mp.mpf(tolerance), top * mp.mpf(2) ** (-(mp.prec * 3 // 4)))
    return sum(1 for s in svals if s > cut)
