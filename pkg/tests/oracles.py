"""Independent reference implementations used to freeze expected test values.

Everything here deliberately uses a different algorithm family from the
package: Taylor coefficients come from literal polynomial long division
(the package unrolls linear recurrences), group growth counts come from
explicit normal-form word enumeration (the package uses a counting DP and
a rational composition), determinants come from permutation expansion
(the package eliminates), and the square-root series is computed by
solving gamma^2 = (1+t)/(1-t) term by term.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def long_division_series(num: list[Fraction], den: list[Fraction], n_max: int) -> list[Fraction]:
    """Taylor coefficients of num/den by schoolbook long division."""
    if not den or den[0] == 0:
        raise ZeroDivisionError("denominator constant term is zero")
    num = list(num) + [Fraction(0)] * (n_max + 1 - len(num))
    out = []
    rem = num[:]
    for n in range(n_max + 1):
        q = rem[n] / den[0]
        out.append(q)
        for i, d in enumerate(den):
            if n + i <= n_max:
                rem[n + i] -= q * d
    return out


def syllables(order: int) -> list[int]:
    # lengths of the order-1 nontrivial elements of Z/order, generators {a, a^-1}
    return [min(k, order - k) for k in range(1, order)]


def enumerate_words_cumulative(orders: list[int], n_max: int) -> list[int]:
    """Cumulative growth counts by brute-force normal-form enumeration.

    A normal form is an alternating sequence of (factor, nontrivial element)
    pairs; its length is the sum of syllable lengths. No two adjacent
    syllables share a factor. Exponential; keep n_max small.
    """
    counts = [0] * (n_max + 1)
    counts[0] = 1  # empty word
    frontier = [((), 0)]  # (tuple of (factor, k), length)
    while frontier:
        nxt = []
        for word, length in frontier:
            last = word[-1][0] if word else None
            for i, p in enumerate(orders):
                if i == last:
                    continue
                for k in range(1, p):
                    w = min(k, p - k)
                    if length + w <= n_max:
                        nxt.append((word + ((i, k),), length + w))
        for _, length in nxt:
            counts[length] += 1
        frontier = nxt
    cum = []
    total = 0
    for n in range(n_max + 1):
        total += counts[n]
        cum.append(total)
    return cum


def opposite_poly(gammas: list[Fraction], n: int) -> list[Fraction]:
    # coefficient k is gamma_{n-k}/gamma_n
    return [gammas[n - k] / gammas[n] for k in range(n + 1)]


def det_by_permutations(rows: list[list[Fraction]]) -> Fraction:
    h = len(rows)
    total = Fraction(0)
    for perm in itertools.permutations(range(h)):
        sign = 1
        seen = [False] * h
        # count inversions for parity
        inv = sum(1 for i in range(h) for j in range(i + 1, h) if perm[i] > perm[j])
        sign = -1 if inv % 2 else 1
        term = Fraction(sign)
        for i in range(h):
            term *= rows[i][perm[i]]
        total += term
    return total


def sqrt_ratio_series(n_max: int) -> list[Fraction]:
    """Coefficients of sqrt((1+t)/(1-t)) by solving gamma^2 = (1+t)/(1-t)."""
    q = long_division_series([Fraction(1), Fraction(1)], [Fraction(1), Fraction(-1)], n_max)
    g = [Fraction(1)]
    for n in range(1, n_max + 1):
        acc = sum((g[k] * g[n - k] for k in range(1, n)), Fraction(0))
        g.append((q[n] - acc) / 2)
    return g


def machi_gamma(n: int) -> Fraction:
    # closed forms for the modular-group counts: 7*2^k - 6 and 10*2^k - 6
    k = n // 2
    if n % 2 == 0:
        return Fraction(7 * 2**k - 6)
    return Fraction(10 * 2**k - 6)


def poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def naive_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    """Textbook Euclid over Q[s], result normalized to constant term 1 if possible."""

    def deg(p):
        d = len(p) - 1
        while d >= 0 and p[d] == 0:
            d -= 1
        return d

    def rem(p, q):
        p = p[:]
        dq = deg(q)
        while deg(p) >= dq:
            dp = deg(p)
            c = p[dp] / q[dq]
            for i in range(dq + 1):
                p[dp - dq + i] -= c * q[i]
        return p

    while deg(b) >= 0:
        a, b = b, rem(a, b)
    d = deg(a)
    a = a[: d + 1]
    if a and a[0] != 0:
        a = [c / a[0] for c in a]
    elif a:
        a = [c / a[d] for c in a]
    return a
