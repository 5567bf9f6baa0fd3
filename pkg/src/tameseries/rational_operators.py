"""Coefficient-masking operators, realized exactly on rational functions.

Masking a power series to one residue class modulo h is easy on streams
(zero out the other coefficients) but needs care on rational functions:
substituting roots of unity would drag cyclotomic extensions into every
coefficient. We stay inside rational arithmetic instead. The denominator
encodes a linear recurrence; its companion matrix C advances the
coefficient window one step, so C**h advances it one class step, and the
characteristic polynomial of C**h is a recurrence satisfied by every
class subsequence. The sectioned function is then a numerator fit over
the reversal of that characteristic polynomial, reduced at the end.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .polynomials import Poly
from .rational_functions import RationalFunctionRep
from .rational_subsets import RationalSubset
from .sequence_core import CoefficientStream, Masked

__all__ = [
    "SectionedRational",
    "OperatorIdentityReport",
    "section_stream",
    "section_rational",
    "section_by_subset",
    "operator_identity_suite",
]


def section_stream(stream: CoefficientStream, subset: RationalSubset) -> CoefficientStream:
    """Stream whose coefficient n is the source coefficient when n lies in
    the subset and zero otherwise."""
    return CoefficientStream(Masked(stream.spec, subset))


@dataclass(frozen=True)
class SectionedRational:
    class_index: int
    period: int
    result: RationalFunctionRep

    def to_json(self) -> dict:
        return {
            "class": self.class_index,
            "period": self.period,
            "result": self.result.to_json(),
        }


def _companion_power(den: Poly, h: int) -> list[list[Fraction]]:
    """charpoly coefficients are computed from C**h where C is the
    companion matrix of the recurrence encoded by the denominator."""
    m = den.degree
    d0 = den[0]
    C = [[Fraction(0)] * m for _ in range(m)]
    for i in range(m - 1):
        C[i][i + 1] = Fraction(1)
    for j in range(m):
        C[m - 1][j] = -den[m - j] / d0
    out = None
    base = C
    k = h
    while k:
        if k & 1:
            out = base if out is None else _mat_mul(out, base)
        k >>= 1
        if k:
            base = _mat_mul(base, base)
    return out


def _mat_mul(a, b):
    n = len(a)
    return [
        [sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)]
        for i in range(n)
    ]


def _charpoly(mat) -> Poly:
    """Faddeev-LeVerrier; exact over the rationals, monic, lowest first."""
    n = len(mat)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    M = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        if k > 1:
            M = _mat_mul(mat, M)
            for i in range(n):
                M[i][i] += coeffs[n - k + 1]
        trace = sum(_row_col(mat, M, i) for i in range(n))
        coeffs[n - k] = -trace / k
    return Poly(coeffs)


def _row_col(a, b, i):
    return sum(a[i][k] * b[k][i] for k in range(len(a)))


def section_rational(rep: RationalFunctionRep, h: int, e: int) -> SectionedRational:
    """Exact rational function whose Taylor series keeps only the
    coefficients with index congruent to e modulo h."""
    if h < 1:
        raise ValueError("modulus must be positive")
    e %= h
    rep = rep.reduce()
    den = rep.denominator
    if den[0] == 0:
        raise ValueError("denominator vanishes at 0: not a power series")
    m = den.degree
    num_deg = rep.numerator.degree
    # the recurrence holds from n0 on; earlier class terms go to the fit
    n0 = max(0, num_deg - m + 1)
    k0 = max(0, -((e - n0) // h))  # smallest k with e + k h >= n0
    if m == 0:
        db = Poly([1])
    else:
        chi = _charpoly(_companion_power(den, h))
        db = chi.reversed_to(m)  # constant term 1 since chi is monic
    terms = k0 + m + max(m, 1) + 1
    prefix = rep.series(e + terms * h + 1)
    beta = [prefix[e + k * h] for k in range(terms)]
    # numerator = truncation of B * D_B; the recurrence kills everything
    # past k0 + m - 1, verified rather than assumed
    prod = [Fraction(0)] * terms
    for k in range(terms):
        acc = Fraction(0)
        for i in range(min(k, db.degree) + 1):
            acc += db[i] * beta[k - i]
        prod[k] = acc
    cut = k0 + m
    for k in range(cut, terms):
        if prod[k] != 0:
            raise ArithmeticError("class subsequence does not satisfy the derived recurrence")
    nb = Poly(prod[:cut])
    num_t = Poly([0] * e + [1]) * _compose_power(nb, h)
    den_t = _compose_power(db, h)
    return SectionedRational(e, h, RationalFunctionRep.make(num_t, den_t).reduce())


def _compose_power(p: Poly, h: int) -> Poly:
    """p(t**h), exact."""
    if p.is_zero():
        return p
    out = [Fraction(0)] * (p.degree * h + 1)
    for i, c in enumerate(p.coeffs):
        out[i * h] = c
    return Poly(out)


def section_by_subset(rep: RationalFunctionRep, subset: RationalSubset) -> RationalFunctionRep:
    """Mask a rational function's coefficients to an arbitrary rational
    subset: class sections plus finitely many added or removed terms."""
    rep = rep.reduce()
    h = subset.period
    total = RationalFunctionRep.make(Poly.zero(), Poly([1]))
    for r in sorted(subset.residues):
        total = total + section_rational(rep, h, r).result
    extremes = max(subset.added | subset.removed, default=-1)
    if extremes >= 0:
        prefix = rep.series(extremes + 1)
        adjust = Poly.zero()
        for a in subset.added:
            adjust = adjust + Poly([0] * a + [prefix[a]])
        for b in subset.removed:
            adjust = adjust - Poly([0] * b + [prefix[b]])
        total = total + RationalFunctionRep.make(adjust, Poly([1]))
    return total.reduce()


@dataclass(frozen=True)
class OperatorIdentityReport:
    period: int
    sections: tuple[RationalFunctionRep, ...]
    sum_ok: bool
    shift_ok: bool
    derivative_ok: bool
    pole_order_ok: bool
    residuals: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return self.sum_ok and self.shift_ok and self.derivative_ok and self.pole_order_ok

    def to_json(self) -> dict:
        return {
            "period": self.period,
            "sum_ok": self.sum_ok,
            "shift_ok": self.shift_ok,
            "derivative_ok": self.derivative_ok,
            "pole_order_ok": self.pole_order_ok,
            "ok": self.ok,
            "residuals": list(self.residuals),
        }


def _top_boundary_order(rep: RationalFunctionRep) -> int:
    from .pole_analysis import boundary_poles

    rep = rep.reduce()
    if rep.denominator.degree == 0:
        return 0
    return boundary_poles(rep).top_order


def operator_identity_suite(rep: RationalFunctionRep, h: int) -> OperatorIdentityReport:
    """Exact checks of the section-operator identities, plus the boundary
    pole-order comparison of every section against the source."""
    rep = rep.reduce()
    sections = [section_rational(rep, h, e).result for e in range(h)]
    residuals = []

    total = RationalFunctionRep.make(Poly.zero(), Poly([1]))
    for s in sections:
        total = total + s
    sum_ok = total.equals(rep)
    if not sum_ok:
        residuals.append(f"sum: {(total - rep).reduce().format()}")

    shifted = rep.shift_up()
    shift_ok = True
    for e in range(h):
        lhs = section_rational(shifted, h, e).result
        rhs = sections[(e - 1) % h].shift_up()
        if not lhs.equals(rhs):
            shift_ok = False
            residuals.append(f"shift class {e}: {(lhs - rhs).reduce().format()}")

    deriv = rep.derivative()
    derivative_ok = True
    for e in range(h):
        lhs = section_rational(deriv, h, e).result
        rhs = sections[(e + 1) % h].derivative()
        if not lhs.equals(rhs):
            derivative_ok = False
            residuals.append(f"derivative class {e}: {(lhs - rhs).reduce().format()}")

    pole_order_ok = True
    source_order = _top_boundary_order(rep)
    for e in range(h):
        if _top_boundary_order(sections[e]) > source_order:
            pole_order_ok = False
            residuals.append(f"pole order class {e} exceeds source order {source_order}")

    return OperatorIdentityReport(
        h, tuple(sections), sum_ok, shift_ok, derivative_ok, pole_order_ok, tuple(residuals)
    )
