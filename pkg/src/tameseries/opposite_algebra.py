"""Exact algebra on the per-class numerator family.

Everything here works over the rationals: numerators built from the
class initials, the h x h coefficient matrix and its determinant, the
common factor shared by all classes, the reduced numerators spanning the
quotient space, residues at the opposite-denominator roots, and the
stratification of positive initial tuples by their normalized label.

The label story deserves one remark: a label is a divisor of 1 - s^h
with integer coefficients (a product of cyclotomic factors including
1 - s). Rational initials can only ever produce such labels: the root
set of the opposite denominator is carried to a Galois-stable set of
roots of unity by the normalization, so the normalized polynomial has
rational, hence integer, coefficients. classify still verifies this
exactly and refuses rather than rounding blindly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .numerics import DEFAULT_DETECT_TOLERANCE, numeric_rank, to_mpc, to_mpf, workprec
from .polynomials import Poly, cyclotomic, one_minus_power, poly_gcd

SAMPLE_BUDGET = 64

__all__ = [
    "CoefficientMatrix",
    "DenominatorPair",
    "ResidueMatrix",
    "StratumLabel",
    "numerators",
    "coefficient_matrix_and_discriminant",
    "denominator_pair",
    "reduced_numerators",
    "opposite_roots",
    "residue_matrix",
    "stratum_classify",
    "stratum_sample",
    "enumerate_labels",
]


def _check_initials(initials) -> list[Fraction]:
    vals = [Fraction(a) for a in initials]
    if not vals:
        raise ValueError("need at least one initial")
    if any(a == 0 for a in vals):
        raise ZeroDivisionError("zero initial")
    return vals


def numerators(initials, cycle_product=None) -> list[Poly]:
    """Numerator polynomials for every class: coefficient j of class e is
    the product of j initials walking down from class e."""
    vals = _check_initials(initials)
    h = len(vals)
    if cycle_product is not None:
        prod = Fraction(1)
        for a in vals:
            prod *= a
        if Fraction(cycle_product) != prod:
            raise ValueError("cycle product does not match the initials")
    out = []
    for e in range(h):
        coeffs = [Fraction(1)]
        acc = Fraction(1)
        for j in range(1, h):
            acc *= vals[(e - j + 1) % h]
            coeffs.append(acc)
        out.append(Poly(coeffs))
    return out


# ---------------------------------------------------------------------------
# exact linear algebra helpers


def _exact_rank(rows: list[list[Fraction]]) -> int:
    m = [list(r) for r in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    row = 0
    for col in range(cols):
        pivot = None
        for r in range(row, len(m)):
            if m[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        inv = m[row][col]
        for r in range(row + 1, len(m)):
            if m[r][col] != 0:
                factor = m[r][col] / inv
                for c in range(col, cols):
                    m[r][c] -= factor * m[row][c]
        row += 1
        rank += 1
        if row == len(m):
            break
    return rank


def _exact_det(rows: list[list[Fraction]]) -> Fraction:
    m = [list(r) for r in rows]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if m[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                factor = m[r][col] / inv
                for c in range(col, n):
                    m[r][c] -= factor * m[col][c]
    return det


@dataclass(frozen=True)
class CoefficientMatrix:
    entries: tuple[tuple[Fraction, ...], ...]
    period: int

    def rank(self) -> int:
        return _exact_rank([list(r) for r in self.entries])

    def to_json(self) -> dict:
        return {
            "period": self.period,
            "entries": [
                [{"num": v.numerator, "den": v.denominator} for v in row] for row in self.entries
            ],
        }


def coefficient_matrix_and_discriminant(initials) -> tuple[CoefficientMatrix, Fraction]:
    vals = _check_initials(initials)
    h = len(vals)
    rows = []
    for e in range(h):
        row = [Fraction(1)]
        acc = Fraction(1)
        for f in range(1, h):
            acc *= vals[(e - f + 1) % h]
            row.append(acc)
        rows.append(row)
    matrix = CoefficientMatrix(tuple(tuple(r) for r in rows), h)
    return matrix, _exact_det(rows)


# ---------------------------------------------------------------------------
# the common factor and the opposite denominator


@dataclass(frozen=True)
class DenominatorPair:
    common_factor: Poly  # constant term 1
    opposite_denominator: Poly  # constant term 1
    rank: int  # its degree
    cycle_product: Fraction
    period: int

    def to_json(self) -> dict:
        return {
            "common_factor": self.common_factor.to_json(),
            "opposite_denominator": self.opposite_denominator.to_json(),
            "rank": self.rank,
            "period": self.period,
        }


def _cycle_poly(cycle_product: Fraction, h: int) -> Poly:
    return Poly([Fraction(1)] + [Fraction(0)] * (h - 1) + [-Fraction(cycle_product)])


def denominator_pair(nums: list[Poly], cycle_product, h: int | None = None) -> DenominatorPair:
    cycle_product = Fraction(cycle_product)
    if h is None:
        h = len(nums)
    if len(nums) != h:
        raise ValueError("need one numerator per class")
    if cycle_product == 0:
        raise ZeroDivisionError("zero cycle product")
    base = _cycle_poly(cycle_product, h)
    delta = poly_gcd(nums[0], base).unit_constant()
    for e in range(h):
        if poly_gcd(nums[e], base).unit_constant() != delta:
            raise ArithmeticError(f"class {e}: common factor differs from class 0")
        other = poly_gcd(nums[e], nums[(e + 1) % h]).unit_constant() if h > 1 else delta
        if h > 1 and other != delta:
            raise ArithmeticError(
                f"classes {e},{(e + 1) % h}: pairwise factor differs from the common one"
            )
    opp = base.exact_div(delta)
    initials = _initials_from_numerators(nums, cycle_product)
    matrix, _ = coefficient_matrix_and_discriminant(initials)
    if matrix.rank() != opp.degree:
        raise ArithmeticError(
            f"matrix rank {matrix.rank()} != opposite denominator degree {opp.degree}"
        )
    return DenominatorPair(delta, opp.unit_constant(), opp.degree, cycle_product, h)


def _initials_from_numerators(nums: list[Poly], cycle_product: Fraction) -> list[Fraction]:
    h = len(nums)
    # coefficient 1 of the class-e numerator is the class-e initial
    return [nums[e][1] if h > 1 else Fraction(cycle_product) for e in range(h)]


def reduced_numerators(pair: DenominatorPair, nums: list[Poly]) -> list[Poly]:
    h = pair.period
    delta = pair.common_factor
    opp = pair.opposite_denominator
    out = []
    for e, num in enumerate(nums):
        quot, rem = divmod(num, delta)
        if not rem.is_zero():
            raise ArithmeticError(f"class {e}: numerator not divisible by the common factor")
        out.append(quot)
    d = pair.rank
    initials = _initials_from_numerators(nums, pair.cycle_product)
    for e in range(h):
        expect = out[(e + 1) % h]
        if h > 1:
            shifted = Poly((0, 1)) * out[e] * initials[(e + 1) % h] + opp
            if shifted != expect:
                raise ArithmeticError(f"class {e}: shift relation fails on reduced numerators")
        if out[e].degree != d - 1:
            raise ArithmeticError(f"class {e}: reduced numerator degree {out[e].degree} != {d - 1}")
    rows = [[out[e][j] for j in range(d)] for e in range(h)]
    if _exact_rank(rows) != d:
        raise ArithmeticError("reduced numerators do not span the full quotient space")
    return out


# ---------------------------------------------------------------------------
# residues at the opposite-denominator roots


@dataclass(frozen=True)
class ResidueMatrix:
    entries: tuple[tuple, ...]  # rows: classes, columns: roots
    inverse_roots: tuple  # elements of V(opposite denominator)
    rank: int
    period: int

    def to_json(self) -> dict:
        return {
            "period": self.period,
            "rank": self.rank,
            "inverse_roots": [
                {"re": float(mp.re(v)), "im": float(mp.im(v))} for v in self.inverse_roots
            ],
            "entries": [
                [{"re": float(mp.re(v)), "im": float(mp.im(v))} for v in row] for row in self.entries
            ],
        }


def opposite_roots(pair: DenominatorPair, precision_bits: int | None = None, tolerance=None):
    """Elements of V(opposite denominator), read off the h-th roots of the
    inverse cycle product rather than found by general root isolation."""
    bits = precision_bits if precision_bits is not None else mp.prec
    if tolerance is None:
        tol = max(mp.mpf(DEFAULT_DETECT_TOLERANCE), mp.mpf(2) ** (32 - bits))
    else:
        tol = mp.mpf(tolerance)
    h = pair.period
    A = pair.cycle_product
    with workprec(bits + 32):
        base = mp.power(to_mpc(1 / A), mp.mpf(1) / h)
        cands = [base * mp.expjpi(mp.mpf(2 * k) / h) for k in range(h)]
        scale = max(mp.mpf(1), abs(base)) ** pair.opposite_denominator.degree
        kept = [v for v in cands if abs(pair.opposite_denominator.eval(v)) < tol * scale + tol]
        kept.sort(key=lambda v: (mp.arg(v) + 2 * mp.pi) % (2 * mp.pi))
    if len(kept) != pair.rank:
        raise ArithmeticError(
            f"found {len(kept)} roots, expected {pair.rank}; raise precision or tolerance"
        )
    return kept


def residue_matrix(
    pair: DenominatorPair,
    nums: list[Poly],
    roots=None,
    precision_bits: int | None = None,
    tolerance=None,
) -> ResidueMatrix:
    bits = precision_bits if precision_bits is not None else mp.prec
    if tolerance is None:
        tol = max(mp.mpf(DEFAULT_DETECT_TOLERANCE), mp.mpf(2) ** (32 - bits))
    else:
        tol = mp.mpf(tolerance)
    h = pair.period
    if roots is None:
        roots = opposite_roots(pair, bits, tolerance)
    with workprec(bits + 32):
        entries = tuple(
            tuple(nums[e].eval(v) / h for v in roots) for e in range(h)
        )
        # expanding sum(mu_i/(1 - s/v_i)) must reproduce the semi-periodic
        # coefficient sequence for two full periods
        xs = [1 / v for v in roots]
        A = pair.cycle_product
        for e in range(h):
            coeffs = nums[e].coeffs
            for k in range(2 * h):
                m, j = divmod(k, h)
                target = to_mpf(Fraction(A) ** m * (coeffs[j] if j <= nums[e].degree else 0))
                got = sum(entries[e][i] * xs[i] ** k for i in range(len(roots)))
                scale = 1 + abs(target)
                if abs(got - target) > tol * scale * 4 + mp.mpf(2) ** (48 - bits) * scale:
                    raise ArithmeticError(
                        f"residue expansion mismatch at class {e}, index {k}"
                    )
        rank = numeric_rank([list(row) for row in entries], tol)
    if rank != pair.rank:
        raise ArithmeticError(f"residue matrix rank {rank} != expected {pair.rank}")
    return ResidueMatrix(entries, tuple(roots), rank, h)


# ---------------------------------------------------------------------------
# stratification


@dataclass(frozen=True)
class StratumLabel:
    poly: Poly  # integer coefficients, 1-s | poly | 1-s^h, constant term 1
    period: int

    @classmethod
    def make(cls, poly: Poly, period: int) -> "StratumLabel":
        if poly[0] != 1:
            raise ValueError("label must have constant term 1")
        if any(c.denominator != 1 for c in poly.coeffs):
            raise ValueError("label must have integer coefficients")
        if poly.eval(Fraction(1)) != 0:
            raise ValueError("label must vanish at 1")
        if not poly.divides(one_minus_power(period)):
            raise ValueError(f"label must divide 1 - s^{period}")
        return cls(poly, period)

    def degree(self) -> int:
        return self.poly.degree

    def to_json(self) -> dict:
        return {"period": self.period, "label": self.poly.to_json()}

    def format(self) -> str:
        return self.poly.format("s")


def enumerate_labels(h: int) -> list[StratumLabel]:
    """All integer-coefficient divisors of 1 - s^h that contain 1 - s:
    products of cyclotomic factors for divisors of h, always including
    the divisor 1."""
    divs = [d for d in range(1, h + 1) if h % d == 0]
    labels = []
    rest = [d for d in divs if d != 1]
    for mask in range(1 << len(rest)):
        poly = cyclotomic(1)
        for i, d in enumerate(rest):
            if mask >> i & 1:
                poly = poly * cyclotomic(d)
        labels.append(StratumLabel.make(poly.unit_constant(), h))
    labels.sort(key=lambda l: (l.degree(), l.poly.coeffs))
    return labels


def stratum_classify(initials) -> StratumLabel:
    vals = _check_initials(initials)
    if any(a <= 0 for a in vals):
        raise ValueError("classification needs positive initials")
    h = len(vals)
    nums = numerators(vals)
    A = Fraction(1)
    for a in vals:
        A *= a
    pair = denominator_pair(nums, A, h)
    opp = pair.opposite_denominator
    # normalize: coefficient j of the label is opp_j / A^(j/h), an integer
    with workprec(max(mp.prec, 128) + 64):
        r_inv_pows = [mp.power(to_mpf(A), -mp.mpf(j) / h) for j in range(opp.degree + 1)]
        coeffs = []
        for j in range(opp.degree + 1):
            approx = to_mpf(opp[j]) * r_inv_pows[j]
            cand = int(mp.nint(approx))
            if abs(approx - cand) > mp.mpf("0.25"):
                raise ArithmeticError(
                    f"label coefficient {j} is not near an integer: {mp.nstr(approx, 20)}"
                )
            coeffs.append(cand)
    for j, cand in enumerate(coeffs):
        # exact certificate: opp_j = cand * A^(j/h), checked via h-th powers
        if (opp[j] == 0) != (cand == 0):
            raise ArithmeticError(f"label coefficient {j} mismatch at zero")
        if cand != 0:
            if (opp[j] > 0) != (cand > 0) or opp[j] ** h != Fraction(cand) ** h * A**j:
                raise ArithmeticError(f"label coefficient {j} fails the exact certificate")
    return StratumLabel.make(Poly(coeffs), h)


def stratum_sample(label: StratumLabel, r, seed: int) -> list[Fraction]:
    """Positive rational initial tuple whose classification is exactly the
    given label, with cycle product r^h."""
    r = Fraction(r)
    if r <= 0:
        raise ValueError("scale must be positive")
    h = label.period
    d = label.degree()
    A = r**h
    scaled_label = label.poly.scale_arg(r)
    core = scaled_label.exact_div(Poly([1, -r]))  # label(rs)/(1-rs), degree d-1
    cofactor = _cycle_poly(A, h).exact_div(scaled_label)  # (1 - A s^h)/label(rs)
    # unperturbed, core*cofactor = 1 + rs + ... + (rs)^(h-1): strictly positive
    rng = random.Random(seed)
    for attempt in range(SAMPLE_BUDGET):
        perturbed = list(core.coeffs)
        for j in range(1, d):
            # perturbation kept small next to the r^j coefficient profile
            eps = Fraction(rng.randrange(-64, 65), 4096) * r**j
            perturbed[j] = perturbed[j] + eps
        numerator = Poly(perturbed) * cofactor
        coeffs = [numerator[j] for j in range(h)]
        if numerator.degree != h - 1 or any(c <= 0 for c in coeffs):
            continue
        # consecutive coefficient ratio j belongs to class (1 - j) mod h
        by_class = [Fraction(0)] * h
        by_class[0] = coeffs[1] if h > 1 else A
        for j in range(2, h):
            by_class[(1 - j) % h] = coeffs[j] / coeffs[j - 1]
        if h > 1:
            by_class[1 % h] = A / coeffs[h - 1]
        if any(v <= 0 for v in by_class):
            continue
        try:
            back = stratum_classify(by_class)
        except ArithmeticError:
            continue
        if back.poly == label.poly:
            return by_class
    raise ArithmeticError(f"no sample found for label {label.format()} in {SAMPLE_BUDGET} tries")
