"""Two roads to the same polynomial, checked against each other.

The series side watches coefficient ratios settle class by class and
assembles the opposite denominator from the detected initials. The pole
side factors the actual denominator and isolates the top-order boundary
poles. The duality theorem says the two polynomials are reversals of one
another and that the transition matrices built on each side coincide
entrywise. This module runs both sides, measures every residual the
theorem offers, and refuses inputs whose boundary behavior is branching
rather than meromorphic.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from mpmath import mp

from .numerics import (
    DEFAULT_PASS_TOLERANCE,
    numeric_rank,
    precision_from_env,
    reconstruct_fraction,
    to_mpc,
    workprec,
)
from .opposite_algebra import denominator_pair, numerators
from .opposite_space import DEFAULT_H_MAX, AccumulationReport, detect_accumulation
from .pole_analysis import (
    NonMeromorphicInput,
    PoleSet,
    UndecidableBoundary,
    boundary_poles,
    polar_polynomials,
)
from .polynomials import Poly
from .rational_functions import RationalFunctionRep
from .rational_operators import section_rational
from .sequence_core import (
    CoefficientStream,
    Derivative,
    Masked,
    RationalFunction,
    Rescale,
    SeriesSpec,
    SqrtRatioSeries,
    Sum,
    spec_to_rational,
)

__all__ = [
    "TransitionMatrix",
    "DualityReport",
    "series_side_matrix",
    "pole_side_matrix",
    "verify_duality",
]


@dataclass(frozen=True)
class TransitionMatrix:
    side: str  # "series" or "pole"
    entries: tuple[tuple, ...]  # rows: classes, columns: roots
    errors: tuple[tuple, ...]
    roots: tuple
    period: int
    rank: int

    def to_json(self) -> dict:
        # floats for plotting; decimal strings keep the working precision
        def cplx(v):
            return {
                "re": float(mp.re(v)),
                "im": float(mp.im(v)),
                "re_hp": mp.nstr(mp.re(v), 40),
                "im_hp": mp.nstr(mp.im(v), 40),
            }

        return {
            "side": self.side,
            "period": self.period,
            "rank": self.rank,
            "roots": [cplx(x) for x in self.roots],
            "entries": [[cplx(v) for v in row] for row in self.entries],
            "errors": [[float(e) for e in row] for row in self.errors],
        }


@dataclass(frozen=True)
class DualityReport:
    verdict: str  # "pass" | "fail" | "series-only" | "pole-only" | "inconclusive"
    period: int | None
    rank: int | None
    opposite_denominator: Poly | None
    top_denominator: object  # Poly, or tuple of numeric coefficients
    reversal_residual: object | None
    degree_match: bool | None
    series_matrix: TransitionMatrix | None
    pole_matrix: TransitionMatrix | None
    matrix_distance: object | None
    top_divides_reversal: bool | None
    reversal_divides_top: bool | None
    excluded_root_residual: object | None
    cross_ratio_residual: object | None
    initials: tuple | None
    cycle_product: object | None
    accumulation: AccumulationReport | None
    pole_set: PoleSet | None
    messages: tuple[str, ...]
    precision_bits: int
    tolerance: object
    strict_verified: bool | None = None

    @property
    def ok(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        def num(v):
            return None if v is None else float(v)

        out = {
            "verdict": self.verdict,
            "period": self.period,
            "rank": self.rank,
            "degree_match": self.degree_match,
            "reversal_residual": num(self.reversal_residual),
            "matrix_distance": num(self.matrix_distance),
            "top_divides_reversal": self.top_divides_reversal,
            "reversal_divides_top": self.reversal_divides_top,
            "excluded_root_residual": num(self.excluded_root_residual),
            "cross_ratio_residual": num(self.cross_ratio_residual),
            "messages": list(self.messages),
            "precision_bits": self.precision_bits,
            "tolerance": num(self.tolerance),
            "strict_verified": self.strict_verified,
        }
        if self.initials is not None and all(isinstance(v, Fraction) for v in self.initials):
            out["initials"] = [
                {"num": int(v.numerator), "den": int(v.denominator)} for v in self.initials
            ]
        if isinstance(self.cycle_product, Fraction):
            out["cycle_product"] = {
                "num": int(self.cycle_product.numerator),
                "den": int(self.cycle_product.denominator),
            }
        if self.opposite_denominator is not None:
            out["opposite_denominator"] = self.opposite_denominator.to_json()
        if isinstance(self.top_denominator, Poly):
            out["top_denominator"] = self.top_denominator.to_json()
        elif self.top_denominator is not None:
            out["top_denominator_numeric"] = [
                {"re": float(mp.re(c)), "im": float(mp.im(c))} for c in self.top_denominator
            ]
        if self.series_matrix is not None:
            out["series_matrix"] = self.series_matrix.to_json()
        if self.pole_matrix is not None:
            out["pole_matrix"] = self.pole_matrix.to_json()
        if self.accumulation is not None:
            out["accumulation"] = self.accumulation.to_json()
        if self.pole_set is not None:
            out["poles"] = self.pole_set.to_json()
        return out


def _scalar_to_mpc(v):
    if hasattr(v, "to_mpc"):
        return v.to_mpc()
    return to_mpc(v)


def _arg_key(v, bits: int):
    """Argument in [0, 2pi), with rounding noise just below the positive
    real axis treated as zero rather than as almost-2pi."""
    a = mp.arg(v)
    if a < -(mp.mpf(2) ** (16 - bits // 2)):
        a += 2 * mp.pi
    return a


def _class_numerator_value(initials, e: int, s):
    """A^[e] evaluated at s: coefficient j is the product of j initials
    walking down from class e. Works for rational or Gaussian initials."""
    h = len(initials)
    acc = mp.mpc(1)
    total = mp.mpc(1)
    power = mp.mpc(1)
    for j in range(1, h):
        acc = acc * _scalar_to_mpc(initials[(e - j + 1) % h])
        power = power * s
        total += acc * power
    return total


def series_side_matrix(report_or_initials, roots, precision_bits: int | None = None) -> TransitionMatrix:
    """Entries A^[e](1/x_i) at the top boundary poles x_i."""
    bits = precision_bits if precision_bits is not None else mp.prec
    if isinstance(report_or_initials, AccumulationReport):
        initials = report_or_initials.exact_initials()
        if initials is None:
            raise ValueError("series side needs exact per-class initials")
    else:
        initials = list(report_or_initials)
    h = len(initials)
    with workprec(bits + 32):
        entries = []
        errors = []
        for e in range(h):
            row = []
            errow = []
            for x in roots:
                v = _class_numerator_value(initials, e, 1 / to_mpc(x))
                row.append(v)
                errow.append(mp.mpf(2) ** (8 - bits) * (1 + abs(v)) * h)
            entries.append(tuple(row))
            errors.append(tuple(errow))
        rank = numeric_rank(entries, mp.mpf(2) ** (24 - bits))
    return TransitionMatrix("series", tuple(entries), tuple(errors), tuple(roots), h, rank)


def _deflate_eval(coeffs, x, times: int, bits: int):
    """Evaluate p(t)/(t-x)**times at t=x by synthetic deflation."""
    q = [to_mpc(c) for c in coeffs]
    for _ in range(times):
        if len(q) <= 1:
            return mp.mpc(0)
        out = [mp.mpc(0)] * (len(q) - 1)
        acc = mp.mpc(0)
        for i in range(len(q) - 1, 0, -1):
            acc = acc * x + q[i]
            out[i - 1] = acc
        q = out
    acc = mp.mpc(0)
    for c in reversed(q):
        acc = acc * x + c
    return acc


def pole_side_matrix(
    rep: RationalFunctionRep,
    sections,
    roots,
    top_order: int,
    precision_bits: int | None = None,
    tolerance=None,
) -> TransitionMatrix:
    """Entries (P / T^[e]P)(x_i): ratios of leading Laurent coefficients
    at the shared top-order poles."""
    bits = precision_bits if precision_bits is not None else mp.prec
    h = len(sections)
    rep = rep.reduce()
    with workprec(bits + 32):
        vanish = mp.mpf(2) ** (24 - bits)
        entries = []
        errors = []
        for e in range(h):
            sec = sections[e].reduce()
            row = []
            errow = []
            for x in roots:
                x = to_mpc(x)
                n_val = rep.numerator.eval(x)
                d_defl = _deflate_eval(rep.denominator.coeffs, x, top_order, bits)
                ne_val = sec.numerator.eval(x)
                de_defl = _deflate_eval(sec.denominator.coeffs, x, top_order, bits)
                denom = ne_val * d_defl
                scale = max(abs(n_val * de_defl), abs(denom), mp.mpf(1))
                if abs(denom) < vanish * scale:
                    raise ArithmeticError(
                        f"pole order mismatch at class {e}, root {mp.nstr(x, 10)}: "
                        "deflated denominator vanishes; raise precision to distinguish "
                        "a theorem violation from precision exhaustion"
                    )
                v = n_val * de_defl / denom
                row.append(v)
                errow.append(mp.mpf(2) ** (16 - bits) * (1 + abs(v)))
            entries.append(tuple(row))
            errors.append(tuple(errow))
        rank = numeric_rank(entries, mp.mpf(2) ** (24 - bits))
    return TransitionMatrix("pole", tuple(entries), tuple(errors), tuple(roots), h, rank)


def _contains_branching(spec) -> bool:
    if isinstance(spec, SqrtRatioSeries):
        return True
    if isinstance(spec, (Derivative, Rescale)):
        return _contains_branching(spec.inner)
    if isinstance(spec, Sum):
        return _contains_branching(spec.left) or _contains_branching(spec.right)
    if isinstance(spec, Masked):
        return _contains_branching(spec.inner)
    return False


def _coerce_source(source):
    if isinstance(source, RationalFunctionRep):
        rep = source.reduce()
        return RationalFunction(rep), CoefficientStream(RationalFunction(rep)), rep
    if isinstance(source, CoefficientStream):
        return source.spec, source, spec_to_rational(source.spec)
    if isinstance(source, SeriesSpec):
        return source, CoefficientStream(source), spec_to_rational(source)
    raise TypeError(f"cannot verify duality for {source!r}")


def _exactify(coeffs, bits: int):
    """Try to turn numeric monic coefficients into exact rationals."""
    out = []
    for c in coeffs:
        c = to_mpc(c)
        if abs(mp.im(c)) > mp.mpf(2) ** (16 - bits) * (1 + abs(c)):
            return None
        q = reconstruct_fraction(mp.re(c), mp.mpf(2) ** (24 - bits) * (1 + abs(c)))
        if q is None:
            return None
        out.append(q)
    return Poly(out)


def verify_duality(
    source,
    horizon: int | None = None,
    precision_bits: int | None = None,
    tolerance=None,
    h_max: int = DEFAULT_H_MAX,
    strict: bool = False,
) -> DualityReport:
    """Run both sides of the duality theorem and compare every residual.

    Inputs without a rational representation get a partial report unless
    their boundary behavior is branching (the square-root fixture), which
    is refused outright.
    """
    bits = precision_bits if precision_bits is not None else precision_from_env()
    tol = mp.mpf(DEFAULT_PASS_TOLERANCE) if tolerance is None else mp.mpf(tolerance)
    report = _verify_once(source, horizon, bits, tol, h_max)
    if strict:
        recheck = _verify_once(source, horizon, bits * 2, tol, h_max)
        agreed = recheck.verdict == report.verdict
        messages = recheck.messages
        if not agreed:
            messages = messages + (
                f"strict recheck at {bits * 2} bits changed the verdict: "
                f"{report.verdict} -> {recheck.verdict}",
            )
        return replace(recheck, strict_verified=agreed, messages=messages)
    return report


def _verify_once(source, horizon, bits: int, tol, h_max: int) -> DualityReport:
    spec, stream, rep = _coerce_source(source)
    if rep is None and _contains_branching(spec):
        raise NonMeromorphicInput(
            "non-meromorphic input: boundary behavior is an algebraic branch point, "
            "not a pole; the duality theorem does not apply"
        )
    messages: list[str] = []

    with workprec(bits):
        kwargs = {} if horizon is None else {"horizon": horizon}
        detection = detect_accumulation(stream, h_max=h_max, precision_bits=bits, **kwargs)
        if not detection.finite:
            failures = detection.diagnostics.get("failures") or {}
            reasons = sorted({str(v) for v in failures.values()})
            detail = "; ".join(reasons) if reasons else "ratio classes did not stabilize"
            messages.append(
                f"no finite rational accumulation structure detected ({detail})"
            )
        initials = detection.exact_initials() if detection.finite else None
        if detection.finite and initials is None:
            messages.append("initials did not reconstruct to exact rationals")
        rational_initials = initials is not None and all(
            isinstance(v, Fraction) for v in initials
        )
        if initials is not None and not rational_initials:
            messages.append("complex initials: series-side algebra needs rational ones")

        pair = None
        if rational_initials:
            A = Fraction(1)
            for a in initials:
                A *= a
            pair = denominator_pair(numerators(initials), A, detection.period)

        poles = None
        polar = None
        if rep is not None:
            try:
                poles = boundary_poles(rep, precision_bits=bits)
                polar = polar_polynomials(rep, poles)
            except UndecidableBoundary as exc:
                messages.append(f"boundary undecidable: {exc}")

        if pair is None and polar is None:
            return DualityReport(
                "inconclusive", detection.period if detection.finite else None, None,
                None, None, None, None, None, None, None, None, None, None, None,
                initials=tuple(initials) if initials else None,
                cycle_product=None, accumulation=detection, pole_set=poles,
                messages=tuple(messages), precision_bits=bits, tolerance=tol,
            )
        if polar is None:
            return DualityReport(
                "series-only", detection.period, pair.rank,
                pair.opposite_denominator, None, None, None, None, None, None,
                None, None, None, None,
                initials=tuple(initials), cycle_product=pair.cycle_product,
                accumulation=detection, pole_set=poles,
                messages=tuple(messages), precision_bits=bits, tolerance=tol,
            )
        if pair is None:
            top = polar.top_denominator if polar.exact else polar.top_coefficients
            return DualityReport(
                "pole-only", None, None, None, top, None, None, None, None, None,
                None, None, None, None,
                initials=None, cycle_product=None,
                accumulation=detection, pole_set=poles,
                messages=tuple(messages), precision_bits=bits, tolerance=tol,
            )

        return _compare_sides(
            rep, detection, initials, pair, poles, polar, bits, tol, messages
        )


def _compare_sides(rep, detection, initials, pair, poles, polar, bits, tol, messages):
    h = detection.period
    d_p = pair.rank
    opp = pair.opposite_denominator
    A = pair.cycle_product

    top_exact = polar.top_denominator if polar.exact else None
    top_coeffs = (
        [to_mpc(c) for c in top_exact.coeffs]
        if top_exact is not None
        else [to_mpc(c) for c in polar.top_coefficients]
    )
    top_degree = len(top_coeffs) - 1
    degree_match = top_degree == d_p

    # reversal: t^{d_P} * opp(1/t), monic since opp has constant term 1
    reversal = opp.reversed_to(d_p)
    if top_exact is not None:
        residual = max(
            (abs(to_mpc(reversal[j] - top_exact[j])) for j in range(max(d_p, top_degree) + 1)),
            default=mp.mpf(0),
        )
    else:
        residual = max(
            (
                abs(to_mpc(reversal[j]) - (top_coeffs[j] if j <= top_degree else mp.mpc(0)))
                for j in range(max(d_p, top_degree) + 1)
            ),
            default=mp.mpf(0),
        )

    if top_exact is None:
        top_exact_candidate = _exactify(top_coeffs, bits)
        if top_exact_candidate is None:
            messages.append("top denominator did not exactify; divisibility left open")
    else:
        top_exact_candidate = top_exact
    if top_exact_candidate is not None:
        top_divides = top_exact_candidate.divides(reversal)
        rev_divides = reversal.divides(top_exact_candidate)
    else:
        top_divides = rev_divides = None

    top_records = [
        p for p in poles.boundary() if p.multiplicity == poles.top_order
    ]
    top_records.sort(key=lambda p: _arg_key(p.value, bits))
    roots = tuple(p.value for p in top_records)

    series_m = series_side_matrix(initials, roots, bits)
    sections = [section_rational(rep, h, e).result for e in range(h)]
    pole_m = pole_side_matrix(rep, sections, roots, poles.top_order, bits, tol)

    distance = mp.mpf(0)
    for e in range(h):
        for i in range(len(roots)):
            distance = max(distance, abs(series_m.entries[e][i] - pole_m.entries[e][i]))

    # roots of t^h = A that are not top poles must kill every numerator
    excluded_residual = mp.mpf(0)
    with workprec(bits + 32):
        base = mp.power(to_mpc(A), mp.mpf(1) / h)
        for k in range(h):
            cand = base * mp.expjpi(mp.mpf(2 * k) / h)
            near = min((abs(cand - x) for x in roots), default=mp.inf)
            if near < mp.mpf(2) ** (16 - bits // 2) * (1 + abs(cand)):
                continue
            for e in range(h):
                excluded_residual = max(
                    excluded_residual, abs(_class_numerator_value(initials, e, 1 / cand))
                )

        # ratio identity between classes at every shared root
        cross_residual = mp.mpf(0)
        for i, x in enumerate(roots):
            xc = to_mpc(x)
            col = [pole_m.entries[e][i] for e in range(h)]
            for e in range(h):
                for f in range(h):
                    if e == f:
                        continue
                    got = col[e] / col[f]
                    if e < f:
                        prod = mp.mpc(1)
                        for j in range(e + 1, f + 1):
                            prod *= _scalar_to_mpc(initials[j % h])
                        want = xc ** (f - e) / prod
                    else:
                        prod = mp.mpc(1)
                        for j in range(f + 1, e + 1):
                            prod *= _scalar_to_mpc(initials[j % h])
                        want = xc ** (f - e) * prod
                    cross_residual = max(cross_residual, abs(got - want))

    checks = [
        degree_match,
        residual < tol,
        distance < tol,
        series_m.rank == d_p,
        pole_m.rank == d_p,
        top_divides is not False,
        rev_divides is not False,
        excluded_residual < tol,
        cross_residual < tol,
    ]
    verdict = "pass" if all(checks) else "fail"
    if verdict == "fail":
        messages.append(
            "failed checks: "
            + ", ".join(
                name
                for name, okay in zip(
                    [
                        "degree", "reversal residual", "matrix distance",
                        "series rank", "pole rank", "top | reversal",
                        "reversal | top", "excluded roots", "class ratios",
                    ],
                    checks,
                )
                if not okay
            )
        )

    return DualityReport(
        verdict, h, d_p, opp,
        top_exact if top_exact is not None else tuple(top_coeffs),
        residual, degree_match, series_m, pole_m, distance,
        top_divides, rev_divides, excluded_residual, cross_residual,
        initials=tuple(initials), cycle_product=A,
        accumulation=detection, pole_set=poles,
        messages=tuple(messages), precision_bits=bits, tolerance=tol,
    )
