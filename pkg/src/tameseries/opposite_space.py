"""Ratio-limit detection and the reversed-coefficient polynomial family.

The central object is the sequence of consecutive coefficient ratios
gamma_{n-1}/gamma_n. When that sequence, restricted to each residue class
mod h, converges, the series carries a finite family of limit values
(one per class) together with their cycle product. Detection searches h
in increasing order, accepts a class on one of three convergence modes,
and then reduces the period to the minimal divisor on which the limit
tuple is periodic.

Convergence modes per class:

* constant: the exact tail is literally constant; the limit is exact.
* geometric: the final difference is below tolerance and the last third
  of the class shows no late jumps (this guard is what keeps sparse
  perturbation sets, e.g. perfect squares, from slipping through a
  locally quiet window).
* extrapolated: differences decay too slowly for the tolerance, but are
  monotone; polynomial extrapolation in 1/n supplies the limit with an
  error estimate, which must itself clear the tolerance.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .numerics import (
    DEFAULT_DETECT_TOLERANCE,
    RECONSTRUCT_DENOMINATOR_CAP,
    RECONSTRUCT_ERROR_CAP,
    precision_from_env,
    reconstruct_fraction,
    to_mpf,
    workprec,
)
from .polynomials import Poly
from .rational_functions import RationalFunctionRep
from .sequence_core import (
    CoefficientStream,
    GaussianRational,
    TamenessCertificate,
    certify_tameness,
    radius_bounds,
    scalar_is_zero,
    scalar_mul,
    scalar_to_numeric,
)

DEFAULT_HORIZON = 512
DEFAULT_H_MAX = 24
DEFAULT_WINDOW = 16
LATE_JUMP_FACTOR = 64

__all__ = [
    "OppositePolynomial",
    "opposite_polynomial",
    "InitialEstimate",
    "AccumulationReport",
    "detect_accumulation",
    "OppositeSeriesForm",
    "opposite_rational_form",
    "tau_omega",
    "Omega1Summary",
    "omega1_summary",
    "ratios_to_csv",
]


@dataclass(frozen=True)
class OppositePolynomial:
    """Reversal of an initial coefficient segment: coefficient k holds
    gamma_{n-k}/gamma_n, so the constant term is always 1."""

    degree: int
    coefficients: tuple

    def numeric(self) -> list:
        return [scalar_to_numeric(c) for c in self.coefficients]

    def to_poly(self) -> Poly:
        if all(isinstance(c, Fraction) for c in self.coefficients):
            return Poly(self.coefficients)
        raise ValueError("coefficients are not all rational")


def opposite_polynomial(stream: CoefficientStream, n: int) -> OppositePolynomial:
    if n < 0:
        raise IndexError("index must be nonnegative")
    values = stream.exact_prefix(n)
    if scalar_is_zero(values[n]):
        raise ZeroDivisionError(f"coefficient {n} is zero; reversal undefined there")
    coeffs = tuple(
        values[n - k] / values[n] if isinstance(values[n - k], Fraction) and isinstance(values[n], Fraction)
        else _exact_div(values[n - k], values[n])
        for k in range(n + 1)
    )
    return OppositePolynomial(n, coeffs)


def _exact_div(x, y):
    from .sequence_core import scalar_div

    return scalar_div(x, y)


# ---------------------------------------------------------------------------
# per-class limit estimation


def _neville_top_octave(ns, values, k):
    """One Neville extrapolation to u = 0 using k nodes from [N/2, N].

    Returns (limit, delta-based error estimate) or None if too few
    samples land in the top octave.
    """
    top = ns[-1]
    idxs = [i for i, n in enumerate(ns) if 2 * n >= top]
    if len(idxs) < 6:
        return None
    if len(idxs) > k:
        step = len(idxs) / k
        idxs = [idxs[int(i * step)] for i in range(k)]
        idxs[-1] = len(ns) - 1
    with workprec(4 * mp.prec):
        us = [mp.mpf(1) / ns[i] for i in idxs]
        row = [mp.mpf(values[i]) if mp.im(values[i]) == 0 else mp.mpc(values[i]) for i in idxs]
        prev = row[-1]
        best_corner, best_delta = row[-1], mp.inf
        for j in range(1, len(row)):
            row = [
                (us[i] * row[i + 1] - us[i + j] * row[i]) / (us[i] - us[i + j])
                for i in range(len(row) - 1)
            ]
            corner = row[-1]
            delta = abs(corner - prev)
            # shallow corners see only the trailing nodes; their deltas
            # say nothing about the limit yet
            if j >= 3 and delta < best_delta:
                best_corner, best_delta = corner, delta
            elif j >= 6 and delta > best_delta * 16:
                break  # past the noise floor; deeper levels only diverge
            prev = corner
    return best_corner, best_delta * 4


def _extrapolate_to_zero(ns, values):
    """Extrapolation of values(n) to n = infinity via Neville in u = 1/n.

    Nodes come only from the top octave of the index range: ratio tails
    carry geometric transients from subdominant poles, and a node far
    from the end injects its transient into the extrapolant at full
    strength, silently capping accuracy. Clustered nodes cost
    conditioning instead, which the boosted working precision absorbs.
    Several node counts are tried; within each, the level-to-level
    delta of the table corner tracks the true error closely and stalls
    at the noise floor, so the smallest delta picks the answer and
    prices it honestly.
    """
    floor = mp.mpf(2) ** (40 - mp.prec) * (1 + abs(values[-1]))
    limit, err = values[-1], mp.inf
    for k in (10, 14, 18):
        got = _neville_top_octave(ns, values, k)
        if got is not None and got[1] < err:
            limit, err = got
    return limit, err + floor


@dataclass
class _ClassResult:
    ok: bool
    mode: str = ""
    limit: object = None
    error: object = None
    exact: object = None
    length: int = 0
    reason: str = ""


def _class_limit(indices, exact_ratios, numeric_ratios, tolerance, window) -> _ClassResult:
    n = len(indices)
    if n < window + 2:
        return _ClassResult(False, reason="short", length=n)
    xs = numeric_ratios
    diffs = [abs(xs[i + 1] - xs[i]) for i in range(n - 1)]
    floor = mp.mpf(2) ** (48 - mp.prec) * (1 + abs(xs[-1]))
    tail_start = max(0, (2 * (n - 1)) // 3)
    final = diffs[-1]

    # exact-constant tail: the strongest possible answer
    if exact_ratios is not None:
        tail_exact = exact_ratios[tail_start:]
        if all(v == tail_exact[-1] for v in tail_exact):
            return _ClassResult(
                True, mode="constant", limit=xs[-1], error=mp.mpf(0),
                exact=tail_exact[-1], length=n,
            )

    window_diffs = diffs[-window:]
    nonincreasing_window = all(
        window_diffs[i + 1] <= window_diffs[i] * mp.mpf("1.125") + floor
        for i in range(len(window_diffs) - 1)
    )
    # a sparse perturbation shows up as an isolated rise to a significant
    # level somewhere in the last third; honest decay never rises
    threshold = max(mp.mpf(tolerance), LATE_JUMP_FACTOR * final)
    rise = any(
        diffs[i] > threshold and diffs[i] > 16 * diffs[i - 1]
        for i in range(max(tail_start, 1), len(diffs))
    )

    if not nonincreasing_window or rise:
        return _ClassResult(False, reason="differences not settling", length=n)

    # oscillation aliasing guard: a genuine slow tail (1/n-type) decays
    # noticeably over the last third, while a wrong-period class mixes
    # several limits and keeps the differences at a constant level
    if final >= mp.mpf(tolerance):
        ref = diffs[tail_start] + floor
        if final > ref * mp.mpf("0.6"):
            return _ClassResult(False, reason="differences not decaying", length=n)

    if final < mp.mpf(tolerance):
        d_last = xs[-1] - xs[-2]
        d_prev = xs[-2] - xs[-3]
        if abs(d_last) <= floor:
            return _ClassResult(True, mode="geometric", limit=xs[-1], error=floor, length=n)
        q = d_last / d_prev if abs(d_prev) > floor else mp.mpf(0)
        if abs(q) < mp.mpf("0.95"):
            corr = d_last * q / (1 - q)
            err = abs(d_last) * abs(q) / (1 - abs(q)) * 2 + floor
            return _ClassResult(True, mode="geometric", limit=xs[-1] + corr, error=err, length=n)
        return _ClassResult(True, mode="geometric", limit=xs[-1], error=abs(d_last) * window + floor, length=n)

    # slow mode: monotone but above tolerance; extrapolate in 1/n
    limit, err = _extrapolate_to_zero(indices, xs)
    if err < mp.mpf(tolerance):
        return _ClassResult(True, mode="extrapolated", limit=limit, error=err, length=n)
    return _ClassResult(False, reason="extrapolation error too large", length=n)


def _try_reconstruct(limit, error):
    """Exact rational (or Gaussian rational) candidate for a numeric limit."""
    if error >= mp.mpf(RECONSTRUCT_ERROR_CAP):
        return None
    bound = max(error * 4, mp.mpf(2) ** (32 - mp.prec))
    re = reconstruct_fraction(mp.re(limit), bound, RECONSTRUCT_DENOMINATOR_CAP)
    if re is None:
        return None
    if mp.im(limit) == 0 or abs(mp.im(limit)) <= bound:
        if abs(mp.im(limit)) > bound:
            return None
        return re
    im = reconstruct_fraction(mp.im(limit), bound, RECONSTRUCT_DENOMINATOR_CAP)
    if im is None:
        return None
    return GaussianRational(re, im)


@dataclass(frozen=True)
class InitialEstimate:
    value: object  # mpf or mpc
    error: object  # mpf
    exact: object | None  # Fraction | GaussianRational
    reconstructed: bool
    mode: str
    class_index: int
    sample_count: int

    def best(self):
        """Exact value when available, else the numeric estimate."""
        return self.exact if self.exact is not None else self.value

    def to_json(self) -> dict:
        out = {
            "class": self.class_index,
            "re": float(mp.re(self.value)),
            "im": float(mp.im(self.value)),
            "error": float(self.error),
            "mode": self.mode,
            "samples": self.sample_count,
            "reconstructed": self.reconstructed,
        }
        if isinstance(self.exact, Fraction):
            out["exact"] = {"num": self.exact.numerator, "den": self.exact.denominator}
        elif isinstance(self.exact, GaussianRational):
            out["exact"] = {
                "re": {"num": self.exact.re.numerator, "den": self.exact.re.denominator},
                "im": {"num": self.exact.im.numerator, "den": self.exact.im.denominator},
            }
        return out


@dataclass(frozen=True)
class AccumulationReport:
    verdict: str  # "finite-rational" | "inconclusive"
    period: int | None
    initials: tuple[InitialEstimate, ...]
    cycle_product: InitialEstimate | None
    certificate: TamenessCertificate
    diagnostics: dict

    @property
    def finite(self) -> bool:
        return self.verdict == "finite-rational"

    def exact_initials(self) -> list | None:
        """Per-class exact initials, or None if any class is numeric-only."""
        if not self.finite:
            return None
        vals = [est.exact for est in self.initials]
        return vals if all(v is not None for v in vals) else None

    def to_json(self) -> dict:
        out = {
            "verdict": self.verdict,
            "period": self.period,
            "initials": [est.to_json() for est in self.initials],
            "certificate": self.certificate.to_json(),
            "diagnostics": {
                k: (float(v) if isinstance(v, (type(mp.mpf(0)),)) else v)
                for k, v in self.diagnostics.items()
            },
        }
        if self.cycle_product is not None:
            out["cycle_product"] = self.cycle_product.to_json()
        return out


def _limit_tuple_period(results: list[_ClassResult], h: int) -> int:
    """Minimal divisor d of h on which the class limits are d-periodic."""
    for d in range(1, h + 1):
        if h % d:
            continue
        ok = True
        for e in range(h):
            a, b = results[e], results[e % d]
            if a.exact is not None and b.exact is not None:
                if a.exact != b.exact:
                    ok = False
                    break
            else:
                gap = abs(a.limit - b.limit)
                if gap > (a.error + b.error) * 4 + mp.mpf(2) ** (40 - mp.prec):
                    ok = False
                    break
        if ok:
            return d
    return h


def _merge_class(results: list[_ClassResult], e: int, d: int, h: int) -> _ClassResult:
    """Combine the results of all classes congruent to e mod d."""
    group = [results[f] for f in range(h) if f % d == e]
    best = min(group, key=lambda r: (r.exact is None, r.error if r.error is not None else mp.inf))
    total = sum(r.length for r in group)
    return _ClassResult(
        True, mode=best.mode, limit=best.limit, error=best.error, exact=best.exact, length=total
    )


def detect_accumulation(
    stream: CoefficientStream,
    horizon: int = DEFAULT_HORIZON,
    tolerance=None,
    h_max: int = DEFAULT_H_MAX,
    precision_bits: int | None = None,
    window: int = DEFAULT_WINDOW,
) -> AccumulationReport:
    """Search for the least period whose class-restricted ratio sequences
    all converge; reduce by limit-tuple periodicity; report limits."""
    bits = precision_bits if precision_bits is not None else precision_from_env()
    tol = mp.mpf(DEFAULT_DETECT_TOLERANCE if tolerance is None else tolerance)
    bound = stream.known_bound
    if bound is not None:
        horizon = min(horizon, bound)
    certificate = certify_tameness(stream, horizon)
    start = certificate.start_index

    with workprec(bits):
        stream.exact_prefix(horizon)
        indices = list(range(start, horizon + 1))
        exact_by_n = {}
        numeric_ratios = {}
        for n in indices:
            r = stream.exact_ratio(n)
            exact_by_n[n] = r
            numeric_ratios[n] = scalar_to_numeric(r)

        failures = {}
        chosen = None
        for h in range(1, h_max + 1):
            results = []
            ok = True
            for e in range(h):
                ns = [n for n in indices if n % h == e]
                ex = [exact_by_n[n] for n in ns]
                xs = [numeric_ratios[n] for n in ns]
                res = _class_limit(ns, ex, xs, tol, window)
                results.append(res)
                if not res.ok:
                    ok = False
                    failures[h] = res.reason or "class failed"
                    break
            if ok:
                chosen = (h, results)
                break

        diagnostics = {
            "horizon": horizon,
            "start_index": start,
            "tolerance": float(tol),
            "window": window,
            "h_max": h_max,
            "precision_bits": bits,
        }

        if chosen is None:
            if any(r == "short" for r in failures.values()):
                diagnostics["suggested_horizon"] = start + (window + 4) * h_max
            diagnostics["failures"] = failures
            return AccumulationReport("inconclusive", None, (), None, certificate, diagnostics)

        h_cand, results = chosen
        diagnostics["candidate_period"] = h_cand
        h_p = _limit_tuple_period(results, h_cand)
        merged = [_merge_class(results, e, h_p, h_cand) for e in range(h_p)]

        initials = []
        for e, res in enumerate(merged):
            exact = res.exact
            if isinstance(exact, GaussianRational) and exact.im == 0:
                exact = exact.re
            reconstructed = False
            if exact is None:
                cand = _try_reconstruct(res.limit, res.error)
                if cand is not None:
                    exact = cand
                    reconstructed = True
            value = res.limit if res.limit is not None else scalar_to_numeric(exact)
            initials.append(
                InitialEstimate(
                    value=value,
                    error=res.error if res.error is not None else mp.mpf(0),
                    exact=exact,
                    reconstructed=reconstructed,
                    mode=res.mode,
                    class_index=e,
                    sample_count=res.length,
                )
            )

        if any(abs(est.value) <= mp.mpf(2) ** (32 - bits) for est in initials):
            diagnostics["failures"] = {"initial": "a class limit is numerically zero"}
            return AccumulationReport("inconclusive", None, (), None, certificate, diagnostics)

        # cycle product and its error
        prod_val = mp.mpf(1)
        prod_err = mp.mpf(0)
        for est in initials:
            prod_err = prod_err * abs(est.value) + est.error * abs(prod_val) + prod_err * est.error
            prod_val = prod_val * est.value
        exact_list = [est.exact for est in initials]
        prod_exact = None
        if all(v is not None for v in exact_list):
            prod_exact = Fraction(1)
            for v in exact_list:
                prod_exact = scalar_mul(prod_exact, v)
            if isinstance(prod_exact, GaussianRational) and prod_exact.im == 0:
                prod_exact = prod_exact.re
        cycle = InitialEstimate(
            value=prod_val,
            error=prod_err,
            exact=prod_exact,
            reconstructed=any(est.reconstructed for est in initials),
            mode="product",
            class_index=-1,
            sample_count=min(est.sample_count for est in initials),
        )

        sup_initial = max(abs(est.value) for est in initials)
        form_radius = mp.power(abs(prod_val), mp.mpf(-1) / h_p) if prod_val != 0 else mp.inf
        diagnostics["form_radius"] = float(form_radius)
        diagnostics["inverse_sup_initial"] = float(1 / sup_initial)
        diagnostics["radius_lower_ok"] = bool(
            form_radius + mp.mpf(2) ** (20 - bits) >= 1 / sup_initial * (1 - mp.mpf("1e-12"))
        )
        diagnostics["residuals"] = [float(est.error) for est in initials]
        diagnostics["modes"] = [est.mode for est in initials]

        try:
            rb = radius_bounds(stream, horizon=min(horizon, 128))
            r_val = mp.mpf(rb.radius.value)
            r_err = mp.mpf(rb.radius.error)
            lhs = abs(prod_val)
            rhs = mp.power(r_val, h_p)
            slack = (
                prod_err
                + h_p * mp.power(r_val + r_err, h_p - 1) * r_err
                + mp.mpf("0.05") * rhs
            )
            diagnostics["radius_estimate"] = float(r_val)
            diagnostics["modulus_consistent"] = bool(abs(lhs - rhs) <= slack)
        except Exception:
            diagnostics["modulus_consistent"] = None

        return AccumulationReport(
            "finite-rational", h_p, tuple(initials), cycle, certificate, diagnostics
        )


# ---------------------------------------------------------------------------
# rational forms per class and the shift action


@dataclass(frozen=True)
class OppositeSeriesForm:
    """Limit form for one residue class: numerator over (1 - A s^h).

    The numerator's coefficient j is the product of the first j initials
    walking down from this class; semi-periodicity extends the sequence
    beyond the period via powers of the cycle product.
    """

    class_index: int
    period: int
    initials: tuple  # per-class a_1 values (exact scalars or mpc), index = class
    cycle_product: object
    exact: bool

    def numerator_coefficients(self) -> list:
        h = self.period
        out = [Fraction(1) if self.exact else mp.mpf(1)]
        acc = out[0]
        for j in range(1, h):
            factor = self.initials[(self.class_index - j + 1) % h]
            acc = scalar_mul(acc, factor) if self.exact else acc * factor
            out.append(acc)
        return out

    def numerator_poly(self) -> Poly:
        if not self.exact:
            raise ValueError("numerator is numeric; no exact polynomial available")
        coeffs = self.numerator_coefficients()
        if not all(isinstance(c, Fraction) for c in coeffs):
            raise ValueError("numerator involves nonreal scalars")
        return Poly(coeffs)

    def denominator_poly(self) -> Poly:
        if not self.exact or not isinstance(self.cycle_product, Fraction):
            raise ValueError("denominator is numeric; no exact polynomial available")
        return Poly([Fraction(1)] + [Fraction(0)] * (self.period - 1) + [-self.cycle_product])

    def rep(self) -> RationalFunctionRep:
        return RationalFunctionRep(self.numerator_poly(), self.denominator_poly())

    def coefficient(self, k: int):
        """a_k for this class, via semi-periodicity."""
        if k < 0:
            raise IndexError("negative index")
        m, j = divmod(k, self.period)
        base = self.numerator_coefficients()[j]
        if m == 0:
            return base
        if self.exact:
            power = Fraction(1)
            for _ in range(m):
                power = scalar_mul(power, self.cycle_product)
            return scalar_mul(power, base)
        return self.cycle_product**m * base

    def series(self, n_max: int) -> list:
        return [self.coefficient(k) for k in range(n_max + 1)]

    def initial(self):
        """iota of the form: its degree-one coefficient."""
        return self.initials[self.class_index]

    def to_json(self) -> dict:
        coeffs = self.numerator_coefficients()
        if self.exact and all(isinstance(c, Fraction) for c in coeffs):
            num = [{"num": c.numerator, "den": c.denominator} for c in coeffs]
        else:
            numeric = [
                scalar_to_numeric(c) if isinstance(c, (Fraction, GaussianRational)) else c
                for c in coeffs
            ]
            num = [{"re": float(mp.re(c)), "im": float(mp.im(c))} for c in numeric]
        cp = self.cycle_product
        if isinstance(cp, Fraction):
            cp_json = {"num": cp.numerator, "den": cp.denominator}
        else:
            cpn = scalar_to_numeric(cp) if isinstance(cp, GaussianRational) else cp
            cp_json = {"re": float(mp.re(cpn)), "im": float(mp.im(cpn))}
        return {
            "class": self.class_index,
            "period": self.period,
            "numerator": num,
            "cycle_product": cp_json,
            "exact": self.exact,
        }


def opposite_rational_form(report: AccumulationReport, e: int) -> OppositeSeriesForm:
    if not report.finite:
        raise ValueError("no finite accumulation detected; forms are undefined")
    h = report.period
    e = e % h
    exact_vals = report.exact_initials()
    if exact_vals is not None:
        cycle = report.cycle_product.exact
        return OppositeSeriesForm(e, h, tuple(exact_vals), cycle, True)
    vals = tuple(est.value for est in report.initials)
    return OppositeSeriesForm(e, h, vals, report.cycle_product.value, False)


def _scalar_eq(x, y) -> bool:
    if isinstance(x, (int, Fraction)) and isinstance(y, (int, Fraction)):
        return Fraction(x) == Fraction(y)
    from .sequence_core import as_gaussian

    return as_gaussian(x) == as_gaussian(y)


def tau_omega(form: OppositeSeriesForm) -> OppositeSeriesForm:
    """Shift action (a - 1)/(iota(a) s): maps the class-e form to class e-1."""
    iota = form.initial()
    if isinstance(iota, (Fraction, GaussianRational)):
        if scalar_is_zero(iota):
            raise ZeroDivisionError("form has zero initial; shift undefined")
    elif abs(iota) == 0:
        raise ZeroDivisionError("form has zero initial; shift undefined")
    h = form.period
    target = OppositeSeriesForm(
        (form.class_index - 1) % h, h, form.initials, form.cycle_product, form.exact
    )
    # verify: iota * s * A_target(s) + (1 - A s^h) = A_source(s)
    src = form.numerator_coefficients()
    tgt = target.numerator_coefficients()
    if form.exact:
        ok = all(_scalar_eq(scalar_mul(iota, tgt[j - 1]), src[j]) for j in range(1, h))
        if not ok or not _scalar_eq(scalar_mul(iota, tgt[h - 1]), form.cycle_product):
            raise ArithmeticError("shift identity failed on exact data")
    else:
        scale = max([abs(mp.mpc(c)) for c in src] + [mp.mpf(1)])
        tol = scale * mp.mpf(2) ** (32 - mp.prec)
        for j in range(1, h):
            if abs(mp.mpc(iota) * mp.mpc(tgt[j - 1]) - mp.mpc(src[j])) > tol:
                raise ArithmeticError("shift identity failed numerically")
        if abs(mp.mpc(iota) * mp.mpc(tgt[h - 1]) - mp.mpc(form.cycle_product)) > tol:
            raise ArithmeticError("shift identity failed numerically at the cycle product")
    return target


@dataclass(frozen=True)
class Omega1Summary:
    values: tuple
    multiplicities: tuple[int, ...]
    collapsed: bool  # fewer distinct limits than the period

    def to_json(self) -> dict:
        vals = []
        for v in self.values:
            if isinstance(v, Fraction):
                vals.append({"num": v.numerator, "den": v.denominator})
            else:
                vn = scalar_to_numeric(v) if isinstance(v, GaussianRational) else v
                vals.append({"re": float(mp.re(vn)), "im": float(mp.im(vn))})
        return {
            "values": vals,
            "multiplicities": list(self.multiplicities),
            "collapsed": self.collapsed,
        }


def omega1_summary(report: AccumulationReport) -> Omega1Summary:
    if not report.finite:
        raise ValueError("no finite accumulation detected")
    groups: list[tuple[object, int]] = []
    for est in report.initials:
        key = est.exact if est.exact is not None else est.value
        placed = False
        for i, (rep_key, count) in enumerate(groups):
            if est.exact is not None and not isinstance(rep_key, (type(mp.mpf(0)), type(mp.mpc(0)))):
                same = rep_key == key
            else:
                a = scalar_to_numeric(key) if isinstance(key, (Fraction, GaussianRational)) else key
                b = scalar_to_numeric(rep_key) if isinstance(rep_key, (Fraction, GaussianRational)) else rep_key
                same = abs(a - b) <= (est.error + mp.mpf(2) ** (40 - mp.prec)) * 8
            if same:
                groups[i] = (rep_key, count + 1)
                placed = True
                break
        if not placed:
            groups.append((key, 1))
    values = tuple(g[0] for g in groups)
    mults = tuple(g[1] for g in groups)
    return Omega1Summary(values, mults, len(values) < report.period)


def ratios_to_csv(stream: CoefficientStream, path: str, horizon: int, period: int = 1, start: int | None = None) -> None:
    if start is None:
        start = certify_tameness(stream, horizon).start_index
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "class", "ratio_re", "ratio_im"])
        for n in range(start, horizon + 1):
            r = stream.exact_ratio(n)
            val = scalar_to_numeric(r)
            writer.writerow([n, n % period, mp.nstr(mp.re(val), 40), mp.nstr(mp.im(val), 40)])
