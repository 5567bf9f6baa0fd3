"""Coefficient streams for tame power series.

A SeriesSpec says where a coefficient sequence comes from; a
CoefficientStream materializes it. All sources produce exact values:
rational sequences are fractions, oscillating models with complex
parameters carry exact Gaussian rationals and convert to high-precision
complex only on demand. That keeps streams deterministic across
precision changes, which the detection layer relies on.

Tameness certification and radius bounds live here too, since both are
statements about the raw coefficient sequence.
"""

from __future__ import annotations

import csv
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import mp

from . import numerics
from .groups_growth import FreeProductSpec, growth_series
from .numerics import Enclosure, Radical, to_mpf
from .polynomials import Poly
from .rational_functions import RationalFunctionRep
from .rational_subsets import RationalSubset

DEFAULT_DETECTION_HORIZON = 512
DEFAULT_CERTIFICATION_HORIZON = 128
LATE_ZERO_THRESHOLD = 4
LATE_ZERO_START = 64


class NotTameError(ValueError):
    """The stream fails the tameness scan; carries a witness index."""

    def __init__(self, message: str, witness: int | None = None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex scalar with rational real and imaginary parts."""

    re: Fraction
    im: Fraction

    def __add__(self, other):
        o = as_gaussian(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = as_gaussian(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __mul__(self, other):
        o = as_gaussian(other)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = as_gaussian(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero scalar")
        return GaussianRational((self.re * o.re + self.im * o.im) / d, (self.im * o.re - self.re * o.im) / d)

    def abs_squared(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def to_mpc(self):
        return mp.mpc(to_mpf(self.re), to_mpf(self.im))


def as_gaussian(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational(Fraction(x), Fraction(0))
    raise TypeError(f"not an exact scalar: {x!r}")


def scalar_mul(x, y):
    if isinstance(x, (int, Fraction)) and isinstance(y, (int, Fraction)):
        return Fraction(x) * Fraction(y)
    return as_gaussian(x) * as_gaussian(y)


def scalar_div(x, y):
    if isinstance(x, (int, Fraction)) and isinstance(y, (int, Fraction)):
        return Fraction(x) / Fraction(y)
    return as_gaussian(x) / as_gaussian(y)


def scalar_add(x, y):
    if isinstance(x, (int, Fraction)) and isinstance(y, (int, Fraction)):
        return Fraction(x) + Fraction(y)
    return as_gaussian(x) + as_gaussian(y)


def scalar_is_zero(x) -> bool:
    if isinstance(x, (int, Fraction)):
        return x == 0
    return x.is_zero()


def scalar_abs_squared(x) -> Fraction:
    if isinstance(x, (int, Fraction)):
        return Fraction(x) * Fraction(x)
    return x.abs_squared()


def scalar_to_numeric(x):
    """Exact scalar to mpf/mpc at the current working precision."""
    if isinstance(x, (int, Fraction)):
        return to_mpf(Fraction(x))
    return x.to_mpc()


# ---------------------------------------------------------------------------
# series specifications


class SeriesSpec:
    kind: str = "abstract"

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class ExplicitCoeffs(SeriesSpec):
    values: tuple[Fraction, ...]
    kind = "coefficients"

    def __post_init__(self):
        if not self.values:
            raise ValueError("need at least one coefficient")

    @classmethod
    def make(cls, values) -> "ExplicitCoeffs":
        return cls(tuple(Fraction(v) for v in values))

    def to_json(self) -> dict:
        return {"kind": self.kind, "values": _fractions_to_json(self.values)}


@dataclass(frozen=True)
class RationalFunction(SeriesSpec):
    rep: RationalFunctionRep
    kind = "rational"

    @classmethod
    def make(cls, numerator, denominator) -> "RationalFunction":
        return cls(RationalFunctionRep.make(numerator, denominator))

    def to_json(self) -> dict:
        return {"kind": self.kind, **self.rep.to_json()}


@dataclass(frozen=True)
class FreeProduct(SeriesSpec):
    spec: FreeProductSpec
    kind = "free_product"

    @classmethod
    def make(cls, orders) -> "FreeProduct":
        return cls(FreeProductSpec.make(orders))

    def to_json(self) -> dict:
        return {"kind": self.kind, "orders": list(self.spec.orders)}


@dataclass(frozen=True)
class NamedIndexSet:
    """Built-in index sets that are not rational subsets."""

    name: str

    def membership(self, n: int) -> bool:
        if self.name == "squares":
            return math.isqrt(n) ** 2 == n
        raise ValueError(f"unknown index set {self.name!r}")

    __contains__ = membership


@dataclass(frozen=True)
class OscillatingModel(SeriesSpec):
    indices: object  # RationalSubset | NamedIndexSet | frozenset[int]
    a: object
    b: object
    kind = "oscillating"

    @classmethod
    def make(cls, indices, a, b) -> "OscillatingModel":
        a = _parse_scalar(a)
        b = _parse_scalar(b)
        if scalar_is_zero(a) or scalar_is_zero(b):
            raise ValueError("oscillating factors must be nonzero")
        if isinstance(indices, (set, frozenset, list, tuple)):
            indices = frozenset(int(n) for n in indices)
        return cls(indices, a, b)

    def to_json(self) -> dict:
        if isinstance(self.indices, RationalSubset):
            idx = self.indices.to_json()
        elif isinstance(self.indices, NamedIndexSet):
            idx = {"named": self.indices.name}
        else:
            idx = {"explicit": sorted(self.indices)}
        return {
            "kind": self.kind,
            "indices": idx,
            "a": _scalar_to_json(self.a),
            "b": _scalar_to_json(self.b),
        }


@dataclass(frozen=True)
class SqrtRatioSeries(SeriesSpec):
    """The series sqrt((1+t)/(1-t)): tame, single ratio limit, but with
    algebraic branching on the boundary, so it is not meromorphic."""

    kind = "sqrt_ratio"

    def to_json(self) -> dict:
        return {"kind": self.kind}


@dataclass(frozen=True)
class Derivative(SeriesSpec):
    inner: SeriesSpec
    order: int = 1
    kind = "derivative"

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be at least 1")

    def to_json(self) -> dict:
        return {"kind": self.kind, "order": self.order, "inner": self.inner.to_json()}


@dataclass(frozen=True)
class Sum(SeriesSpec):
    left: SeriesSpec
    right: SeriesSpec
    kind = "sum"

    def to_json(self) -> dict:
        return {"kind": self.kind, "left": self.left.to_json(), "right": self.right.to_json()}


@dataclass(frozen=True)
class Rescale(SeriesSpec):
    inner: SeriesSpec
    factor: Fraction
    kind = "rescale"

    def __post_init__(self):
        if self.factor == 0:
            raise ValueError("rescale factor must be nonzero")

    @classmethod
    def make(cls, inner, factor) -> "Rescale":
        return cls(inner, Fraction(factor))

    def to_json(self) -> dict:
        return {"kind": self.kind, "factor": _fraction_to_json(self.factor), "inner": self.inner.to_json()}


@dataclass(frozen=True)
class Masked(SeriesSpec):
    """Internal: coefficients of inner kept on the subset, zero elsewhere."""

    inner: SeriesSpec
    subset: RationalSubset
    kind = "masked"

    def to_json(self) -> dict:
        return {"kind": self.kind, "subset": self.subset.to_json(), "inner": self.inner.to_json()}


def _fraction_to_json(q: Fraction) -> dict:
    return {"num": q.numerator, "den": q.denominator}

def _fractions_to_json(qs) -> list[dict]:
    return [_fraction_to_json(q) for q in qs]


def _scalar_to_json(x) -> dict:
    if isinstance(x, (int, Fraction)):
        return _fraction_to_json(Fraction(x))
    return {"re": _fraction_to_json(x.re), "im": _fraction_to_json(x.im)}


def _parse_fraction(data) -> Fraction:
    if isinstance(data, dict):
        return Fraction(data["num"], data["den"])
    return Fraction(str(data))


def _parse_scalar(data):
    if isinstance(data, GaussianRational):
        return data if data.im != 0 else data.re
    if isinstance(data, (int, Fraction)):
        return Fraction(data)
    if isinstance(data, dict) and "re" in data:
        g = GaussianRational(_parse_fraction(data["re"]), _parse_fraction(data.get("im", 0)))
        return g if g.im != 0 else g.re
    return _parse_fraction(data)


def spec_from_json(data: dict) -> SeriesSpec:
    kind = data["kind"]
    if kind == "coefficients":
        return ExplicitCoeffs(tuple(_parse_fraction(v) for v in data["values"]))
    if kind == "rational":
        return RationalFunction(
            RationalFunctionRep(Poly.from_json(data["numerator"]), Poly.from_json(data["denominator"]))
        )
    if kind == "free_product":
        return FreeProduct.make(data["orders"])
    if kind == "oscillating":
        idx = data["indices"]
        if "named" in idx:
            indices = NamedIndexSet(idx["named"])
        elif "explicit" in idx:
            indices = frozenset(idx["explicit"])
        else:
            indices = RationalSubset.from_json(idx)
        return OscillatingModel.make(indices, _parse_scalar(data["a"]), _parse_scalar(data["b"]))
    if kind == "sqrt_ratio":
        return SqrtRatioSeries()
    if kind == "derivative":
        return Derivative(spec_from_json(data["inner"]), data.get("order", 1))
    if kind == "sum":
        return Sum(spec_from_json(data["left"]), spec_from_json(data["right"]))
    if kind == "rescale":
        return Rescale(spec_from_json(data["inner"]), _parse_fraction(data["factor"]))
    if kind == "masked":
        return Masked(spec_from_json(data["inner"]), RationalSubset.from_json(data["subset"]))
    raise ValueError(f"unknown series kind {kind!r}")


# ---------------------------------------------------------------------------
# materialization


def _materialize(spec: SeriesSpec, n_max: int) -> list:
    if isinstance(spec, ExplicitCoeffs):
        if n_max >= len(spec.values):
            raise IndexError(
                f"explicit coefficients exhausted: have {len(spec.values)}, requested index {n_max}"
            )
        return list(spec.values[: n_max + 1])
    if isinstance(spec, RationalFunction):
        return spec.rep.series(n_max)
    if isinstance(spec, FreeProduct):
        return growth_series(spec.spec).series(n_max)
    if isinstance(spec, OscillatingModel):
        out = [Fraction(1)]
        for n in range(1, n_max + 1):
            factor = spec.a if n in spec.indices else spec.b
            out.append(scalar_mul(out[-1], factor))
        return out
    if isinstance(spec, SqrtRatioSeries):
        out = []
        for n in range(n_max + 1):
            m = n // 2
            out.append(Fraction(math.comb(2 * m, m), 4**m))
        return out
    if isinstance(spec, Derivative):
        inner = _materialize(spec.inner, n_max + spec.order)
        out = []
        for n in range(n_max + 1):
            mult = 1
            for i in range(1, spec.order + 1):
                mult *= n + i
            out.append(scalar_mul(inner[n + spec.order], Fraction(mult)))
        return out
    if isinstance(spec, Sum):
        left = _materialize(spec.left, n_max)
        right = _materialize(spec.right, n_max)
        return [scalar_add(x, y) for x, y in zip(left, right)]
    if isinstance(spec, Rescale):
        inner = _materialize(spec.inner, n_max)
        out = []
        power = Fraction(1)
        for n in range(n_max + 1):
            out.append(scalar_mul(inner[n], power))
            power *= spec.factor
        return out
    if isinstance(spec, Masked):
        inner = _materialize(spec.inner, n_max)
        return [v if n in spec.subset else Fraction(0) for n, v in enumerate(inner)]
    raise TypeError(f"cannot materialize {spec!r}")


class CoefficientStream:
    """Cached view of a coefficient sequence.

    The cache only ever extends, values are exact, and extension is
    serialized behind a lock, so concurrent readers always agree.
    """

    def __init__(self, spec: SeriesSpec):
        self.spec = spec
        self._cache: list = []
        self._lock = threading.Lock()

    @property
    def known_bound(self) -> int | None:
        """Largest index available, or None when unbounded."""
        if isinstance(self.spec, ExplicitCoeffs):
            return len(self.spec.values) - 1
        if isinstance(self.spec, (Derivative, Masked)):
            inner = CoefficientStream(self.spec.inner).known_bound
            if inner is None:
                return None
            return inner - self.spec.order if isinstance(self.spec, Derivative) else inner
        if isinstance(self.spec, Sum):
            bounds = [CoefficientStream(s).known_bound for s in (self.spec.left, self.spec.right)]
            bounds = [b for b in bounds if b is not None]
            return min(bounds) if bounds else None
        if isinstance(self.spec, Rescale):
            return CoefficientStream(self.spec.inner).known_bound
        return None

    def _extend(self, n_max: int) -> None:
        with self._lock:
            if len(self._cache) <= n_max:
                self._cache = _materialize(self.spec, n_max)

    def exact_coefficient(self, n: int):
        """gamma_n as Fraction or GaussianRational."""
        if n < 0:
            raise IndexError("negative index")
        if n >= len(self._cache):
            self._extend(max(n, 2 * len(self._cache)))
        return self._cache[n]

    def exact_prefix(self, n_max: int) -> list:
        self._extend(n_max)
        return self._cache[: n_max + 1]

    def coefficient(self, n: int):
        """gamma_n as Fraction, or mpc at the current working precision."""
        v = self.exact_coefficient(n)
        return v if isinstance(v, Fraction) else v.to_mpc()

    def prefix(self, n_max: int) -> list:
        return [v if isinstance(v, Fraction) else v.to_mpc() for v in self.exact_prefix(n_max)]

    def is_real(self, n_max: int = 0) -> bool:
        return all(isinstance(v, Fraction) for v in self.exact_prefix(n_max))

    def exact_ratio(self, n: int):
        """gamma_{n-1}/gamma_n, exact."""
        prev, cur = self.exact_coefficient(n - 1), self.exact_coefficient(n)
        if scalar_is_zero(cur):
            raise ZeroDivisionError(f"coefficient {n} is zero")
        return scalar_div(prev, cur)


def coefficients(spec: SeriesSpec, n_max: int) -> list:
    """gamma_0..gamma_{n_max} for the given source."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    return CoefficientStream(spec).prefix(n_max)


# ---------------------------------------------------------------------------
# tameness and radii


@dataclass(frozen=True)
class TamenessCertificate:
    """Window statement: for start_index <= n <= verified_up_to the
    coefficients are nonzero and lower <= |gamma_{n-1}/gamma_n| <= upper."""

    lower: object
    upper: object
    start_index: int
    verified_up_to: int

    def to_json(self) -> dict:
        return {
            "lower": float(self.lower),
            "upper": float(self.upper),
            "start_index": self.start_index,
            "verified_up_to": self.verified_up_to,
        }


def certify_tameness(
    stream: CoefficientStream,
    horizon: int = DEFAULT_CERTIFICATION_HORIZON,
    late_zero_threshold: int = LATE_ZERO_THRESHOLD,
    late_zero_start: int = LATE_ZERO_START,
) -> TamenessCertificate:
    if horizon < 2:
        raise ValueError("horizon must be at least 2")
    bound = stream.known_bound
    if bound is not None:
        horizon = min(horizon, bound)
    values = stream.exact_prefix(horizon)
    zeros = [n for n, v in enumerate(values) if scalar_is_zero(v)]
    late = [n for n in zeros if n >= late_zero_start]
    if len(late) > late_zero_threshold:
        raise NotTameError(
            f"{len(late)} zero coefficients beyond index {late_zero_start}", witness=late[-1]
        )
    start = zeros[-1] + 2 if zeros else 1
    if horizon - start < 4:
        witness = zeros[-1] if zeros else horizon
        raise NotTameError("zero coefficients persist to the horizon", witness=witness)

    moduli = []
    exact = all(isinstance(v, Fraction) for v in values)
    for n in range(start, horizon + 1):
        prev, cur = values[n - 1], values[n]
        if exact:
            moduli.append(abs(prev / cur))
        else:
            num = scalar_abs_squared(prev)
            den = scalar_abs_squared(cur)
            moduli.append(mp.sqrt(to_mpf(num) / to_mpf(den)))
    u, v = min(moduli), max(moduli)

    # heuristic guard against clearly unbounded ratio growth
    peak_at = start + max(range(len(moduli)), key=lambda i: moduli[i])
    if v > max(u, 1) * 2**24 and peak_at > horizon - max(4, horizon // 8):
        raise NotTameError("ratio moduli appear unbounded", witness=peak_at)
    return TamenessCertificate(u, v, start, horizon)


@dataclass(frozen=True)
class RadiusBounds:
    """radius tracks 1/limsup |gamma_n|^(1/n); radius_upper the liminf twin."""

    radius: Enclosure
    radius_upper: Enclosure
    exact: object  # Radical | Fraction | None
    method: str

    def to_json(self) -> dict:
        out = {
            "radius": float(self.radius.value),
            "radius_error": float(self.radius.error),
            "radius_upper": float(self.radius_upper.value),
            "radius_upper_error": float(self.radius_upper.error),
            "method": self.method,
        }
        if isinstance(self.exact, Radical):
            out["exact"] = {"base": _fraction_to_json(self.exact.base), "index": self.exact.index}
        elif isinstance(self.exact, Fraction):
            out["exact"] = {"base": _fraction_to_json(self.exact), "index": 1}
        return out


def spec_to_rational(spec: SeriesSpec) -> RationalFunctionRep | None:
    """Exact rational form of the series, when one exists in this algebra."""
    if isinstance(spec, RationalFunction):
        return spec.rep.reduce()
    if isinstance(spec, FreeProduct):
        return growth_series(spec.spec)
    if isinstance(spec, ExplicitCoeffs):
        return RationalFunctionRep(Poly(spec.values), Poly.one(), True)
    if isinstance(spec, Derivative):
        inner = spec_to_rational(spec.inner)
        if inner is None:
            return None
        for _ in range(spec.order):
            inner = inner.derivative()
        return inner
    if isinstance(spec, Sum):
        left = spec_to_rational(spec.left)
        right = spec_to_rational(spec.right)
        if left is None or right is None:
            return None
        return left + right
    if isinstance(spec, Rescale):
        inner = spec_to_rational(spec.inner)
        return None if inner is None else inner.scale_arg(spec.factor)
    if isinstance(spec, OscillatingModel):
        return _oscillating_rational(spec)
    if isinstance(spec, Masked):
        inner = spec_to_rational(spec.inner)
        if inner is None:
            return None
        from .rational_operators import section_by_subset

        return section_by_subset(inner, spec.subset)
    return None


def _oscillating_rational(spec: OscillatingModel) -> RationalFunctionRep | None:
    if not isinstance(spec.indices, RationalSubset):
        return None
    if not isinstance(spec.a, Fraction) or not isinstance(spec.b, Fraction):
        return None
    U = spec.indices
    h = U.period
    exceptions = set(U.added) | set(U.removed)
    start = max(exceptions) + 1 if exceptions else 1
    gammas = _materialize(spec, start + h)
    in_cycle = sum(1 for r in range(h) if r in U.residues)
    cycle = spec.a**in_cycle * spec.b ** (h - in_cycle)
    head = Poly(gammas[:start])
    denominator = Poly([1] + [0] * (h - 1) + [-cycle])
    tail_numerator = Poly.zero()
    for n in range(start, start + h):
        tail_numerator = tail_numerator + Poly.monomial(n, gammas[n])
    return RationalFunctionRep(head * denominator + tail_numerator, denominator).reduce()


def radius_bounds(stream: CoefficientStream, horizon: int = DEFAULT_CERTIFICATION_HORIZON) -> RadiusBounds:
    certificate = certify_tameness(stream, horizon)
    rep = spec_to_rational(stream.spec)
    if rep is not None and rep.denominator.degree > 0:
        from .pole_analysis import boundary_poles

        poles = boundary_poles(rep.reduce())
        enc = poles.radius_enclosure
        return RadiusBounds(enc, enc, poles.radius_exact, "minimal pole modulus")

    values = stream.exact_prefix(horizon)
    lo = max(certificate.start_index, horizon // 2)
    ws = []
    for n in range(lo, horizon + 1):
        mod2 = scalar_abs_squared(values[n])
        ws.append(mp.power(to_mpf(mod2), mp.mpf(1) / (2 * n)))
    w_hi, w_lo = max(ws), min(ws)
    r_val, R_val = 1 / w_hi, 1 / w_lo
    drift = (R_val - r_val) + (r_val + R_val) * mp.mpf(4 * math.log(max(horizon, 2))) / horizon
    return RadiusBounds(
        Enclosure(r_val, drift), Enclosure(R_val, drift), None, "tail root estimate"
    )


# ---------------------------------------------------------------------------
# coefficient CSV files


def write_coefficients_csv(path: str, values) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "numerator", "denominator"])
        for n, v in enumerate(values):
            q = Fraction(v)
            writer.writerow([n, q.numerator, q.denominator])


def read_coefficients_csv(path: str) -> ExplicitCoeffs:
    values = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["n", "numerator", "denominator"]:
            raise ValueError("expected header n,numerator,denominator")
        for expected, row in enumerate(reader):
            if int(row["n"]) != expected:
                raise ValueError(f"row {expected} is out of order or missing")
            values.append(Fraction(int(row["numerator"]), int(row["denominator"])))
    if not values:
        raise ValueError("no coefficients in file")
    return ExplicitCoeffs(tuple(values))
