"""Command-line front end.

Five modes share one input vocabulary:

  analyze    ratio-limit detection, emits the accumulation report
  duality    both sides of the boundary duality, emits the full report
  stratify   one verified sample per denominator stratum at a given period
  sections   per-class Hadamard sections of a rational input + identity suite
  oracle     growth series vs breadth-first word counts for a free product

Exit codes: 0 success, 1 a mathematical check failed, 2 bad input,
3 inconclusive. Precision defaults to $TSL_PRECISION_BITS or 256 bits.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .groups_growth import FreeProductSpec, bfs_counts, growth_series
from .numerics import precision_from_env
from .opposite_algebra import enumerate_labels, stratum_sample
from .opposite_space import DEFAULT_H_MAX, detect_accumulation, ratios_to_csv
from .pole_analysis import NonMeromorphicInput
from .polynomials import Poly
from .rational_functions import RationalFunctionRep
from .rational_operators import operator_identity_suite, section_rational
from .sequence_core import (
    CoefficientStream,
    ExplicitCoeffs,
    FreeProduct,
    NamedIndexSet,
    NotTameError,
    OscillatingModel,
    RationalFunction,
    RationalSubset,
    SeriesSpec,
    SqrtRatioSeries,
    spec_from_json,
    spec_to_rational,
)
from .duality import verify_duality

EXIT_OK = 0
EXIT_MATH_FAIL = 1
EXIT_BAD_INPUT = 2
EXIT_INCONCLUSIVE = 3

STRATIFY_SCALE = Fraction(3, 2)


class InputError(ValueError):
    """Anything wrong with flags, files, or inline syntax (exit 2)."""


@dataclass(frozen=True)
class RunConfig:
    mode: str
    spec: SeriesSpec | None
    horizon: int | None
    precision_bits: int
    tolerance: object | None
    h_max: int
    out: str | None
    emit_ratios: str | None
    strict: bool
    seed: int
    stratify_period: int | None

    def __post_init__(self):
        if self.precision_bits < 64:
            raise InputError("precision must be at least 64 bits")
        if self.tolerance is not None and not self.tolerance > 0:
            raise InputError("tolerance must be positive")
        if self.horizon is not None and self.horizon < 4:
            raise InputError("horizon must be at least 4")
        if self.h_max < 1:
            raise InputError("h-max must be at least 1")


# ---------------------------------------------------------------------------
# input parsing


def _fraction(token: str) -> Fraction:
    try:
        return Fraction(token.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse {token!r} as a rational number") from exc


def parse_rational_arg(text: str) -> RationalFunctionRep:
    """Inline rational function: 'n0,n1,...;d0,d1,...' in ascending degree,
    each token an exact rational like 3 or -5/7."""
    parts = text.split(";")
    if len(parts) != 2:
        raise InputError("rational input needs exactly one ';' between numerator and denominator")
    num, den = ([_fraction(t) for t in part.split(",") if t.strip()] for part in parts)
    if not num or not den:
        raise InputError("numerator and denominator both need at least one coefficient")
    if all(c == 0 for c in den):
        raise InputError("denominator is zero")
    try:
        return RationalFunctionRep.make(Poly(num), Poly(den))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(str(exc)) from exc


def load_coeff_file(path: str) -> ExplicitCoeffs:
    """Coefficients from a text/CSV file: comma- or line-separated rationals,
    blank lines and '#' comments ignored."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    tokens = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        tokens.extend(t for t in line.replace(",", " ").split() if t)
    if not tokens:
        raise InputError(f"{path} holds no coefficients")
    return ExplicitCoeffs.make([_fraction(t) for t in tokens])


def parse_model_arg(text: str) -> SeriesSpec:
    """Built-in model fixtures, or a SeriesSpec JSON document.

    'sqrt'                                   the branching fixture
    'oscillating:period=4;classes=0,1;a=1/2;b=1/3'
    'oscillating:indices=squares;a=1/2;b=1/3'
    '@path.json' or an inline '{...}'        full SeriesSpec JSON
    """
    text = text.strip()
    if text == "sqrt":
        return SqrtRatioSeries()
    if text.startswith("@") or text.startswith("{"):
        try:
            raw = text[1:] if text.startswith("{") is False else text
            doc = json.loads(open(raw, encoding="utf-8").read() if text.startswith("@") else text)
            return spec_from_json(doc)
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise InputError(f"bad model JSON: {exc}") from exc
    if text.startswith("oscillating:"):
        fields: dict[str, str] = {}
        for chunk in text[len("oscillating:"):].split(";"):
            if not chunk.strip():
                continue
            if "=" not in chunk:
                raise InputError(f"model field {chunk!r} is not key=value")
            k, v = chunk.split("=", 1)
            fields[k.strip()] = v.strip()
        missing = {"a", "b"} - fields.keys()
        if missing:
            raise InputError(f"oscillating model needs {sorted(missing)}")
        a, b = _fraction(fields["a"]), _fraction(fields["b"])
        if fields.get("indices") == "squares":
            return OscillatingModel.make(NamedIndexSet("squares"), a, b)
        if "period" not in fields or "classes" not in fields:
            raise InputError("oscillating model needs period= and classes= (or indices=squares)")
        try:
            period = int(fields["period"])
            residues = {int(t) for t in fields["classes"].split(",") if t.strip()}
            subset = RationalSubset.make(period, residues)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        return OscillatingModel.make(subset, a, b)
    raise InputError(f"unknown model {text!r}")


def _build_spec(args) -> SeriesSpec:
    picks = [
        ("group", args.group),
        ("rational", args.rational),
        ("coeffs", args.coeffs),
        ("model", args.model),
    ]
    chosen = [(name, v) for name, v in picks if v is not None]
    if len(chosen) != 1:
        raise InputError("give exactly one of --group, --rational, --coeffs, --model")
    name, value = chosen[0]
    if name == "group":
        try:
            orders = [int(t) for t in value.split(",") if t.strip()]
            return FreeProduct.make(orders)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    if name == "rational":
        return RationalFunction(parse_rational_arg(value))
    if name == "coeffs":
        return load_coeff_file(value)
    return parse_model_arg(value)


def _config_from_args(args) -> RunConfig:
    spec = None
    if args.mode not in ("stratify",):
        spec = _build_spec(args)
    if args.precision is not None and args.precision < 64:
        raise InputError("precision must be at least 64 bits")
    try:
        bits = args.precision if args.precision is not None else precision_from_env()
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    tol = None
    if args.tolerance is not None:
        try:
            tol = mp.mpf(args.tolerance)
        except ValueError as exc:
            raise InputError(f"bad tolerance {args.tolerance!r}") from exc
    return RunConfig(
        mode=args.mode,
        spec=spec,
        horizon=args.horizon,
        precision_bits=bits,
        tolerance=tol,
        h_max=args.h_max if args.h_max is not None else DEFAULT_H_MAX,
        out=args.out,
        emit_ratios=getattr(args, "emit_ratios", None),
        strict=getattr(args, "strict", False),
        seed=getattr(args, "seed", 0),
        stratify_period=getattr(args, "period", None),
    )


# ---------------------------------------------------------------------------
# output


def _emit(doc: dict | list, out: str | None) -> None:
    blob = json.dumps(doc, indent=2) + "\n"
    if out is None:
        sys.stdout.write(blob)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(blob)


def _effective_horizon(config: RunConfig) -> int | None:
    """Explicit coefficient files are finite; never read past the end."""
    if isinstance(config.spec, ExplicitCoeffs):
        available = len(config.spec.values) - 1
        return min(config.horizon, available) if config.horizon is not None else available
    return config.horizon


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(config: RunConfig) -> int:
    stream = CoefficientStream(config.spec)
    kwargs = {}
    horizon = _effective_horizon(config)
    if horizon is not None:
        kwargs["horizon"] = horizon
    if config.tolerance is not None:
        kwargs["tolerance"] = config.tolerance
    report = detect_accumulation(
        stream, h_max=config.h_max, precision_bits=config.precision_bits, **kwargs
    )
    _emit(report.to_json(), config.out)
    if config.emit_ratios:
        ratios_to_csv(
            stream,
            config.emit_ratios,
            horizon if horizon is not None else 256,
            period=report.period or 1,
        )
    if not report.finite:
        failures = report.diagnostics.get("failures") or {}
        for key, why in sorted(failures.items(), key=lambda kv: str(kv[0]))[:6]:
            print(f"inconclusive: period {key}: {why}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_duality(config: RunConfig) -> int:
    try:
        report = verify_duality(
            config.spec,
            horizon=_effective_horizon(config),
            precision_bits=config.precision_bits,
            tolerance=config.tolerance,
            h_max=config.h_max,
            strict=config.strict,
        )
    except NonMeromorphicInput as exc:
        _emit({"verdict": "refused", "error": "non-meromorphic input", "detail": str(exc)},
              config.out)
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    _emit(report.to_json(), config.out)
    if report.verdict == "pass":
        return EXIT_OK
    if report.verdict == "fail":
        for msg in report.messages:
            print(f"fail: {msg}", file=sys.stderr)
        return EXIT_MATH_FAIL
    for msg in report.messages:
        print(f"{report.verdict}: {msg}", file=sys.stderr)
    return EXIT_INCONCLUSIVE


def cmd_stratify(config: RunConfig) -> int:
    h = config.stratify_period
    if h is None or not 1 <= h <= 8:
        raise InputError("stratify needs a period between 1 and 8")
    entries = []
    failed = 0
    for label in enumerate_labels(h):
        row = {"label": label.format(), "period": h, "polynomial": label.poly.to_json()}
        try:
            sample = stratum_sample(label, STRATIFY_SCALE, config.seed)
            row["sample"] = [
                {"num": int(v.numerator), "den": int(v.denominator)} for v in sample
            ]
            row["verified"] = True
        except ArithmeticError as exc:
            row["verified"] = False
            row["error"] = str(exc)
            failed += 1
        entries.append(row)
    _emit(entries, config.out)
    if failed:
        print(f"{failed} label(s) exhausted the sample budget", file=sys.stderr)
        return EXIT_MATH_FAIL
    return EXIT_OK


def cmd_sections(config: RunConfig) -> int:
    rep = spec_to_rational(config.spec)
    if rep is None:
        raise InputError("sections mode needs a rational input (--group or --rational)")
    kwargs = {}
    horizon = _effective_horizon(config)
    if horizon is not None:
        kwargs["horizon"] = horizon
    detection = detect_accumulation(
        CoefficientStream(config.spec),
        h_max=config.h_max,
        precision_bits=config.precision_bits,
        **kwargs,
    )
    if not detection.finite:
        _emit({"verdict": "inconclusive", "accumulation": detection.to_json()}, config.out)
        print("inconclusive: no finite period detected", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    h = detection.period
    sections = [section_rational(rep, h, e) for e in range(h)]
    identity = operator_identity_suite(rep, h)
    doc = {
        "period": h,
        "input": rep.format(),
        "sections": [
            {
                "class_index": s.class_index,
                "rational": s.result.format(),
                "value": s.to_json(),
            }
            for s in sections
        ],
        "identities": identity.to_json(),
    }
    _emit(doc, config.out)
    if not identity.ok:
        print("operator identities failed", file=sys.stderr)
        return EXIT_MATH_FAIL
    return EXIT_OK


def cmd_oracle(config: RunConfig) -> int:
    if not isinstance(config.spec, FreeProduct):
        raise InputError("oracle mode needs --group")
    n_max = config.horizon if config.horizon is not None else 12
    spec = config.spec.spec
    walked = bfs_counts(spec, n_max)
    series = [int(c) for c in growth_series(spec).series(n_max)]
    agree = walked == series
    doc = {
        "orders": list(spec.orders),
        "n_max": n_max,
        "bfs_counts": walked,
        "series_counts": series,
        "agree": agree,
    }
    _emit(doc, config.out)
    if not agree:
        print("oracle mismatch between enumeration and series", file=sys.stderr)
        return EXIT_MATH_FAIL
    return EXIT_OK


# ---------------------------------------------------------------------------
# wiring


def _make_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="tameseries",
        description="Ratio-limit structure and boundary duality of power series.",
    )
    sub = top.add_subparsers(dest="mode", required=True)

    src = argparse.ArgumentParser(add_help=False)
    src.add_argument("--group", help="free product factor orders, e.g. 2,3")
    src.add_argument("--rational", help="inline rational function 'n0,n1,...;d0,d1,...'")
    src.add_argument("--coeffs", help="file of coefficients (comma- or line-separated)")
    src.add_argument("--model", help="'sqrt', 'oscillating:...', '@spec.json', or inline JSON")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--horizon", type=int, help="number of coefficients to consume")
    common.add_argument("--precision", type=int, help="working precision in bits (>= 64)")
    common.add_argument("--tolerance", help="pass/fail tolerance, e.g. 1e-30")
    common.add_argument("--h-max", dest="h_max", type=int, help="largest period to try")
    common.add_argument("--out", help="write the JSON report here instead of stdout")

    p = sub.add_parser("analyze", parents=[src, common],
                       help="detect classwise ratio limits")
    p.add_argument("--emit-ratios", dest="emit_ratios", metavar="CSV",
                   help="also write the consecutive-ratio sequence as CSV")

    p = sub.add_parser("duality", parents=[src, common],
                       help="verify the opposite/top denominator duality")
    p.add_argument("--strict", action="store_true",
                   help="re-run the comparison at doubled precision")

    p = sub.add_parser("stratify", parents=[common],
                       help="sample every denominator stratum at a period")
    p.add_argument("period", type=int, help="period h, between 1 and 8")
    p.add_argument("--seed", type=int, default=0, help="sampling seed")

    sub.add_parser("sections", parents=[src, common],
                   help="per-class sections of a rational input")

    sub.add_parser("oracle", parents=[src, common],
                   help="cross-check group growth against enumeration")
    return top


_COMMANDS = {
    "analyze": cmd_analyze,
    "duality": cmd_duality,
    "stratify": cmd_stratify,
    "sections": cmd_sections,
    "oracle": cmd_oracle,
}


def main(argv=None) -> int:
    parser = _make_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
        return _COMMANDS[config.mode](config)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except NotTameError as exc:
        print(f"error: input series is not tame: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (ValueError, ZeroDivisionError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
