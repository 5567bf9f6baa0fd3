"""Boundary poles of rational series and their polar data.

The denominator is split into squarefree layers first, so multiplicities
come from exact algebra and the numeric root finder only ever sees simple
roots. Boundary membership (modulus equal to the minimal pole modulus) is
decided by exact certificates where a rational subfactor can be
identified, and by interval refinement otherwise, up to a hard precision
cap. Ties that survive the cap are reported, not guessed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .numerics import (
    ROOT_PRECISION_CAP_BITS,
    Enclosure,
    Radical,
    reconstruct_fraction,
    to_mpf,
    workprec,
)
from .polynomials import Poly, squarefree_decomposition
from .rational_functions import RationalFunctionRep, reduce

__all__ = [
    "reduce",
    "NonMeromorphicInput",
    "UndecidableBoundary",
    "PoleRecord",
    "PoleSet",
    "PolarData",
    "PrincipalPart",
    "boundary_poles",
    "polar_polynomials",
]


class NonMeromorphicInput(ValueError):
    """The series has no rational form, so there is no pole side to analyze."""


class UndecidableBoundary(ArithmeticError):
    """Boundary membership stayed ambiguous at the precision cap."""

    def __init__(self, ambiguous, cap_bits: int):
        self.ambiguous = tuple(ambiguous)
        self.cap_bits = cap_bits
        pts = ", ".join(mp.nstr(x, 12) for x in self.ambiguous)
        super().__init__(
            f"cannot separate pole moduli at {cap_bits} bits: roots near [{pts}]"
        )


@dataclass(frozen=True)
class PoleRecord:
    value: object  # mpc approximation
    error: object  # mpf radius
    multiplicity: int
    modulus: Enclosure
    exact_value: Fraction | None
    exact_modulus: Radical | None
    boundary: bool
    layer: int

    def to_json(self) -> dict:
        return {
            "re": float(mp.re(self.value)),
            "im": float(mp.im(self.value)),
            "radius": float(self.error),
            "multiplicity": self.multiplicity,
            "boundary": self.boundary,
        }


@dataclass(frozen=True)
class PoleSet:
    poles: tuple[PoleRecord, ...]
    radius_enclosure: Enclosure
    radius_exact: Radical | None
    top_order: int
    precision_bits: int

    def boundary(self) -> tuple[PoleRecord, ...]:
        return tuple(p for p in self.poles if p.boundary)

    def to_json(self) -> dict:
        out = {
            "radius": float(self.radius_enclosure.value),
            "radius_error": float(self.radius_enclosure.error),
            "top_order": self.top_order,
            "precision_bits": self.precision_bits,
            "poles": [p.to_json() for p in self.poles],
        }
        if self.radius_exact is not None:
            out["radius_exact"] = {
                "base": {"num": self.radius_exact.base.numerator, "den": self.radius_exact.base.denominator},
                "index": self.radius_exact.index,
            }
        return out


# ---------------------------------------------------------------------------
# root isolation per squarefree factor


def _factor_roots(g: Poly, bits: int) -> list[tuple]:
    """Simple roots of a squarefree rational polynomial.

    Returns (value, error) pairs at roughly `bits` precision. Newton
    polishing against the exact coefficients supplies the error radius
    |g(x)/g'(x)|, valid because every root is simple.
    """
    if g.degree == 1:
        root = -g[0] / g[1]
        with workprec(bits + 16):
            x = mp.mpc(to_mpf(root))
            return [(x, mp.mpf(2) ** (8 - bits) * (1 + abs(x)))]
    gp = g.derivative()
    with workprec(bits + 64):
        coeffs = [to_mpf(c) for c in reversed(g.coeffs)]
        extra = 64
        while True:
            try:
                raw = mp.polyroots(coeffs, maxsteps=200, extraprec=extra)
                break
            except mp.NoConvergence:
                extra *= 4
                if extra > 16 * bits + 4096:
                    raise
        out = []
        for x in raw:
            x = mp.mpc(x)
            for _ in range(4):
                d = gp.eval(x)
                if d == 0:
                    break
                x = x - g.eval(x) / d
            resid = abs(g.eval(x))
            slope = abs(gp.eval(x))
            if slope == 0:
                err = mp.mpf(2) ** (16 - bits) * (1 + abs(x))
            else:
                err = 4 * resid / slope + mp.mpf(2) ** (8 - bits) * (1 + abs(x))
            out.append((x, err))
    return out


def _exact_rational_root(g: Poly, x, err) -> Fraction | None:
    if abs(mp.im(x)) > err:
        return None
    q = reconstruct_fraction(mp.re(x), 4 * err + mp.mpf(2) ** (16 - mp.prec))
    if q is not None and g.eval(q) == 0:
        return q
    return None


def _rationalize_product(root_values, errors) -> Poly | None:
    """Monic polynomial with the given approximate roots, as exact
    fractions, when every coefficient rounds to a nearby rational."""
    coeffs = [mp.mpc(1)]
    for x in root_values:
        nxt = [mp.mpc(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i] += c
            nxt[i + 1] -= c * x
        coeffs = nxt
    k = len(root_values)
    grow = max([1 + abs(x) for x in root_values] + [mp.mpf(1)])
    bound = sum(errors, mp.mpf(0)) * k * grow ** max(k - 1, 0) + mp.mpf(2) ** (16 - mp.prec)
    out = []
    for c in reversed(coeffs):  # ascending
        if abs(mp.im(c)) > bound:
            return None
        q = reconstruct_fraction(mp.re(c), bound)
        if q is None:
            return None
        out.append(q)
    return Poly(out)


def _unit_exact_modulus(sub: Poly) -> Radical | None:
    """Shared root modulus of a rational subfactor, when it is forced:
    linear factors, binomials c0 + c_k t^k, and complex-conjugate
    quadratics all pin the modulus exactly."""
    k = sub.degree
    c0 = sub[0]
    if c0 == 0:
        return None
    if k == 1:
        return Radical(abs(c0 / sub[1]), 1)
    lead = sub[k]
    if all(sub[j] == 0 for j in range(1, k)):
        return Radical(abs(c0 / lead), k)
    if k == 2:
        b, c = sub[1] / lead, c0 / lead
        if b * b - 4 * c < 0:
            return Radical(c, 2)
    return None


@dataclass
class _Unit:
    layer: int
    mult: int
    roots: list  # (value, error, exact Fraction|None)
    modulus: Enclosure
    exact_modulus: Radical | None


def _build_units(layers, bits: int) -> list[_Unit]:
    units: list[_Unit] = []
    with workprec(bits + 64):
        for layer_idx, (g, mult) in enumerate(layers):
            roots = []
            for x, err in _factor_roots(g, bits):
                exact = _exact_rational_root(g, x, err)
                if exact is not None:
                    x, err = mp.mpc(to_mpf(exact)), mp.mpf(2) ** (8 - bits) * (1 + abs(x))
                roots.append((x, err, exact))
            # group roots of this factor by overlapping modulus
            groups: list[list] = []
            for rec in roots:
                x, err, _ = rec
                m = Enclosure(abs(x), err)
                placed = False
                for grp in groups:
                    if any(Enclosure(abs(gx), ge).overlaps(m) for gx, ge, _ in grp):
                        grp.append(rec)
                        placed = True
                        break
                if not placed:
                    groups.append([rec])
            for grp in groups:
                mods = [abs(x) for x, _, _ in grp]
                errs = [e for _, e, _ in grp]
                enc = Enclosure(min(mods), max(errs) + (max(mods) - min(mods)))
                if len(grp) == 1 and grp[0][2] is not None:
                    exact_mod = Radical(abs(grp[0][2]), 1) if grp[0][2] != 0 else None
                else:
                    sub = _rationalize_product([x for x, _, _ in grp], errs)
                    exact_mod = None
                    if sub is not None and sub.divides(g):
                        exact_mod = _unit_exact_modulus(sub)
                if exact_mod is not None:
                    enc = Enclosure(exact_mod.to_mpf(), mp.mpf(2) ** (8 - bits))
                units.append(_Unit(layer_idx, mult, grp, enc, exact_mod))
    return units


def boundary_poles(rep: RationalFunctionRep, precision_bits: int | None = None) -> PoleSet:
    """Isolate all denominator roots and mark those of minimal modulus."""
    rep = rep.reduce()
    den = rep.denominator
    if den.degree < 1:
        raise ValueError("denominator is constant: the series has no poles")
    layers = squarefree_decomposition(den)
    bits = precision_bits if precision_bits is not None else mp.prec
    cap = max(ROOT_PRECISION_CAP_BITS, bits)

    while True:
        units = _build_units(layers, bits)
        mins = min(units, key=lambda u: u.modulus.value)
        for u in units:
            # exact comparisons override the numeric pick on near ties
            if (
                u.exact_modulus is not None
                and mins.exact_modulus is not None
                and u.exact_modulus < mins.exact_modulus
            ):
                mins = u
        boundary: list[_Unit] = []
        ambiguous: list[_Unit] = []
        for u in units:
            if u is mins:
                boundary.append(u)
            elif u.exact_modulus is not None and mins.exact_modulus is not None:
                if u.exact_modulus == mins.exact_modulus:
                    boundary.append(u)
            elif u.modulus.overlaps(mins.modulus):
                ambiguous.append(u)
        if not ambiguous:
            break
        if bits >= cap:
            raise UndecidableBoundary([u.roots[0][0] for u in ambiguous], cap)
        bits = min(2 * bits, cap)

    with workprec(max(bits, mp.prec) + 16):
        boundary_ids = {id(u) for u in boundary}
        records = []
        for u in units:
            flag = id(u) in boundary_ids
            for x, err, exact in u.roots:
                records.append(
                    PoleRecord(
                        value=x,
                        error=err,
                        multiplicity=u.mult,
                        modulus=Enclosure(abs(x), err),
                        exact_value=exact,
                        exact_modulus=u.exact_modulus,
                        boundary=flag,
                        layer=u.layer,
                    )
                )
        total = sum(r.multiplicity for r in records)
        if total != den.degree:
            raise ArithmeticError(
                f"root count mismatch: found multiplicity {total}, expected {den.degree}"
            )
        top_order = max(r.multiplicity for r in records if r.boundary)
        radius_exact = None
        for u in boundary:
            if u.exact_modulus is not None:
                radius_exact = u.exact_modulus
                break
        enc = min((u.modulus for u in boundary), key=lambda e: e.error)
        if radius_exact is not None:
            enc = Enclosure(radius_exact.to_mpf(), mp.mpf(2) ** (8 - bits))
    return PoleSet(tuple(records), enc, radius_exact, top_order, bits)


# ---------------------------------------------------------------------------
# polar polynomial, top denominator, principal parts


@dataclass(frozen=True)
class PrincipalPart:
    pole: PoleRecord
    coefficients: tuple  # c_{i,1} .. c_{i,d_i}

    def to_json(self) -> dict:
        return {
            "pole": self.pole.to_json(),
            "coefficients": [{"re": float(mp.re(c)), "im": float(mp.im(c))} for c in self.coefficients],
        }


@dataclass(frozen=True)
class PolarData:
    polar_polynomial: Poly | None
    polar_coefficients: tuple
    top_denominator: Poly | None
    top_coefficients: tuple
    top_order: int
    principal_parts: tuple[PrincipalPart, ...]
    exact: bool

    def to_json(self) -> dict:
        out = {
            "top_order": self.top_order,
            "exact": self.exact,
            "polar_coefficients": [
                {"re": float(mp.re(c)), "im": float(mp.im(c))} for c in self.polar_coefficients
            ],
            "top_coefficients": [
                {"re": float(mp.re(c)), "im": float(mp.im(c))} for c in self.top_coefficients
            ],
            "principal_parts": [p.to_json() for p in self.principal_parts],
        }
        if self.polar_polynomial is not None:
            out["polar_polynomial"] = self.polar_polynomial.to_json()
        if self.top_denominator is not None:
            out["top_denominator"] = self.top_denominator.to_json()
        return out


def _numeric_product(roots) -> list:
    coeffs = [mp.mpc(1)]
    for x in roots:
        nxt = [mp.mpc(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i] += c
            nxt[i + 1] -= c * x
        coeffs = nxt
    return list(reversed(coeffs))  # ascending


def _layer_subfactor(g: Poly, boundary_roots) -> tuple[Poly | None, list]:
    """Monic factor of g carrying exactly the boundary roots of g."""
    if len(boundary_roots) == g.degree:
        return g.monic(), [to_mpf(c) for c in g.monic().coeffs]
    values = [r.value for r in boundary_roots]
    errors = [r.error for r in boundary_roots]
    sub = _rationalize_product(values, errors)
    if sub is not None and sub.divides(g):
        return sub, [to_mpf(c) for c in sub.coeffs]
    return None, _numeric_product(values)


def _poly_multiply_numeric(a: list, b: list) -> list:
    out = [mp.mpc(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _taylor_shift_numeric(coeffs: list, center) -> list:
    """Coefficients of p(center + s) by repeated synthetic division."""
    work = [mp.mpc(c) for c in coeffs]
    out = []
    while work:
        quot = [mp.mpc(0)] * (len(work) - 1)
        acc = mp.mpc(0)
        for i in range(len(work) - 1, 0, -1):
            acc = acc * center + work[i]
            quot[i - 1] = acc
        out.append(acc * center + work[0])
        work = quot
    return out


def _series_divide(num: list, den: list, n_terms: int) -> list:
    if den[0] == 0:
        raise ZeroDivisionError("series division needs a unit constant term")
    out = []
    for n in range(n_terms):
        acc = num[n] if n < len(num) else mp.mpc(0)
        for i in range(1, min(n, len(den) - 1) + 1):
            acc -= den[i] * out[n - i]
        out.append(acc / den[0])
    return out


def polar_polynomials(rep: RationalFunctionRep, poles: PoleSet) -> PolarData:
    rep = rep.reduce()
    den = rep.denominator
    layers = squarefree_decomposition(den)
    boundary = poles.boundary()
    with workprec(poles.precision_bits + 64):
        polar_exact: Poly | None = Poly.one()
        polar_num = [mp.mpc(1)]
        top_exact: Poly | None = None
        top_num: list = [mp.mpc(1)]
        for layer_idx, (g, mult) in enumerate(layers):
            here = [r for r in boundary if r.layer == layer_idx]
            if not here:
                continue
            sub, sub_num = _layer_subfactor(g, here)
            for _ in range(mult):
                polar_exact = polar_exact * sub if (polar_exact is not None and sub is not None) else None
                polar_num = _poly_multiply_numeric(polar_num, [mp.mpc(c) for c in sub_num])
            if mult == poles.top_order:
                top_exact = sub
                top_num = [mp.mpc(c) for c in sub_num]

        principal = []
        num_coeffs = [mp.mpc(to_mpf(c)) for c in rep.numerator.coeffs]
        den_coeffs = [mp.mpc(to_mpf(c)) for c in den.coeffs]
        for r in boundary:
            d = r.multiplicity
            # deflate the denominator d times at the pole
            q = list(den_coeffs)
            for _ in range(d):
                quot = [mp.mpc(0)] * (len(q) - 1)
                acc = mp.mpc(0)
                for i in range(len(q) - 1, 0, -1):
                    acc = acc * r.value + q[i]
                    quot[i - 1] = acc
                q = quot
            n_shift = _taylor_shift_numeric(num_coeffs, r.value)
            q_shift = _taylor_shift_numeric(q, r.value)
            b = _series_divide(n_shift, q_shift, d)
            coeffs = tuple(b[d - j] for j in range(1, d + 1))
            principal.append(PrincipalPart(r, coeffs))

        exact = polar_exact is not None and top_exact is not None
        return PolarData(
            polar_polynomial=polar_exact if exact else None,
            polar_coefficients=tuple(polar_num),
            top_denominator=top_exact if exact else None,
            top_coefficients=tuple(top_num),
            top_order=poles.top_order,
            principal_parts=tuple(principal),
            exact=exact,
        )
