"""Rational functions as exact numerator/denominator pairs.

The normal form used everywhere downstream: gcd-cancelled, denominator
constant term 1. A rational function here is always a power series at
the origin, so a denominator vanishing at 0 is rejected outright.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .polynomials import Poly, poly_gcd


@dataclass(frozen=True)
class RationalFunctionRep:
    numerator: Poly
    denominator: Poly
    reduced: bool = False

    def __post_init__(self):
        if self.denominator.is_zero():
            raise ZeroDivisionError("zero denominator")
        if self.denominator.constant_term() == 0:
            raise ValueError("denominator vanishes at the origin")

    @classmethod
    def make(cls, numerator, denominator) -> "RationalFunctionRep":
        num = numerator if isinstance(numerator, Poly) else Poly(numerator)
        den = denominator if isinstance(denominator, Poly) else Poly(denominator)
        return cls(num, den)

    def reduce(self) -> "RationalFunctionRep":
        """Cancel the gcd and normalize the denominator constant term to 1."""
        if self.reduced:
            return self
        num, den = self.numerator, self.denominator
        if num.is_zero():
            return RationalFunctionRep(Poly.zero(), Poly.one(), True)
        g = poly_gcd(num, den)
        if g.degree > 0:
            num = num.exact_div(g)
            den = den.exact_div(g)
        c0 = den.constant_term()
        num = Poly([c / c0 for c in num.coeffs])
        den = Poly([c / c0 for c in den.coeffs])
        return RationalFunctionRep(num, den, True)

    # -- series ---------------------------------------------------------

    def series(self, n_max: int) -> list[Fraction]:
        """Taylor coefficients at 0 by unrolling the denominator recurrence."""
        den = self.denominator
        c0 = den.constant_term()
        out = []
        for n in range(n_max + 1):
            acc = self.numerator[n]
            for i in range(1, min(n, den.degree) + 1):
                acc -= den[i] * out[n - i]
            out.append(acc / c0)
        return out

    # -- arithmetic (exact, results unreduced unless stated) -------------

    def __add__(self, other: "RationalFunctionRep") -> "RationalFunctionRep":
        return RationalFunctionRep(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        ).reduce()

    def __sub__(self, other: "RationalFunctionRep") -> "RationalFunctionRep":
        return RationalFunctionRep(
            self.numerator * other.denominator - other.numerator * self.denominator,
            self.denominator * other.denominator,
        ).reduce()

    def __mul__(self, other) -> "RationalFunctionRep":
        if isinstance(other, (int, Fraction)):
            return RationalFunctionRep(self.numerator * other, self.denominator).reduce()
        return RationalFunctionRep(
            self.numerator * other.numerator, self.denominator * other.denominator
        ).reduce()

    __rmul__ = __mul__

    def shift_up(self) -> "RationalFunctionRep":
        """Multiply by the series variable t."""
        return RationalFunctionRep(self.numerator * Poly.variable(), self.denominator, self.reduced)

    def derivative(self) -> "RationalFunctionRep":
        n, d = self.numerator, self.denominator
        return RationalFunctionRep(n.derivative() * d - n * d.derivative(), d * d).reduce()

    def scale_arg(self, c) -> "RationalFunctionRep":
        """P(c*t) for rational c."""
        return RationalFunctionRep(
            self.numerator.scale_arg(c), self.denominator.scale_arg(c)
        ).reduce()

    def equals(self, other: "RationalFunctionRep") -> bool:
        return (self.numerator * other.denominator) == (other.numerator * self.denominator)

    def eval(self, x):
        return self.numerator.eval(x) / self.denominator.eval(x)

    def to_json(self) -> dict:
        return {"numerator": self.numerator.to_json(), "denominator": self.denominator.to_json()}

    def format(self, var: str = "t") -> str:
        if self.denominator == Poly.one():
            return self.numerator.format(var)
        return f"({self.numerator.format(var)}) / ({self.denominator.format(var)})"

    def __repr__(self):
        return f"RationalFunctionRep({self.format()})"


def reduce(rep: RationalFunctionRep) -> RationalFunctionRep:
    """Module-level alias used by the pole side."""
    return rep.reduce()
