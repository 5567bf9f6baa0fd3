"""Dense univariate polynomials with exact rational coefficients.

Coefficients are fractions.Fraction stored in ascending degree with no
trailing zeros; the zero polynomial is the empty tuple and reports
degree -1. The class is immutable and hashable, so values can sit in
dataclasses and sets without copying.

Division, gcd, and the cyclotomic constructors are exact. Evaluation is
a generic Horner that accepts Fraction, int, or mpmath types, which is
how the numeric layers consume these polynomials without a parallel
numeric class.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable


def _coerce(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"not an exact scalar: {c!r}")


class Poly:
    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_coerce(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self._c = tuple(cs)

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "Poly":
        return cls(())

    @classmethod
    def one(cls) -> "Poly":
        return cls((1,))

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def variable(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def monomial(cls, degree: int, c=1) -> "Poly":
        return cls([0] * degree + [c])

    # -- basic structure ----------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._c

    @property
    def degree(self) -> int:
        """Degree, with -1 standing in for the zero polynomial."""
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self._c):
            return self._c[k]
        return Fraction(0)

    def leading(self) -> Fraction:
        if not self._c:
            raise ValueError("zero polynomial has no leading coefficient")
        return self._c[-1]

    def constant_term(self) -> Fraction:
        return self[0]

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self._c == other._c
        return NotImplemented

    def __hash__(self):
        return hash(self._c)

    # -- arithmetic ----------------------------------------------------

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self._c])

    def __add__(self, other) -> "Poly":
        other = self._as_poly(other)
        n = max(len(self._c), len(other._c))
        return Poly([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        return self + (-self._as_poly(other))

    def __rsub__(self, other) -> "Poly":
        return self._as_poly(other) - self

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return Poly([c * other for c in self._c])
        other = self._as_poly(other)
        if not self._c or not other._c:
            return Poly.zero()
        out = [Fraction(0)] * (len(self._c) + len(other._c) - 1)
        for i, a in enumerate(self._c):
            if a == 0:
                continue
            for j, b in enumerate(other._c):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        out = Poly.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    @staticmethod
    def _as_poly(x) -> "Poly":
        if isinstance(x, Poly):
            return x
        if isinstance(x, (int, Fraction)):
            return Poly((x,))
        raise TypeError(f"cannot combine Poly with {x!r}")

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        other = self._as_poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = [Fraction(0)] * max(len(self._c) - len(other._c) + 1, 0)
        rem = list(self._c)
        dlead = other.leading()
        dlen = len(other._c)
        while len(rem) >= dlen:
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) < dlen:
                break
            c = rem[-1] / dlead
            shift = len(rem) - dlen
            q[shift] = c
            for i in range(dlen):
                rem[shift + i] -= c * other._c[i]
            rem.pop()
        return Poly(q), Poly(rem)

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    def divides(self, other: "Poly") -> bool:
        if self.is_zero():
            return other.is_zero()
        return (other % self).is_zero()

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ValueError("division is not exact")
        return q

    # -- calculus and transforms ----------------------------------------

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self._c)][1:])

    def eval(self, x):
        """Horner evaluation; x may be Fraction, int, mpf, or mpc."""
        if isinstance(x, (int, Fraction)):
            acc = Fraction(0)
            for c in reversed(self._c):
                acc = acc * x + c
            return acc
        acc = x * 0
        for c in reversed(self._c):
            acc = acc * x + _num(c, x)
        return acc

    def reversed_to(self, degree: int) -> "Poly":
        """Coefficient reversal x**degree * p(1/x); degree must cover p."""
        if degree < self.degree:
            raise ValueError("reversal degree below polynomial degree")
        out = [Fraction(0)] * (degree + 1)
        for i, c in enumerate(self._c):
            out[degree - i] = c
        return Poly(out)

    def scale_arg(self, c) -> "Poly":
        """p(c*x), exact for rational c."""
        c = _coerce(c)
        scaled = []
        power = Fraction(1)
        for a in self._c:
            scaled.append(a * power)
            power *= c
        return Poly(scaled)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lead = self.leading()
        return Poly([c / lead for c in self._c])

    def unit_constant(self) -> "Poly":
        """Rescale so the constant term is 1 (requires a nonzero constant)."""
        c0 = self.constant_term()
        if c0 == 0:
            raise ValueError("constant term is zero")
        return Poly([c / c0 for c in self._c])

    # -- serialization and display ---------------------------------------

    def to_json(self) -> list[dict]:
        return [{"num": c.numerator, "den": c.denominator} for c in self._c]

    @classmethod
    def from_json(cls, data) -> "Poly":
        return cls([Fraction(d["num"], d["den"]) for d in data])

    def format(self, var: str = "t") -> str:
        if not self._c:
            return "0"
        parts = []
        for i, c in enumerate(self._c):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
                continue
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            term = f"{mag}{var}" if i == 1 else f"{mag}{var}^{i}"
            if not parts:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if c > 0 else f"- {term}")
        return " ".join(parts) if parts else "0"

    def __repr__(self):
        return f"Poly({self.format()})"


def _num(c: Fraction, like):
    # exact-to-numeric coefficient conversion matching the evaluation type
    return (like * 0 + c.numerator) / c.denominator


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor by Euclidean remainders over Q."""
    while not b.is_zero():
        a, b = b, a % b
    if a.is_zero():
        return a
    return a.monic()


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if a.is_zero() or b.is_zero():
        return Poly.zero()
    return (a * b).exact_div(poly_gcd(a, b)).monic()


@lru_cache(maxsize=None)
def cyclotomic(d: int) -> Poly:
    """The d-th cyclotomic polynomial, normalized to constant term 1.

    For d = 1 this is 1 - x (sign flipped from the monic convention);
    for d > 1 the monic cyclotomic already has constant term 1. The
    product over all divisors d | h is exactly 1 - x**h.
    """
    if d < 1:
        raise ValueError("d must be positive")
    p = Poly([-1] + [0] * (d - 1) + [1])  # x^d - 1
    for e in range(1, d):
        if d % e == 0:
            monic_e = cyclotomic(e) if e > 1 else Poly([-1, 1])
            p = p.exact_div(monic_e)
    if d == 1:
        return Poly([1, -1])
    return p


def one_minus_power(h: int) -> Poly:
    """1 - x**h."""
    return Poly([1] + [0] * (h - 1) + [-1])


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: returns [(g_i, i)] with p = lc * prod g_i**i,
    each g_i monic squarefree, pairwise coprime, possibly trivial."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    p = p.monic()
    if p.degree == 0:
        return []
    out = []
    d = p.derivative()
    a = poly_gcd(p, d)
    b = p.exact_div(a)
    c = d.exact_div(a)
    i = 1
    while b.degree > 0:
        step = c - b.derivative()
        g = poly_gcd(b, step)
        if g.degree > 0:
            out.append((g, i))
        b2 = b.exact_div(g) if g.degree > 0 else b
        c2 = (step.exact_div(g) if g.degree > 0 else step)
        b, c = b2, c2
        i += 1
    return out
