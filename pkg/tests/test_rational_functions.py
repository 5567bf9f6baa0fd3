from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import long_division_series
from tameseries.polynomials import Poly
from tameseries.rational_functions import RationalFunctionRep

F = Fraction

fractions = st.fractions(min_value=-4, max_value=4, max_denominator=5)


@st.composite
def reps(draw):
    num = draw(st.lists(fractions, min_size=1, max_size=5))
    den = [F(1)] + draw(st.lists(fractions, min_size=0, max_size=4))
    return RationalFunctionRep.make(Poly(num), Poly(den))


def test_make_rejects_zero_constant_denominator():
    with pytest.raises((ValueError, ZeroDivisionError)):
        RationalFunctionRep.make(Poly([1]), Poly([0, 1]))


def test_series_matches_long_division():
    rep = RationalFunctionRep.make(Poly([1, 5]), Poly([1, 0, -2]))
    got = rep.series(12)
    want = long_division_series([F(1), F(5)], [F(1), F(0), F(-2)], 12)
    assert got == want


def test_geometric_series():
    rep = RationalFunctionRep.make(Poly([1]), Poly([1, -1]))
    assert rep.series(6) == [F(1)] * 7


def test_reduce_cancels_common_factor():
    shared = Poly([1, -2])
    rep = RationalFunctionRep.make(shared * Poly([1, 1]), shared * Poly([1, 0, 3]))
    red = rep.reduce()
    assert red.denominator.degree == 2
    assert red.numerator.degree == 1
    assert red.series(10) == rep.series(10)


def test_arithmetic():
    a = RationalFunctionRep.make(Poly([1]), Poly([1, -1]))
    b = RationalFunctionRep.make(Poly([1]), Poly([1, 1]))
    s = a + b
    p = a * b
    # 1/(1-t) + 1/(1+t) = 2/(1-t^2)
    assert s.reduce().equals(RationalFunctionRep.make(Poly([2]), Poly([1, 0, -1])))
    assert p.equals(RationalFunctionRep.make(Poly([1]), Poly([1, 0, -1])))
    d = a - b
    assert d.series(5) == [x - y for x, y in zip(a.series(5), b.series(5))]


def test_eval():
    rep = RationalFunctionRep.make(Poly([1, 5]), Poly([1, 0, -2]))
    assert rep.eval(F(1, 2)) == F(1 + F(5, 2), F(1, 2))
    assert rep.eval(F(0)) == 1


def test_derivative_matches_series_shift():
    rep = RationalFunctionRep.make(Poly([1, 5]), Poly([1, 0, -2]))
    der = rep.derivative()
    base = rep.series(11)
    want = [(n + 1) * base[n + 1] for n in range(11)]
    assert der.series(10) == want


def test_scale_arg_rescales_coefficients():
    rep = RationalFunctionRep.make(Poly([1, 5]), Poly([1, 0, -2]))
    scaled = rep.scale_arg(F(3, 2))
    base = rep.series(9)
    assert scaled.series(9) == [c * F(3, 2) ** n for n, c in enumerate(base)]


def test_shift_up_multiplies_by_t():
    rep = RationalFunctionRep.make(Poly([1, 5]), Poly([1, 0, -2]))
    assert rep.shift_up().series(8) == [F(0)] + rep.series(7)


def test_format_mentions_variable():
    rep = RationalFunctionRep.make(Poly([1, 5]), Poly([1, 0, -2]))
    text = rep.format(var="t")
    assert "t" in text and "/" in text


def test_json_round_trip():
    rep = RationalFunctionRep.make(Poly([1, 5]), Poly([1, 0, -2]))
    data = rep.to_json()
    back = RationalFunctionRep.make(Poly.from_json(data["numerator"]), Poly.from_json(data["denominator"]))
    assert back.equals(rep)


@given(reps())
def test_series_agrees_with_oracle(rep):
    want = long_division_series(list(rep.numerator.coeffs), list(rep.denominator.coeffs), 10)
    assert rep.series(10) == want


@given(reps(), reps())
def test_sum_and_product_series(a, b):
    sa, sb = a.series(8), b.series(8)
    assert (a + b).series(8) == [x + y for x, y in zip(sa, sb)]
    prod = (a * b).series(8)
    want = [sum(sa[k] * sb[n - k] for k in range(n + 1)) for n in range(9)]
    assert prod == want


@given(reps())
def test_reduce_preserves_series_and_is_coprime(rep):
    red = rep.reduce()
    assert red.series(12) == rep.series(12)
    from tameseries.polynomials import poly_gcd

    assert poly_gcd(red.numerator, red.denominator).degree <= 0
