from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import long_division_series, machi_gamma, sqrt_ratio_series
from tameseries.polynomials import Poly
from tameseries.rational_functions import RationalFunctionRep
from tameseries.rational_subsets import RationalSubset
from tameseries.sequence_core import (
    CoefficientStream,
    Derivative,
    ExplicitCoeffs,
    FreeProduct,
    GaussianRational,
    Masked,
    NamedIndexSet,
    NotTameError,
    OscillatingModel,
    RationalFunction,
    Rescale,
    SqrtRatioSeries,
    Sum,
    as_gaussian,
    certify_tameness,
    coefficients,
    radius_bounds,
    read_coefficients_csv,
    scalar_add,
    scalar_div,
    scalar_is_zero,
    scalar_mul,
    spec_from_json,
    spec_to_rational,
    write_coefficients_csv,
)

F = Fraction


def geometric(ratio=F(1, 2)):
    return RationalFunction.make(Poly([1]), Poly([1, -ratio]))


# --- materialization per source kind ---------------------------------------


def test_explicit_coeffs():
    spec = ExplicitCoeffs.make([1, 2, F(3, 4)])
    assert coefficients(spec, 2) == [F(1), F(2), F(3, 4)]
    stream = CoefficientStream(spec)
    assert stream.known_bound == 2
    with pytest.raises(IndexError):
        stream.exact_coefficient(3)


def test_rational_function_matches_long_division():
    spec = RationalFunction.make(Poly([2, 1]), Poly([1, -1, F(1, 3)]))
    got = coefficients(spec, 14)
    want = long_division_series([F(2), F(1)], [F(1), F(-1), F(1, 3)], 14)
    assert got == want


def test_free_product_counts():
    spec = FreeProduct.make([2, 3])
    got = coefficients(spec, 7)
    assert got == [machi_gamma(n) for n in range(8)]


def test_sqrt_series_matches_oracle():
    got = coefficients(SqrtRatioSeries(), 16)
    assert got == sqrt_ratio_series(16)


def test_oscillating_with_explicit_indices():
    spec = OscillatingModel.make({1, 3}, F(2), F(3))
    # gamma_0 = 1, then multiply by a on listed indices and b elsewhere
    assert coefficients(spec, 4) == [F(1), F(2), F(6), F(12), F(36)]


def test_oscillating_with_subset_indices():
    subset = RationalSubset.residue_class(0, 2)
    spec = OscillatingModel.make(subset, F(1, 2), F(1, 3))
    vals = coefficients(spec, 6)
    expect = [F(1)]
    for n in range(1, 7):
        expect.append(expect[-1] * (F(1, 2) if n % 2 == 0 else F(1, 3)))
    assert vals == expect


def test_oscillating_squares_index_set():
    squares = NamedIndexSet("squares")
    assert [n for n in range(17) if squares.membership(n)] == [0, 1, 4, 9, 16]
    spec = OscillatingModel.make(squares, F(2), F(1, 2))
    vals = coefficients(spec, 10)
    assert vals[1] == F(2)  # 1 is a square
    assert vals[2] == F(1)  # 2 is not


def test_oscillating_rejects_zero_factors():
    with pytest.raises(ValueError):
        OscillatingModel.make({1}, 0, F(1, 2))


def test_derivative_stream():
    spec = Derivative(geometric(), order=1)
    base = coefficients(geometric(), 11)
    got = coefficients(spec, 10)
    assert got == [(n + 1) * base[n + 1] for n in range(11)]


def test_second_derivative():
    spec = Derivative(geometric(), order=2)
    base = coefficients(geometric(), 12)
    got = coefficients(spec, 10)
    assert got == [(n + 1) * (n + 2) * base[n + 2] for n in range(11)]


def test_derivative_rejects_bad_order():
    with pytest.raises(ValueError):
        Derivative(geometric(), order=0)


def test_sum_and_rescale():
    s = Sum(geometric(F(1, 2)), geometric(F(1, 3)))
    got = coefficients(s, 8)
    assert got == [F(1, 2) ** n + F(1, 3) ** n for n in range(9)]
    r = Rescale.make(geometric(F(1, 2)), F(3))
    assert coefficients(r, 6) == [F(3, 2) ** n for n in range(7)]


def test_masked_zeroes_off_subset():
    spec = Masked(geometric(), RationalSubset.residue_class(0, 2))
    got = coefficients(spec, 6)
    assert got == [F(1, 2) ** n if n % 2 == 0 else F(0) for n in range(7)]


def test_derivative_of_explicit_shrinks_bound():
    inner = ExplicitCoeffs.make(list(range(1, 11)))
    stream = CoefficientStream(Derivative(inner, order=2))
    assert stream.known_bound == 7


# --- stream behavior --------------------------------------------------------


def test_stream_cache_consistency():
    stream = CoefficientStream(geometric())
    a = stream.exact_prefix(5)
    b = stream.exact_prefix(12)
    assert b[:6] == a
    assert stream.exact_ratio(4) == F(2)


def test_exact_ratio_zero_division():
    stream = CoefficientStream(ExplicitCoeffs.make([1, 0, 1]))
    with pytest.raises(ZeroDivisionError):
        stream.exact_ratio(1)


def test_is_real_flags_gaussian_factors():
    real = CoefficientStream(geometric())
    assert real.is_real(8)
    gauss = OscillatingModel.make({1}, GaussianRational(F(0), F(1)), F(1, 2))
    assert not CoefficientStream(gauss).is_real(4)


# --- scalar helpers ---------------------------------------------------------


def test_gaussian_arithmetic():
    i = GaussianRational(F(0), F(1))
    one = as_gaussian(F(1))
    assert scalar_mul(i, i) == as_gaussian(F(-1))
    assert scalar_add(i, one) == GaussianRational(F(1), F(1))
    assert scalar_div(one, i) == GaussianRational(F(0), F(-1))
    assert scalar_is_zero(scalar_add(i, GaussianRational(F(0), F(-1))))
    # real results collapse comparisons with plain fractions
    assert scalar_mul(i, i) == as_gaussian(Fraction(-1))


# --- tameness certification -------------------------------------------------


def test_certificate_for_geometric():
    cert = certify_tameness(CoefficientStream(geometric(F(1, 2))), horizon=64)
    assert cert.lower == cert.upper == F(2)
    assert cert.verified_up_to == 64


def test_certificate_start_skips_transient_zeros():
    values = [F(1), F(0), F(1)] + [F(1, 2) ** n for n in range(1, 40)]
    cert = certify_tameness(CoefficientStream(ExplicitCoeffs.make(values)), horizon=40)
    assert cert.start_index == 3


def test_not_tame_when_zeros_persist():
    spec = Masked(geometric(), RationalSubset.residue_class(0, 2))
    with pytest.raises(NotTameError):
        certify_tameness(CoefficientStream(spec), horizon=128)


def test_not_tame_super_exponential_decay():
    # 2^(-n^2) decays faster than any geometric: ratio moduli 2^(2n-1)
    # keep climbing through the end of the window
    values = [F(1, 2 ** (n * n)) for n in range(90)]
    with pytest.raises(NotTameError):
        certify_tameness(CoefficientStream(ExplicitCoeffs.make(values)), horizon=89)


def test_radius_bounds_geometric():
    rb = radius_bounds(CoefficientStream(geometric(F(1, 2))), horizon=96)
    assert abs(float(rb.radius.value) - 2.0) < 0.2


# --- JSON round-trips -------------------------------------------------------


@pytest.mark.parametrize(
    "spec",
    [
        ExplicitCoeffs.make([1, F(2, 3), 4]),
        RationalFunction.make(Poly([1, 5]), Poly([1, 0, -2])),
        FreeProduct.make([2, 3]),
        SqrtRatioSeries(),
        OscillatingModel.make({1, 4}, F(1, 2), F(1, 3)),
        OscillatingModel.make(RationalSubset.residue_class(1, 3), F(2), F(3)),
        OscillatingModel.make(NamedIndexSet("squares"), F(1, 2), F(1, 3)),
        OscillatingModel.make({2}, GaussianRational(F(1, 2), F(1, 3)), F(1, 5)),
        Derivative(RationalFunction.make(Poly([1]), Poly([1, -1, 1])), order=2),
        Sum(RationalFunction.make(Poly([1]), Poly([1, -1])), SqrtRatioSeries()),
        Rescale.make(FreeProduct.make([2, 2, 3]), F(3, 5)),
        Masked(RationalFunction.make(Poly([1]), Poly([1, -2])), RationalSubset.residue_class(0, 2)),
    ],
)
def test_spec_json_round_trip(spec):
    back = spec_from_json(spec.to_json())
    assert back == spec
    n = min(CoefficientStream(spec).known_bound or 8, 8)
    assert coefficients(back, n) == coefficients(spec, n)


def test_spec_from_json_rejects_unknown_kind():
    with pytest.raises(ValueError):
        spec_from_json({"kind": "nonsense"})


# --- exact rational views ---------------------------------------------------


def test_spec_to_rational_on_combinators():
    base = RationalFunction.make(Poly([1]), Poly([1, -1, F(1, 2)]))
    spec = Sum(Derivative(base, order=1), Rescale.make(base, F(2)))
    rep = spec_to_rational(spec)
    assert rep is not None
    assert rep.series(10) == coefficients(spec, 10)


def test_spec_to_rational_masked_by_class():
    base = RationalFunction.make(Poly([1, 3]), Poly([1, 0, -2, F(1, 5)]))
    spec = Masked(base, RationalSubset.residue_class(1, 2))
    rep = spec_to_rational(spec)
    assert rep is not None
    assert rep.series(12) == coefficients(spec, 12)


def test_spec_to_rational_declines_sqrt():
    assert spec_to_rational(SqrtRatioSeries()) is None
    assert spec_to_rational(Sum(SqrtRatioSeries(), geometric())) is None


def test_oscillating_periodic_is_rational():
    spec = OscillatingModel.make(RationalSubset.residue_class(0, 2), F(1, 2), F(1, 3))
    rep = spec_to_rational(spec)
    assert rep is not None
    assert rep.series(9) == coefficients(spec, 9)


def test_oscillating_squares_is_not_rational():
    spec = OscillatingModel.make(NamedIndexSet("squares"), F(1, 2), F(1, 3))
    assert spec_to_rational(spec) is None


# --- CSV io -----------------------------------------------------------------


def test_csv_round_trip(tmp_path):
    path = tmp_path / "coeffs.csv"
    values = [F(1), F(-2, 3), F(5)]
    write_coefficients_csv(str(path), values)
    spec = read_coefficients_csv(str(path))
    assert list(spec.values) == values


@given(st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=12), min_size=1, max_size=20))
def test_csv_round_trip_random(tmp_path_factory, values):
    path = tmp_path_factory.mktemp("csv") / "vals.csv"
    write_coefficients_csv(str(path), [F(v) for v in values])
    spec = read_coefficients_csv(str(path))
    assert list(spec.values) == [F(v) for v in values]
