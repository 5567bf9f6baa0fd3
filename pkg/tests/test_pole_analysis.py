from fractions import Fraction

import pytest

from tameseries.groups_growth import FreeProductSpec, growth_series
from tameseries.numerics import mp, to_mpf, workprec
from tameseries.pole_analysis import (
    PoleSet,
    UndecidableBoundary,
    boundary_poles,
    polar_polynomials,
)
from tameseries.polynomials import Poly
from tameseries.rational_functions import RationalFunctionRep

F = Fraction


def make(num, den):
    return RationalFunctionRep.make(Poly(num), Poly(den))


def test_single_pole():
    ps = boundary_poles(make([1], [1, -2]))
    assert len(ps.poles) == 1
    rec = ps.poles[0]
    assert rec.boundary
    assert rec.multiplicity == 1
    assert rec.exact_value == F(1, 2)
    assert ps.top_order == 1
    assert ps.radius_exact is not None
    assert float(ps.radius_enclosure.value) == pytest.approx(0.5, abs=1e-12)


def test_constant_denominator_rejected():
    with pytest.raises(ValueError):
        boundary_poles(make([1], [2]))


def test_interior_vs_boundary_split():
    # poles at 1/2 (boundary) and 1 (interior of the complement)
    rep = make([1], [1, -3, 2])
    ps = boundary_poles(rep)
    assert len(ps.poles) == 2
    flags = {str(r.exact_value): r.boundary for r in ps.poles}
    assert flags == {"1/2": True, "1": False}


def test_conjugate_pair_boundary():
    # 1/(1+t^2): poles at +-i, both on the boundary circle
    ps = boundary_poles(make([1], [1, 0, 1]))
    assert len(ps.boundary()) == 2
    assert ps.top_order == 1
    assert float(ps.radius_enclosure.value) == pytest.approx(1.0, abs=1e-12)


def test_double_pole_top_order():
    rep = make([1], [1, -2, 1])  # 1/(1-t)^2
    ps = boundary_poles(rep)
    assert ps.top_order == 2
    assert ps.poles[0].multiplicity == 2


def test_mixed_multiplicity_on_circle():
    # (1-t)^2 (1+t): the top order on the unit circle is 2
    den = Poly([1, -1]) * Poly([1, -1]) * Poly([1, 1])
    ps = boundary_poles(RationalFunctionRep.make(Poly([1]), den))
    assert ps.top_order == 2
    assert len(ps.boundary()) == 2
    mults = sorted(r.multiplicity for r in ps.boundary())
    assert mults == [1, 2]


def test_machi_boundary():
    rep = growth_series(FreeProductSpec.make([2, 3]))
    with workprec(256):
        ps = boundary_poles(rep)
    boundary = ps.boundary()
    assert len(boundary) == 2
    assert ps.top_order == 1
    # radius 1/sqrt(2), recognized as an exact radical
    assert ps.radius_exact is not None
    with workprec(256):
        assert abs(ps.radius_enclosure.value - 1 / mp.sqrt(2)) < mp.mpf(2) ** -180
        for rec in boundary:
            assert abs(abs(rec.value) - 1 / mp.sqrt(2)) < mp.mpf(2) ** -180
    # the off-circle pole at t = 1 is recorded but not boundary
    interior = [r for r in ps.poles if not r.boundary]
    assert any(r.exact_value == F(1) for r in interior)


def test_reduction_happens_before_root_finding():
    shared = Poly([1, -3])
    rep = RationalFunctionRep.make(shared * Poly([1]), shared * Poly([1, -2]))
    ps = boundary_poles(rep)
    assert len(ps.poles) == 1
    assert ps.poles[0].exact_value == F(1, 2)


def test_pole_set_json():
    import json

    ps = boundary_poles(make([1], [1, -3, 2]))
    data = ps.to_json()
    assert data["top_order"] == 1
    assert len(data["poles"]) == 2
    json.dumps(data)


# --- principal parts ---------------------------------------------------------


def test_polar_data_simple_pole():
    rep = make([1], [1, -2])
    ps = boundary_poles(rep)
    pd = polar_polynomials(rep, ps)
    assert pd.exact
    assert pd.top_denominator is not None
    assert pd.top_order == 1
    assert len(pd.principal_parts) == 1
    part = pd.principal_parts[0]
    # 1/(1-2t) = (-1/2)/(t - 1/2): residue -1/2
    assert abs(part.coefficients[0] - mp.mpf(-0.5)) < mp.mpf(2) ** -40


def test_polar_data_double_pole():
    rep = make([1], [1, -2, 1])
    ps = boundary_poles(rep)
    pd = polar_polynomials(rep, ps)
    part = pd.principal_parts[0]
    assert len(part.coefficients) == 2
    # 1/(1-t)^2 = 1/(t-1)^2: leading coefficient 1, no simple term
    assert abs(part.coefficients[1] - 1) < mp.mpf(2) ** -40
    assert abs(part.coefficients[0]) < mp.mpf(2) ** -40


def test_polar_reconstruction_leaves_holomorphic_rest():
    # subtracting the principal parts must push the radius of the rest
    # out to the next pole layer
    rep = make([2, 1], [1, -3, 2])  # poles at 1/2 and 1
    ps = boundary_poles(rep)
    pd = polar_polynomials(rep, ps)
    part = pd.principal_parts[0]
    x = part.pole.value
    n = 48
    with workprec(ps.precision_bits + 64):
        series = rep.series(n)
        rest = []
        for k in range(n + 1):
            # principal part (c / (t - x)) expands to -c/x * (t/x)^k
            val = to_mpf(series[k]) + part.coefficients[0] / x * (1 / x) ** k
            rest.append(val)
        # remaining singularity sits at t = 1, so |rest_k| stays bounded
        assert abs(rest[-1]) < 4
        assert abs(to_mpf(series[-1])) > mp.mpf(2) ** (n - 4)


def test_machi_polar_top_denominator():
    rep = growth_series(FreeProductSpec.make([2, 3]))
    with workprec(256):
        ps = boundary_poles(rep)
        pd = polar_polynomials(rep, ps)
    assert pd.exact
    # the boundary factor of the reduced denominator is 1 - 2t^2
    assert pd.top_denominator is not None
    assert pd.top_denominator.monic() == Poly([F(-1, 2), 0, 1])


def test_undecidable_boundary_surfaces_as_error():
    # two squarefree layers whose minimal root moduli are irrational and
    # differ by ~2^-1500: no precision below the cap can separate them
    base = Poly([1, 1, 0, 1])
    shifted = base.scale_arg(1 + F(1, 2**1500))
    rep = RationalFunctionRep.make(Poly([1]), shifted * base * base)
    with pytest.raises(UndecidableBoundary):
        boundary_poles(rep, precision_bits=64)
