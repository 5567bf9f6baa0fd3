from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tameseries.rational_subsets import (
    RationalPartition,
    RationalSubset,
    generating_function,
    membership,
    partition_period,
    standard_partition,
)

F = Fraction


@st.composite
def subsets(draw):
    period = draw(st.integers(min_value=1, max_value=6))
    residues = draw(st.sets(st.integers(min_value=0, max_value=period - 1), max_size=period))
    added = draw(st.sets(st.integers(min_value=0, max_value=20), max_size=3))
    removed = draw(st.sets(st.integers(min_value=0, max_value=20), max_size=3)) - added
    return RationalSubset.make(period, residues, added=added, removed=removed)


def brute_membership(subset: RationalSubset, n: int) -> bool:
    base = n % subset.period in subset.residues
    if n in subset.removed:
        return False
    if n in subset.added:
        return True
    return base


def test_residue_class():
    s = RationalSubset.residue_class(2, 3)
    hits = [n for n in range(12) if s.membership(n)]
    assert hits == [2, 5, 8, 11]


def test_everything_and_complement():
    e = RationalSubset.everything()
    assert all(e.membership(n) for n in range(20))
    c = e.complement()
    assert not any(c.membership(n) for n in range(20))


def test_finite_tweaks():
    s = RationalSubset.make(2, {0}, added=(3,), removed=(0,))
    hits = [n for n in range(10) if s.membership(n)]
    assert hits == [2, 3, 4, 6, 8]


def test_normalization_removes_redundant_tweaks():
    # adding an element already in the class, removing one already out
    s = RationalSubset.make(2, {0}, added=(4,), removed=(5,))
    t = RationalSubset.make(2, {0})
    assert s == t


def test_generating_function_of_class():
    s = RationalSubset.residue_class(1, 2)
    gf = generating_function(s)
    # t + t^3 + t^5 + ... = t/(1-t^2)
    assert gf.series(9) == [F(n % 2) for n in range(10)]


def test_generating_function_with_tweaks():
    s = RationalSubset.make(3, {0}, added=(2,), removed=(3,))
    gf = generating_function(s)
    want = [F(1 if brute_membership(s, n) else 0) for n in range(16)]
    assert gf.series(15) == want


def test_intersect_class():
    s = RationalSubset.make(2, {0})
    t = s.intersect_class(0, 3)
    hits = [n for n in range(25) if t.membership(n)]
    assert hits == [n for n in range(25) if n % 2 == 0 and n % 3 == 0]


def test_json_round_trip():
    s = RationalSubset.make(4, {1, 3}, added=(0,), removed=(5,))
    back = RationalSubset.from_json(s.to_json())
    assert back == s
    assert all(back.membership(n) == s.membership(n) for n in range(30))


def test_partition_validate_and_period():
    p = standard_partition(3)
    p.validate()
    assert partition_period(p) == 3
    with pytest.raises(ValueError):
        RationalPartition((RationalSubset.residue_class(0, 2),), frozenset()).validate()


def test_standard_partition_covers_disjointly():
    p = standard_partition(4)
    for n in range(40):
        hits = [s for s in p.parts if s.membership(n)]
        assert len(hits) == 1


@given(subsets(), st.integers(min_value=0, max_value=60))
def test_membership_function_matches_method(s, n):
    assert membership(s, n) == s.membership(n) == brute_membership(s, n)


@given(subsets())
def test_generating_function_matches_membership(s):
    gf = s.generating_function()
    want = [F(1 if s.membership(n) else 0) for n in range(25)]
    assert gf.series(24) == want


@given(subsets())
def test_complement_involution(s):
    c = s.complement()
    assert all(c.membership(n) != s.membership(n) for n in range(30))
    assert s.complement().complement() == s
