from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bilinear_blowup.exponents import (
    ExponentDomainError,
    ExponentTriple,
    base_order,
    classify_region,
    critical_order,
    grid_points,
    inv_exponent,
    order_terms,
    region_order,
)

rationals = st.fractions(min_value=0, max_value=F(3, 2), max_denominator=64)
points = st.tuples(rationals, rationals)
unit_rationals = st.fractions(min_value=0, max_value=1, max_denominator=64)


def test_base_order_examples():
    assert base_order((F(1, 2), F(1, 2)), 1) == F(-1, 2)
    assert base_order((0, 0), 1) == -1
    assert base_order((1, 1), 1) == F(-3, 2)


def test_restricted_order_examples():
    assert base_order((F(1, 2), F(1, 2)), 1, "I") == F(-1, 2)
    assert base_order((F(1, 8), F(1, 8)), 1, "I") == F(-1, 2)
    assert base_order((F(3, 4), F(3, 4)), 1, "I") == -1


def test_critical_order_examples():
    assert critical_order((F(1, 2), F(1, 2)), 1, F(1, 2)) == F(-1, 4)
    assert critical_order((F(1, 3), F(2, 3)), 1, 0) == base_order((F(1, 3), F(2, 3)), 1)
    assert critical_order((0, 0), 2, F(1, 3)) == F(-4, 3)


def test_critical_order_rejects_bad_rho():
    with pytest.raises(ExponentDomainError):
        critical_order((0, 0), 1, 1)
    with pytest.raises(ExponentDomainError):
        critical_order((0, 0), 1, F(-1, 10))


def test_classify_region_examples():
    r = classify_region((F(1, 8), F(1, 8)))
    assert (r.family, r.index, r.on_boundary) == ("J", 0, False)
    r = classify_region((F(1, 4), F(1, 4)))
    assert (r.index, r.on_boundary) == (0, True)
    assert classify_region((F(1, 4), F(3, 4))).index == 2


def test_region_domain_checks():
    with pytest.raises(ExponentDomainError):
        classify_region((F(9, 8), F(1, 2)), "I")
    with pytest.raises(ExponentDomainError):
        classify_region((F(-1, 2), F(1, 2)))
    # family J is fine beyond the unit square
    assert classify_region((F(9, 8), F(1, 2))).index == 3


def test_inv_exponent_parsing():
    assert inv_exponent("inf") == 0
    assert inv_exponent("4/3") == F(3, 4)
    assert inv_exponent(2) == F(1, 2)
    with pytest.raises(ExponentDomainError):
        inv_exponent("0")


def test_triple_helpers():
    t = ExponentTriple.from_exponents(2, 2, 1)
    assert t.holder_gap == 0
    assert ExponentTriple.from_exponents(2, 2, 2).holder_gap == F(-1, 2)
    with pytest.raises(ExponentDomainError):
        ExponentTriple(F(-1, 2), 0, 0)


@given(points)
def test_piecewise_formula_matches_max(point):
    region = classify_region(point, "J")
    assert region_order(region, point, 1) == base_order(point, 1, "J")


@given(st.tuples(unit_rationals, unit_rationals))
def test_piecewise_formula_matches_max_restricted(point):
    region = classify_region(point, "I")
    assert region_order(region, point, 1) == base_order(point, 1, "I")


@given(points)
def test_tied_regions_agree_on_boundary(point):
    terms = order_terms(point, "J")
    top = max(v for _, v in terms)
    for idx, v in terms:
        if v == top:
            region = classify_region(point, "J")
            assert region_order(
                type(region)("J", idx, region.on_boundary), point, 1
            ) == base_order(point, 1, "J")


@given(points)
def test_restricted_dominates_full(point):
    full = base_order(point, 1, "J")
    restricted = base_order(point, 1, "I")
    assert restricted >= full
    # strict exactly when the duality term is the unique max
    terms = dict((i, v) for i, v in order_terms(point, "J"))
    strict = all(terms[0] > v for i, v in terms.items() if i != 0)
    assert (restricted > full) == strict


@given(points)
def test_symmetry(point):
    x, y = point
    for family in ("J", "I"):
        assert base_order((x, y), 1, family) == base_order((y, x), 1, family)


@given(points, points)
@settings(max_examples=200)
def test_concavity_midpoint(p, q):
    mid = ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)
    for family in ("J", "I"):
        lhs = base_order(mid, 1, family)
        rhs = (base_order(p, 1, family) + base_order(q, 1, family)) / 2
        assert lhs >= rhs


def test_dense_grid_exactness_both_families():
    for family, limit in (("J", F(3, 2)), ("I", F(1))):
        for point in grid_points(limit, 41):
            region = classify_region(point, family)
            assert region_order(region, point, 2) == base_order(point, 2, family)
