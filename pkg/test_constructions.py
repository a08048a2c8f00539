from fractions import Fraction

import pytest

from ips.constructions import (
    BlowupPlan,
    apex_height_squared,
    blowup,
    construction1,
    construction_params,
    dilate,
    facher_split,
    prime_set,
    simplex_circumradius_squared,
    trim,
)
from ips.dmatrix import from_points, realizable_dim
from ips.errors import ConstructionError
from ips.geometry import PlanarPoint, dist_squared, verify_integral_set


def test_params_k3():
    params = construction_params(3)
    params.check_invariants()
    assert params.a == 255
    assert params.d_list == (5, 17)
    assert sorted(t.b for t in params.terms) == [-127, -23, 1, 41]
    assert {t.b: t.g // 2 for t in params.terms} == {-127: 64, -23: 14, 1: 8, 41: 22}
    assert params.unit_term().subset == (2,)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_params_invariants(k):
    construction_params(k).check_invariants()


@pytest.mark.parametrize("k,diameter", [(1, 1), (2, 7), (3, 127)])
def test_construction1_is_integral(k, diameter):
    cs = construction1(k)
    assert len(cs.points) == 2 ** k + 1
    report = verify_integral_set(cs.points)
    assert report.ok
    assert report.diameter == diameter
    assert 1 in report.distance_multiset


def test_construction1_k4():
    cs = construction1(4)
    assert cs.points.q == 65535
    report = verify_integral_set(cs.points)
    assert report.ok
    assert report.distance_multiset.count(1) == 1


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6])
def test_construction1_apex_distances(k):
    cs = construction1(k)
    params = construction_params(k)
    g_by_subset = {t.subset: t.g for t in params.terms}
    apex = cs.points[cs.apex_index]
    assert len(cs.points) == 2 ** k + 1
    for idx, (subset, _) in enumerate(cs.labels):
        assert dist_squared(apex, cs.points[idx], cs.points.q) == Fraction(g_by_subset[subset], 2) ** 2
    report = verify_integral_set(cs.points)
    assert report.ok
    assert report.distance_multiset.count(1) == (3 if k == 1 else 1)


def test_construction1_range():
    with pytest.raises(ConstructionError):
        construction1(0)
    with pytest.raises(ConstructionError):
        construction1(3, max_k=2)


def test_provenance():
    prov = construction1(2).provenance()
    assert prov["construction"] == "construction1"
    assert prov["k"] == 2
    assert len(prov["kept"]) == 4
    assert prov["dilation"] == 1


def test_trim_keeps_unit_pair_and_apex():
    cs = trim(construction1(3), 6)
    xs = sorted(p.x for p in cs.points.points if p.y == 0)
    assert xs == [Fraction(-41, 2), Fraction(-23, 2), Fraction(-1, 2), Fraction(1, 2), Fraction(23, 2)]
    assert cs.points[cs.apex_index].y != 0
    assert len(cs.labels) == 5
    assert verify_integral_set(cs.points).ok


def test_trim_to_triangle():
    cs = trim(construction1(3), 3)
    assert from_points(cs.points).distance_multiset() == (1, 8, 8)


def test_trim_range():
    with pytest.raises(ConstructionError):
        trim(construction1(2), 2)
    with pytest.raises(ConstructionError):
        trim(construction1(2), 6)


def test_trim_after_dilation_keeps_unit_pair():
    cs = trim(dilate(construction1(2), 3), 3)
    assert from_points(cs.points).distance_multiset() == (3, 6, 6)


def test_dilate_everything():
    cs = construction1(2)
    m = from_points(dilate(cs, 2).points)
    assert m.distance_multiset() == tuple(2 * d for d in from_points(cs.points).distance_multiset())
    assert dilate(cs, 2).dilation == 2
    assert dilate(from_points(cs.points), 3).gcd() == 3
    with pytest.raises(ConstructionError):
        dilate(cs, 0)


def test_facher_split_and_height():
    s = construction1(2).points
    line, apex = facher_split(s)
    assert apex == 4
    assert line == [0, 1, 2, 3]
    assert apex_height_squared(s) == Fraction(15, 4)


def test_facher_split_rejects_general_sets():
    s = construction1(2).points
    # mirrored apex: no n-1 points are collinear
    twin = s.with_point(PlanarPoint(0, -s[4].y))
    with pytest.raises(ConstructionError):
        facher_split(twin)


def test_circumradius():
    assert simplex_circumradius_squared(2, 3) == 1
    assert simplex_circumradius_squared(2, 4) == Fraction(4, 3)
    assert simplex_circumradius_squared(3, 3) == Fraction(9, 4)


def test_blowup_to_three_dimensions():
    base = trim(construction1(2), 3).points
    dm = blowup(BlowupPlan(base, 3, 2))
    assert dm.n == 4
    assert realizable_dim(dm).dimension == 3


def test_blowup_to_four_dimensions():
    dm = blowup(BlowupPlan(construction1(2).points, 4, 2))
    assert dm.n == 7
    assert realizable_dim(dm).dimension == 4


def test_blowup_needs_room_under_apex():
    with pytest.raises(ConstructionError):
        blowup(BlowupPlan(construction1(1).points, 3, 2))


def test_prime_set_smallest():
    ps = prime_set(3, 4, 1)
    assert ps.k == 2
    assert ps.matrix.distance_multiset() == (1, 2, 2, 2, 2, 2)
    assert ps.matrix.gcd() == 1
    assert realizable_dim(ps.matrix).dimension == 3
    assert ps.min_unique


def test_prime_set_unique_minimum():
    ps = prime_set(3, 5, 2, unique_min=True)
    assert ps.matrix.n == 5
    assert ps.matrix.distance_multiset() == (2, 3, 4, 4, 4, 4, 6, 8, 8, 8)
    assert ps.min_unique
    assert ps.provenance["simplex_side"] == 3
    assert ps.provenance["m"] == 3


@pytest.mark.parametrize("m,n,d", [(3, 4, 1), (3, 6, 5), (4, 6, 2), (5, 9, 7), (3, 10, 3)])
def test_prime_set_grid(m, n, d):
    ps = prime_set(m, n, d)
    assert ps.matrix.n == n
    assert ps.matrix.gcd() == 1
    assert d in ps.matrix.distance_multiset()
    assert realizable_dim(ps.matrix).dimension == m


@pytest.mark.parametrize("m,n,d", [(2, 4, 1), (3, 3, 1), (3, 5, 0)])
def test_prime_set_arguments(m, n, d):
    with pytest.raises(ConstructionError):
        prime_set(m, n, d)
