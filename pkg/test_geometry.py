import itertools
from fractions import Fraction

import pytest

from ips.constructions import construction1, trim
from ips.errors import GeometryError
from ips.geometry import (
    PlanarPoint,
    PlanarPointSet,
    Segment,
    characteristic,
    collinear_indices,
    convex_quad_diag_exceeds_side,
    count_equal_segments_on_line,
    cross_intersection,
    dist_squared,
    distinct_lines,
    orientation,
    rho_collisions,
    rho_interval,
    rho_value,
    segment_length_counts,
    square_container,
    verify_integral_set,
)

H = Fraction(1, 2)


def pt(x, y=0):
    return PlanarPoint(Fraction(x), Fraction(y))


@pytest.fixture
def k2():
    return construction1(2).points


def test_dist_squared_values():
    assert dist_squared(pt(H), pt(-H), 15) == 1
    assert dist_squared(pt(H), pt(0, H), 15) == 4
    assert dist_squared(pt(Fraction(7, 2)), pt(Fraction(-7, 2)), 15) == 49


def test_verify_equilateral():
    s = construction1(1).points
    report = verify_integral_set(s)
    assert report.ok
    assert report.diameter == 1 and report.min_distance == 1
    assert characteristic(s) == 3


def test_verify_construction_k2(k2):
    report = verify_integral_set(k2)
    assert report.ok
    assert report.distance_multiset == (1, 2, 2, 3, 3, 4, 4, 4, 4, 7)
    assert report.diameter == 7
    assert characteristic(k2) == 15


def test_verify_collinear():
    s = PlanarPointSet(1, (pt(0), pt(1), pt(3)))
    report = verify_integral_set(s)
    assert report.is_integral
    assert not report.full_dimensional
    with pytest.raises(GeometryError):
        characteristic(s)


def test_verify_reports_failures():
    s = PlanarPointSet(1, (pt(0), pt(1), pt(0, 1)))
    report = verify_integral_set(s)
    assert not report.is_integral
    assert report.failures == ((1, 2),)


def test_verify_needs_three_points():
    with pytest.raises(GeometryError):
        verify_integral_set(PlanarPointSet(1, (pt(0), pt(1))))


def test_point_set_rejects_duplicates_and_bad_radicand():
    with pytest.raises(GeometryError):
        PlanarPointSet(1, (pt(0), pt(0)))
    with pytest.raises(GeometryError):
        PlanarPointSet(12, (pt(0), pt(1)))


def test_characteristic_k3():
    assert characteristic(construction1(3).points) == 255


def test_orientation():
    assert orientation(pt(0), pt(1), pt(0, 1), 3) == 1
    assert orientation(pt(0), pt(1), pt(0, -1), 3) == -1
    assert orientation(pt(0), pt(1), pt(5), 3) == 0


def test_cross_collinear_segments_share_a_line():
    r = cross_intersection(Segment(pt(0), pt(1)), Segment(pt(2), pt(3)))
    assert r.whole_line
    assert r.kind == "WholeLine"


def test_cross_two_points():
    r = cross_intersection(Segment(pt(0, 0), pt(1, 0)), Segment(pt(0, 1), pt(0, 2)))
    assert not r.whole_line
    assert r.count == 2
    assert set(r.points) == {pt(0, 0), pt(H, Fraction(3, 2))}


def test_cross_four_points():
    r = cross_intersection(Segment(pt(0, 0), pt(2, 0)), Segment(pt(3, 1), pt(4, 3)))
    assert r.count == 4


def test_cross_rejects_crossing_segments():
    with pytest.raises(GeometryError):
        cross_intersection(Segment(pt(-1, 0), pt(1, 0)), Segment(pt(0, -1), pt(0, 1)))


def test_rho_values(k2):
    n_pt = k2[-1]
    # k2 points: -7/2, 7/2, 1/2, -1/2, apex
    assert rho_value(n_pt, Segment(pt(Fraction(7, 2)), pt(H)), 15) == 2
    assert rho_value(n_pt, Segment(pt(H), pt(-H)), 15) == 0
    eq = construction1(1).points
    assert rho_value(eq[2], Segment(eq[0], eq[1]), 3) == 0


def test_rho_interval_irrational():
    iv = rho_interval(pt(0, 1), Segment(pt(0), pt(1)), 1, Fraction(1, 2 ** 30))
    # 1 - sqrt(2)
    assert iv.contains(iv.midpoint)
    assert abs(float(iv.midpoint) - (1 - 2 ** 0.5)) < 1e-8
    with pytest.raises(GeometryError):
        rho_value(pt(0, 1), Segment(pt(0), pt(1)), 1)


@pytest.mark.parametrize("k,count", [(1, 1), (3, 2), (2, 0)])
def test_count_equal_segments_on_axis(k2, k, count):
    assert count_equal_segments_on_line(k2, 0, 1, k) == count


def test_collinear_indices_sorted_along_line(k2):
    line = collinear_indices(k2, 2, 3)
    assert len(line) == 4
    xs = [k2[i].x for i in line]
    assert xs == sorted(xs) or xs == sorted(xs, reverse=True)


def _generated_sets():
    sets = [construction1(k).points for k in (1, 2, 3)]
    sets.append(trim(construction1(3), 6).points)
    return sets


def test_equal_segment_counts_on_generated_sets():
    for s in _generated_sets():
        diameter = verify_integral_set(s).diameter
        for i, j in itertools.combinations(range(len(s)), 2):
            counts = segment_length_counts(s, i, j)
            assert counts[Fraction(1)] <= 1
            for k in range(1, diameter + 1):
                assert counts[Fraction(k)] <= 2 * k - 1


def test_rho_curves_do_not_collide():
    for s in _generated_sets():
        assert rho_collisions(s) == []


def test_distinct_lines_k2(k2):
    lines = distinct_lines(k2)
    # the axis plus one line from the apex to each axis point
    assert len(lines) == 5
    assert max(len(line) for line in lines) == 4


def test_convex_quadrilaterals():
    assert convex_quad_diag_exceeds_side(pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1))
    assert convex_quad_diag_exceeds_side(pt(0, 0), pt(3, 0), pt(3, 1), pt(0, 1))
    with pytest.raises(GeometryError):
        convex_quad_diag_exceeds_side(pt(0, 0), pt(1, 1), pt(1, 0), pt(0, 1))


def test_convex_quadrilaterals_sampled():
    # points on a parabola in cyclic order form convex quadrilaterals
    xs = [Fraction(v, 3) for v in range(-6, 7)]
    for a, b, c, d in itertools.combinations(xs, 4):
        quad = [pt(a, a * a), pt(b, b * b), pt(c, c * c), pt(d, d * d)]
        assert convex_quad_diag_exceeds_side(*quad)


def test_square_container_on_generated_sets():
    for s in _generated_sets():
        report = square_container(s)
        assert report.fits
        assert report.along <= report.diameter
        assert report.across.low <= report.diameter
        assert report.across.width <= report.tolerance * 2 * report.diameter
