from fractions import Fraction

import pytest

from ips.bounds import (
    CUTOFF_N,
    REFERENCE_BETA,
    bounds_report,
    check_known_values,
    constants,
    constants_for_cutoffs,
    corollary_holds,
    diameter_lower,
    gamma2_for_threshold,
    gamma_for_cutoffs,
    limit_constant,
    load_known_values,
    max_collinear,
    min_segment_length,
    min_segment_length_exact,
    point_count_bound,
    pps_bounds,
    quadratic_residual,
    threshold_for_diameter,
)
from ips.errors import BoundsError
from ips.exactnum import interval_sqrt


@pytest.fixture(scope="module")
def consts():
    return constants()


def between(iv, lo, hi):
    return Fraction(lo) < iv.low and iv.high < Fraction(hi)


def test_default_constants(consts):
    assert between(consts.beta, "1.0814", "1.0815")
    assert between(consts.gamma2, "0.06395", "0.06397")
    assert consts.gamma.low > Fraction(5, 11)
    assert consts.gamma.certainly_lt(limit_constant())
    assert between(consts.gamma, "0.45557", "0.46531")
    assert consts.gamma.high < Fraction("0.4556")
    assert consts.widest() <= Fraction(1, 10 ** 12)


def test_beta_exceeds_reference(consts):
    assert consts.beta.low > REFERENCE_BETA


def test_limit_constant():
    assert between(limit_constant(), "0.46530", "0.46531")


def test_quadratic_root_is_certified(consts):
    assert quadratic_residual(consts).contains(0)


@pytest.mark.parametrize(
    "k,lower,upper",
    [(2, "0.759836", "2.467890"), (4, "0.537285", "1.037614")],
)
def test_pps_bounds(k, lower, upper):
    lo, up = pps_bounds(k)
    assert abs(lo.midpoint - Fraction(lower)) < Fraction(1, 10 ** 5)
    assert abs(up.midpoint - Fraction(upper)) < Fraction(1, 10 ** 5)


def test_pps_bounds_order():
    for k in range(2, 30):
        lo, up = pps_bounds(k)
        assert lo.certainly_lt(up)
    with pytest.raises(BoundsError):
        pps_bounds(1)


def test_beta_matches_pps_upper_at_cutoff(consts):
    # beta is the pps upper bound at the cutoff scaled by sqrt(N-1)
    _, up = pps_bounds(consts.cutoff_n)
    approx = float(up.midpoint) * (consts.cutoff_n - 1) ** 0.5
    assert abs(approx - float(consts.beta.midpoint)) < 1e-9


@pytest.mark.parametrize("k", [CUTOFF_N + 1, 30000, 10 ** 6])
def test_pps_upper_within_scaled_beta(consts, k):
    _, up = pps_bounds(k)
    scaled = up * interval_sqrt(k - 1, Fraction(1, 2 ** 100))
    assert scaled.certainly_le(consts.beta)


@pytest.mark.parametrize("n,expected", [(1, 1), (2, 7), (3, 22)])
def test_min_segment_length_exact(n, expected):
    assert min_segment_length_exact(n) == expected


def test_min_segment_length_exact_matches_sum():
    total = 0
    for n in range(1, 1001):
        total += n * (2 * n - 1)
        assert min_segment_length_exact(n) == total


def test_min_segment_length():
    assert abs(min_segment_length(5).midpoint - Fraction("1.81695")) < Fraction(1, 10 ** 5)
    assert min_segment_length(647).low > 10000
    assert min_segment_length(646).high < 10000
    assert threshold_for_diameter(10000) == 647


def test_min_segment_length_increasing():
    values = [min_segment_length(t) for t in range(2, 60)]
    for a, b in zip(values, values[1:]):
        assert a.certainly_lt(b)


def test_gamma2_needs_threshold_above_six():
    with pytest.raises(BoundsError):
        gamma2_for_threshold(6)
    assert gamma2_for_threshold(7).low > 0


def test_max_collinear(consts):
    assert max_collinear(10001, consts) == 645
    assert max_collinear(20000, consts) == 1285
    with pytest.raises(BoundsError):
        max_collinear(10000, consts)


def test_point_count_bound_grows(consts):
    phi = pps_bounds(100)[1]
    small = point_count_bound(10001, phi, consts)
    large = point_count_bound(20000, phi, consts)
    assert small.certainly_lt(large)


def test_diameter_lower(consts):
    assert abs(diameter_lower(5, consts).midpoint - Fraction("2.32651")) < Fraction(1, 10 ** 5)
    big = diameter_lower(30000, consts)
    assert 13665 < big.low < 13667
    assert corollary_holds(4, consts)
    assert corollary_holds(10 ** 6, consts)
    with pytest.raises(BoundsError):
        diameter_lower(3, consts)


def test_other_cutoffs():
    default = gamma_for_cutoffs()
    wider = gamma_for_cutoffs(10 ** 6, 465000)
    assert between(wider, "0.4629", "0.4632")
    assert default.certainly_lt(wider)
    assert wider.certainly_lt(limit_constant())
    assert default.certainly_lt(gamma_for_cutoffs(10 ** 8))


def test_gamma_nondecreasing_in_cutoff_diam():
    values = [gamma_for_cutoffs(cutoff_diam=d) for d in (1000, 2000, 5000, 10000, 20000, 50000, 100000)]
    for a, b in zip(values, values[1:]):
        assert not b.certainly_lt(a)


def test_explicit_cutoff_t_must_certify():
    with pytest.raises(BoundsError):
        constants_for_cutoffs(cutoff_t=646)
    assert constants_for_cutoffs(cutoff_t=700).cutoff_t == 700


def test_known_values(tmp_path, consts):
    path = tmp_path / "known.csv"
    path.write_text("n,diameter\n4,4\n5,7\n6,8\n10,3\n", encoding="utf-8")
    values = load_known_values(path)
    assert values == {4: 4, 5: 7, 6: 8, 10: 3}
    violations = check_known_values(values, consts)
    assert [v["n"] for v in violations] == [10]


def test_known_values_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("points,diam\n4,4\n", encoding="utf-8")
    with pytest.raises(BoundsError):
        load_known_values(path)
    with pytest.raises(BoundsError):
        load_known_values(tmp_path / "missing.csv")


def test_bounds_report(consts):
    report = bounds_report([2, 3], {4: 4}, consts)
    assert report["format"] == "ips-bounds/1"
    assert report["checks"]["pps_upper_within_beta"] is True
    assert all(report["checks"].values())
    assert report["flags"]["beta_above_reference"]["value"] is True
    assert [row["k"] for row in report["pps"]] == [2, 3]
    assert report["known_values"] == {"count": 1, "violations": []}
    assert report["cutoffs"] == {"n": 21491, "diameter": 10000, "t": 647}
