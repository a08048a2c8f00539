"""Certified evaluation of the diameter lower-bound constants.

Every irrational quantity is a RationalInterval; sqrt goes through
interval_sqrt and results are widened outward onto a dyadic grid so the
fractions stay small.
"""
import csv
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple, Union

from ips import config
from ips.errors import BoundsError
from ips.exactnum import RationalInterval, RationalLike, decimal_string

log = logging.getLogger(__name__)

CUTOFF_N = 21491
CUTOFF_DIAM = 10000
CUTOFF_T = 647

# Commonly quoted upper bound for beta; the certified value lies above it.
REFERENCE_BETA = Fraction(107464, 100000)

_GRID_BITS = 128
_PRECISION = Fraction(1, 2 ** 100)

IntervalLike = Union[RationalInterval, RationalLike]


@dataclass(frozen=True)
class BoundsConstants:
    beta: RationalInterval
    gamma2: RationalInterval
    gamma: RationalInterval
    lambda_min: RationalInterval
    cutoff_n: int = CUTOFF_N
    cutoff_diam: int = CUTOFF_DIAM
    cutoff_t: int = CUTOFF_T

    def widest(self) -> Fraction:
        return max(iv.width for iv in (self.beta, self.gamma2, self.gamma, self.lambda_min))


def _tidy(iv: RationalInterval) -> RationalInterval:
    scale = 1 << _GRID_BITS
    return RationalInterval(
        Fraction(math.floor(iv.low * scale), scale),
        Fraction(math.ceil(iv.high * scale), scale),
    )


def _iv(value: IntervalLike) -> RationalInterval:
    if isinstance(value, RationalInterval):
        return value
    return RationalInterval.point(Fraction(value))


def _sqrt(value: IntervalLike) -> RationalInterval:
    return _tidy(_iv(value).sqrt(_PRECISION))


def sqrt3() -> RationalInterval:
    return _sqrt(3)


def limit_constant() -> RationalInterval:
    """3**(1/4) * 2**(-3/2), the limit of the diameter constant."""
    return _tidy(_sqrt(sqrt3()) / (2 * _sqrt(2)))


def pps_bounds(k: int) -> Tuple[RationalInterval, RationalInterval]:
    """Lower and upper bounds for the max-min distance of k points in the unit square."""
    if k < 2:
        raise BoundsError(f"pps_bounds needs k >= 2, got {k}")
    s3 = sqrt3()
    lower = _sqrt(Fraction(2, k) / s3)
    inv = Fraction(1, k - 1)
    upper = _tidy(inv + _sqrt(inv * inv + 2 * inv / s3))
    return lower, upper


def beta_for_cutoff(cutoff_n: int = CUTOFF_N) -> RationalInterval:
    """1/sqrt(N-1) + sqrt(2/sqrt(3) + 1/(N-1)); equals pps upper(N) * sqrt(N-1)."""
    if cutoff_n < 3:
        raise BoundsError(f"cutoff_n must be >= 3, got {cutoff_n}")
    inv = Fraction(1, cutoff_n - 1)
    return _tidy(1 / _sqrt(cutoff_n - 1) + _sqrt(2 / sqrt3() + inv))


def min_segment_length_exact(n: int) -> Fraction:
    """Least total length of a segment carrying n**2 + 1 points of an integral set."""
    if n < 1:
        raise BoundsError(f"n must be >= 1, got {n}")
    return Fraction(2, 3) * n ** 3 + Fraction(1, 2) * n ** 2 - Fraction(1, 6) * n


def min_segment_length(t: int) -> RationalInterval:
    """(2/3)t^(3/2) - (3/2)t + (5/6)sqrt(t), evaluated as ((4t+5)sqrt(t) - 9t)/6."""
    if t < 2:
        raise BoundsError(f"t must be >= 2, got {t}")
    return _tidy(((4 * t + 5) * _sqrt(t) - 9 * t) / 6)


def threshold_for_diameter(cutoff_diam: int) -> int:
    """Least t >= 2 with min_segment_length(t) certainly above cutoff_diam."""
    if cutoff_diam < 1:
        raise BoundsError(f"cutoff_diam must be >= 1, got {cutoff_diam}")

    def above(t: int) -> bool:
        return min_segment_length(t).low > cutoff_diam

    # min_segment_length is increasing for t >= 2
    hi = 2
    while not above(hi):
        hi *= 2
    lo = hi // 2
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if above(mid):
            hi = mid
        else:
            lo = mid
    return hi


def gamma2_for_threshold(t: int) -> RationalInterval:
    """6(t-6) / ((4t+5)sqrt(t) - 9t): the slope with k <= gamma2*b + 6 collinear points."""
    if t <= 6:
        raise BoundsError(f"threshold t must exceed 6, got {t}")
    return _tidy(6 * (t - 6) / ((4 * t + 5) * _sqrt(t) - 9 * t))


def _lambda_min(beta: RationalInterval, gamma2: RationalInterval) -> RationalInterval:
    b2 = beta.square()
    return _tidy((-gamma2 + _sqrt(gamma2.square() + 16 * b2)) / (8 * b2))


def quadratic_residual(consts: "BoundsConstants", lam: Optional[RationalInterval] = None) -> RationalInterval:
    """4*beta^2*lam^2 + gamma2*lam - 1; contains 0 when lam encloses the root."""
    lam = consts.lambda_min if lam is None else lam
    return 4 * consts.beta.square() * lam.square() + consts.gamma2 * lam - 1


def constants_for_cutoffs(
    cutoff_n: int = CUTOFF_N,
    cutoff_diam: int = CUTOFF_DIAM,
    cutoff_t: Optional[int] = None,
) -> BoundsConstants:
    """All constants for the given cutoffs.

    cutoff_n must be a point count below which the diameter bound is
    established separately (for the defaults, every n <= 21491); keeping it
    consistent with cutoff_diam is the caller's job. cutoff_t defaults to
    the least threshold whose segment length exceeds cutoff_diam.
    """
    if cutoff_diam < 1:
        raise BoundsError(f"cutoff_diam must be >= 1, got {cutoff_diam}")
    if cutoff_n < 4:
        raise BoundsError(f"cutoff_n must be >= 4, got {cutoff_n}")
    if cutoff_t is None:
        cutoff_t = max(threshold_for_diameter(cutoff_diam), 7)
    elif not min_segment_length(cutoff_t).low > cutoff_diam:
        raise BoundsError(
            f"cutoff_t={cutoff_t} does not certify segment length above {cutoff_diam}"
        )
    beta = beta_for_cutoff(cutoff_n)
    gamma2 = gamma2_for_threshold(cutoff_t)
    lam = _lambda_min(beta, gamma2)
    return BoundsConstants(beta, gamma2, lam, lam, cutoff_n, cutoff_diam, cutoff_t)


def constants() -> BoundsConstants:
    consts = constants_for_cutoffs(CUTOFF_N, CUTOFF_DIAM, CUTOFF_T)
    if consts.widest() > config.CONSTANT_WIDTH:
        raise BoundsError(f"constant interval wider than {config.CONSTANT_WIDTH}")
    return consts


def gamma_for_cutoffs(
    cutoff_n: int = CUTOFF_N,
    cutoff_diam: int = CUTOFF_DIAM,
    cutoff_t: Optional[int] = None,
) -> RationalInterval:
    return constants_for_cutoffs(cutoff_n, cutoff_diam, cutoff_t).gamma


def max_collinear(b: int, consts: Optional[BoundsConstants] = None) -> int:
    """Upper bound on collinear points of an integral set with diameter b > cutoff_diam."""
    consts = consts or constants()
    if b <= consts.cutoff_diam:
        raise BoundsError(f"b must exceed {consts.cutoff_diam}, got {b}")
    return math.floor(consts.gamma2.high * b + 6)


def point_count_bound(b: int, phi_upper: RationalInterval, consts: Optional[BoundsConstants] = None) -> RationalInterval:
    """4*b^2*phi^2 + gamma2*b + 2 for a set of diameter b."""
    consts = consts or constants()
    if b <= consts.cutoff_diam:
        raise BoundsError(f"b must exceed {consts.cutoff_diam}, got {b}")
    return 4 * b * b * phi_upper.square() + consts.gamma2 * b + 2


def diameter_lower(n: int, consts: Optional[BoundsConstants] = None) -> RationalInterval:
    """Certified lower bound for the least diameter of n points in the plane."""
    consts = consts or constants()
    if n < 4:
        raise BoundsError(f"n must be >= 4, got {n}")
    if n <= consts.cutoff_n:
        value = limit_constant() * n
    else:
        value = consts.gamma * (n - 2)
    if not value.low > Fraction(5 * n, 11):
        raise BoundsError(f"bound {value} for n={n} does not exceed 5n/11")
    return value


def corollary_holds(n: int, consts: Optional[BoundsConstants] = None) -> bool:
    return diameter_lower(n, consts).low > Fraction(5 * n, 11)


def load_known_values(path: Union[str, Path]) -> Dict[int, int]:
    """Read a `n,diameter` CSV of known least diameters."""
    values: Dict[int, int] = {}
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or not {"n", "diameter"} <= set(reader.fieldnames):
                raise BoundsError(f"{path}: header must be n,diameter")
            for row in reader:
                try:
                    n, d = int(row["n"]), int(row["diameter"])
                except (TypeError, ValueError) as e:
                    raise BoundsError(f"{path}: bad row {row}: {e}") from e
                values[n] = d
    except OSError as e:
        raise BoundsError(f"cannot read {path}: {e}") from e
    log.info("loaded %d known values from %s", len(values), path)
    return values


def check_known_values(values: Dict[int, int], consts: Optional[BoundsConstants] = None) -> List[Dict[str, object]]:
    """Known diameters in 4 <= n <= cutoff_n that fall below limit_constant * n."""
    consts = consts or constants()
    c = limit_constant()
    violations = []
    for n in sorted(values):
        if not 4 <= n <= consts.cutoff_n:
            continue
        bound = c * n
        if values[n] < bound.high:
            violations.append({"n": n, "diameter": values[n], "bound": decimal_string(bound.high, 6, "ceil")})
    return violations


def pps_table(ks: Iterable[int]) -> List[Dict[str, object]]:
    rows = []
    for k in ks:
        lower, upper = pps_bounds(k)
        rows.append({"k": k, "lower": lower.to_dict(), "upper": upper.to_dict()})
    return rows


def bounds_report(
    pps_ks: Iterable[int] = (),
    known_values: Optional[Dict[int, int]] = None,
    consts: Optional[BoundsConstants] = None,
) -> Dict[str, object]:
    consts = consts or constants()
    limit = limit_constant()
    residual = quadratic_residual(consts)
    report: Dict[str, object] = {
        "format": "ips-bounds/1",
        "cutoffs": {"n": consts.cutoff_n, "diameter": consts.cutoff_diam, "t": consts.cutoff_t},
        "constants": {
            "beta": consts.beta.to_dict(),
            "gamma2": consts.gamma2.to_dict(),
            "gamma": consts.gamma.to_dict(),
            "lambda_min": consts.lambda_min.to_dict(),
            "limit": limit.to_dict(),
            "min_segment_length_at_t": min_segment_length(consts.cutoff_t).to_dict(),
        },
        "checks": {
            "gamma_above_5_11": consts.gamma.low > Fraction(5, 11),
            "gamma_below_limit": consts.gamma.certainly_lt(limit),
            "quadratic_root_certified": residual.contains(0),
            "segment_length_above_cutoff": min_segment_length(consts.cutoff_t).low > consts.cutoff_diam,
            "pps_upper_within_beta": (pps_bounds(consts.cutoff_n + 1)[1] * _sqrt(consts.cutoff_n)).certainly_le(consts.beta),
        },
        "flags": {
            "beta_above_reference": {
                "reference": decimal_string(REFERENCE_BETA, 5),
                "certified_low": decimal_string(consts.beta.low, 12, "floor"),
                "value": consts.beta.low > REFERENCE_BETA,
                "note": "certified beta exceeds the quoted bound 1.07464; gamma is computed from the certified value",
            },
        },
        "provenance": {},
    }
    ks = list(pps_ks)
    if ks:
        report["pps"] = pps_table(ks)
    if known_values is not None:
        report["known_values"] = {
            "count": len(known_values),
            "violations": check_known_values(known_values, consts),
        }
    return report
