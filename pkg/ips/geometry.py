"""Planar point sets in shared-radicand form.

A point (x, y) of a set with radicand q stands for the real point
(x, y*sqrt(q)); x and y are rationals. Squared distances, orientations and
the lines used by crosses are rational after expansion, so every predicate
here is exact.
"""
import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ips import config
from ips.errors import GeometryError
from ips.exactnum import (
    QuadraticNumber,
    RationalInterval,
    RationalLike,
    interval_sqrt,
    is_rational_square,
    is_squarefree,
)

log = logging.getLogger(__name__)

Line = Tuple[Fraction, Fraction, Fraction]  # a*x + b*y == c in (x, y) coordinates


@dataclass(frozen=True)
class PlanarPoint:
    x: Fraction
    y: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))

    def coords(self, q: int) -> Tuple[QuadraticNumber, QuadraticNumber]:
        return QuadraticNumber(self.x), QuadraticNumber(0, self.y, q)

    def scaled(self, p: RationalLike) -> "PlanarPoint":
        return PlanarPoint(self.x * p, self.y * p)


@dataclass(frozen=True)
class Segment:
    a: PlanarPoint
    b: PlanarPoint

    def __post_init__(self):
        if self.a == self.b:
            raise GeometryError(f"segment endpoints coincide: {self.a}")


@dataclass(frozen=True)
class PlanarPointSet:
    q: int
    points: Tuple[PlanarPoint, ...]

    def __post_init__(self):
        if self.q < 1 or not is_squarefree(self.q):
            raise GeometryError(f"radicand q={self.q} is not a positive squarefree integer")
        pts = tuple(self.points)
        seen: Dict[PlanarPoint, int] = {}
        for i, p in enumerate(pts):
            if p in seen:
                raise GeometryError(f"duplicate point {p} at indices {seen[p]} and {i}")
            seen[p] = i
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i: int) -> PlanarPoint:
        return self.points[i]

    def subset(self, indices: Iterable[int]) -> "PlanarPointSet":
        return PlanarPointSet(self.q, tuple(self.points[i] for i in indices))

    def with_point(self, p: PlanarPoint) -> "PlanarPointSet":
        return PlanarPointSet(self.q, self.points + (p,))


@dataclass(frozen=True)
class IntegralityReport:
    is_integral: bool
    full_dimensional: bool
    diameter: Optional[int] = None
    min_distance: Optional[int] = None
    distance_multiset: Tuple[int, ...] = ()
    failures: Tuple[Tuple[int, int], ...] = ()

    @property
    def ok(self) -> bool:
        return self.is_integral and self.full_dimensional


@dataclass(frozen=True)
class CrossIntersection:
    whole_line: bool
    points: Tuple[PlanarPoint, ...] = ()

    @property
    def kind(self) -> str:
        return "WholeLine" if self.whole_line else "FinitePoints"

    @property
    def count(self) -> Optional[int]:
        return None if self.whole_line else len(self.points)


@dataclass(frozen=True)
class ContainerReport:
    """Extents of a set in the frame whose first axis is a diameter direction."""

    diameter: int
    along: Fraction
    across: RationalInterval
    fits: bool
    tolerance: Fraction = field(default_factory=lambda: Fraction(1, 2 ** config.CONTAINER_BITS))


def dist_squared(p: PlanarPoint, q_pt: PlanarPoint, radicand: int) -> Fraction:
    dx = p.x - q_pt.x
    dy = p.y - q_pt.y
    return dx * dx + dy * dy * radicand


def distance(p: PlanarPoint, q_pt: PlanarPoint, radicand: int) -> Optional[Fraction]:
    """Exact distance when it is rational, else None."""
    return is_rational_square(dist_squared(p, q_pt, radicand))


def integer_distance(p: PlanarPoint, q_pt: PlanarPoint, radicand: int) -> Optional[int]:
    d = distance(p, q_pt, radicand)
    if d is None or d.denominator != 1:
        return None
    return d.numerator


def orientation(a: PlanarPoint, b: PlanarPoint, c: PlanarPoint, radicand: int) -> int:
    """Sign of the cross product (b - a) x (c - a): 1 left turn, -1 right turn, 0 collinear."""
    ax, ay = a.coords(radicand)
    bx, by = b.coords(radicand)
    cx, cy = c.coords(radicand)
    cross = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return cross.sign()


def all_collinear(points: Sequence[PlanarPoint], radicand: int) -> bool:
    if len(points) < 3:
        return True
    a, b = points[0], points[1]
    return all(orientation(a, b, c, radicand) == 0 for c in points[2:])


def verify_integral_set(s: PlanarPointSet) -> IntegralityReport:
    if len(s) < 3:
        raise GeometryError(f"need at least 3 points, got {len(s)}")
    distances: List[int] = []
    failures: List[Tuple[int, int]] = []
    for i, j in itertools.combinations(range(len(s)), 2):
        d = integer_distance(s[i], s[j], s.q)
        if d is None:
            failures.append((i, j))
        else:
            distances.append(d)
    full = not all_collinear(s.points, s.q)
    if failures:
        log.debug("non-integral pairs: %s", failures)
        return IntegralityReport(False, full, failures=tuple(failures))
    distances.sort()
    return IntegralityReport(
        is_integral=True,
        full_dimensional=full,
        diameter=distances[-1],
        min_distance=distances[0],
        distance_multiset=tuple(distances),
    )


def _triangle_area_squared(a: PlanarPoint, b: PlanarPoint, c: PlanarPoint, radicand: int) -> Fraction:
    # area = |cross| * sqrt(q) / 2 with cross taken in (x, y) coordinates
    cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
    return cross * cross * radicand / 4


def characteristic(s: PlanarPointSet) -> int:
    """Squarefree q with every triangle area a rational multiple of sqrt(q)."""
    found = False
    for a, b, c in itertools.combinations(s.points, 3):
        area2 = _triangle_area_squared(a, b, c, s.q)
        if area2 == 0:
            continue
        found = True
        if is_rational_square(area2 / s.q) is None:
            raise GeometryError(f"triangle {a}, {b}, {c} has area outside Q*sqrt({s.q})")
    if not found:
        raise GeometryError("degenerate set: all points are collinear")
    return s.q


def _normalize(line: Line) -> Line:
    a, b, c = line
    lead = a if a != 0 else b
    return a / lead, b / lead, c / lead


def line_through(p1: PlanarPoint, p2: PlanarPoint) -> Line:
    a = p2.y - p1.y
    b = -(p2.x - p1.x)
    return _normalize((a, b, a * p1.x + b * p1.y))


def perpendicular_bisector(p1: PlanarPoint, p2: PlanarPoint, radicand: int) -> Line:
    a = 2 * (p2.x - p1.x)
    b = 2 * radicand * (p2.y - p1.y)
    c = p2.x ** 2 - p1.x ** 2 + radicand * (p2.y ** 2 - p1.y ** 2)
    return _normalize((a, b, c))


def _intersect(l1: Line, l2: Line) -> Optional[PlanarPoint]:
    a1, b1, c1 = l1
    a2, b2, c2 = l2
    det = a1 * b2 - a2 * b1
    if det == 0:
        return None
    return PlanarPoint((c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det)


def _along(origin: PlanarPoint, direction_to: PlanarPoint, p: PlanarPoint, radicand: int) -> Fraction:
    # dot product (p - origin) . (direction_to - origin), rational
    return (p.x - origin.x) * (direction_to.x - origin.x) + (p.y - origin.y) * (direction_to.y - origin.y) * radicand


def open_segments_intersect(seg1: Segment, seg2: Segment, radicand: int = 1) -> bool:
    a, b, c, d = seg1.a, seg1.b, seg2.a, seg2.b
    o1 = orientation(a, b, c, radicand)
    o2 = orientation(a, b, d, radicand)
    if o1 == 0 and o2 == 0:
        # common carrier: compare open parameter ranges along a->b
        t = [_along(a, b, p, radicand) for p in (a, b, c, d)]
        lo1, hi1 = sorted(t[:2])
        lo2, hi2 = sorted(t[2:])
        return max(lo1, lo2) < min(hi1, hi2)
    o3 = orientation(c, d, a, radicand)
    o4 = orientation(c, d, b, radicand)
    return o1 * o2 < 0 and o3 * o4 < 0


def cross_intersection(seg1: Segment, seg2: Segment, radicand: int = 1) -> CrossIntersection:
    """Classify cr(seg1) ∩ cr(seg2); the cross is the carrier line plus the perpendicular bisector."""
    if open_segments_intersect(seg1, seg2, radicand):
        raise GeometryError("open segments intersect")
    lines1 = (line_through(seg1.a, seg1.b), perpendicular_bisector(seg1.a, seg1.b, radicand))
    lines2 = (line_through(seg2.a, seg2.b), perpendicular_bisector(seg2.a, seg2.b, radicand))
    # A shared line (even only one of the two) is reported as WholeLine.
    if any(l1 == l2 for l1 in lines1 for l2 in lines2):
        return CrossIntersection(True)
    points: List[PlanarPoint] = []
    for l1 in lines1:
        for l2 in lines2:
            p = _intersect(l1, l2)
            if p is not None and p not in points:
                points.append(p)
    return CrossIntersection(False, tuple(points))


def rho_value(n_pt: PlanarPoint, seg: Segment, radicand: int) -> Fraction:
    """|N A| - |N B| for seg = (A, B); both distances must be rational."""
    d1 = distance(n_pt, seg.a, radicand)
    d2 = distance(n_pt, seg.b, radicand)
    if d1 is None or d2 is None:
        raise GeometryError(f"irrational distance from {n_pt} to {seg}; use rho_interval")
    return d1 - d2


def rho_interval(n_pt: PlanarPoint, seg: Segment, radicand: int, precision: Optional[RationalLike] = None) -> RationalInterval:
    return (
        interval_sqrt(dist_squared(n_pt, seg.a, radicand), precision)
        - interval_sqrt(dist_squared(n_pt, seg.b, radicand), precision)
    )


def collinear_indices(s: PlanarPointSet, i: int, j: int) -> List[int]:
    """Indices of the points on the line through points i and j, ordered along it."""
    if i == j:
        raise GeometryError("a line needs two distinct points")
    a, b = s[i], s[j]
    on_line = [k for k, p in enumerate(s.points) if orientation(a, b, p, s.q) == 0]
    on_line.sort(key=lambda k: _along(a, b, s[k], s.q))
    return on_line


def segment_length_counts(s: PlanarPointSet, i: int, j: int) -> Counter:
    """Multiset of distances between pairs of points on the line through points i and j."""
    counts: Counter = Counter()
    for u, v in itertools.combinations(collinear_indices(s, i, j), 2):
        d = distance(s[u], s[v], s.q)
        if d is not None:
            counts[d] += 1
    return counts


def count_equal_segments_on_line(s: PlanarPointSet, i: int, j: int, k: int) -> int:
    return segment_length_counts(s, i, j)[Fraction(k)]


def distinct_lines(s: PlanarPointSet) -> List[Tuple[int, ...]]:
    """Every line through two points of s, as the ordered tuple of its point indices."""
    lines: List[Tuple[int, ...]] = []
    seen = set()
    for i, j in itertools.combinations(range(len(s)), 2):
        if (i, j) in seen:
            continue
        on_line = tuple(collinear_indices(s, i, j))
        for u, v in itertools.combinations(sorted(on_line), 2):
            seen.add((u, v))
        lines.append(on_line)
    return lines


def rho_collisions(s: PlanarPointSet) -> List[Tuple[Tuple[int, ...], int, Fraction, Fraction]]:
    """Off-line points lying on the same rho curve of two equal collinear segments.

    Segments are oriented along their line. Returns (line, point, length, rho)
    witnesses; for an integral set the list is empty.
    """
    collisions = []
    for line in distinct_lines(s):
        if len(line) < 3:
            continue
        on_line = set(line)
        by_length: Dict[Fraction, List[Segment]] = {}
        for u, v in itertools.combinations(line, 2):
            d = distance(s[u], s[v], s.q)
            if d is not None:
                by_length.setdefault(d, []).append(Segment(s[u], s[v]))
        for k, n_pt in enumerate(s.points):
            if k in on_line:
                continue
            for length, segments in by_length.items():
                seen: Dict[Fraction, Segment] = {}
                for seg in segments:
                    try:
                        rho = rho_value(n_pt, seg, s.q)
                    except GeometryError:
                        continue
                    if rho in seen:
                        collisions.append((line, k, length, rho))
                    seen[rho] = seg
    return collisions


def convex_quad_diag_exceeds_side(a: PlanarPoint, b: PlanarPoint, c: PlanarPoint, d: PlanarPoint, radicand: int = 1) -> bool:
    turns = {
        orientation(a, b, c, radicand),
        orientation(b, c, d, radicand),
        orientation(c, d, a, radicand),
        orientation(d, a, b, radicand),
    }
    if len(turns) != 1 or 0 in turns:
        raise GeometryError("quadrilateral is not convex in the given order")
    diag = max(dist_squared(a, c, radicand), dist_squared(b, d, radicand))
    side = min(
        dist_squared(a, b, radicand),
        dist_squared(b, c, radicand),
        dist_squared(c, d, radicand),
        dist_squared(d, a, radicand),
    )
    return diag > side


def square_container(s: PlanarPointSet, bits: Optional[int] = None) -> ContainerReport:
    """Bounding box of s in the frame whose first axis runs along a diameter.

    The along-extent is rational. The across-extent is c*sqrt(q) for a
    rational c; it is reported as an interval of width about 2**-bits and
    the fit verdict compares c**2 * q with d**2 exactly.
    """
    bits = config.CONTAINER_BITS if bits is None else bits
    n = len(s)
    if n < 2:
        raise GeometryError("need at least two points")
    best = max(
        itertools.combinations(range(n), 2),
        key=lambda ij: dist_squared(s[ij[0]], s[ij[1]], s.q),
    )
    a, b = s[best[0]], s[best[1]]
    d = distance(a, b, s.q)
    if d is None:
        raise GeometryError("diameter is irrational; the set is not integral")
    along = [_along(a, b, p, s.q) / d for p in s.points]
    # perpendicular component divided by sqrt(q)
    across = [((p.x - a.x) * (b.y - a.y) - (p.y - a.y) * (b.x - a.x)) / d for p in s.points]
    along_extent = max(along) - min(along)
    across_coeff = max(across) - min(across)
    tolerance = Fraction(1, 2 ** bits)
    across_extent = across_coeff * interval_sqrt(s.q, tolerance)
    fits = along_extent <= d and across_coeff * across_coeff * s.q <= d * d
    return ContainerReport(
        diameter=int(d),
        along=along_extent,
        across=across_extent,
        fits=fits,
        tolerance=tolerance,
    )
