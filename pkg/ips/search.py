"""Exhaustive desk-scale oracles over small integral point sets.

The minimum-diameter search builds distance matrices pair by pair. Points 0
and 1 are a closest pair, the remaining points are sorted by their
distances to them, and every partial matrix must keep its triangles valid
and its 4-point subsets planar. A complete matrix is accepted only when its
Gram matrix is PSD of rank 2.
"""
import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple, Union

from ips import config
from ips.dmatrix import DistanceMatrix, canonical_form, realizable_dim
from ips.errors import GeometryError, SearchGuardError
from ips.exactnum import is_rational_square
from ips.geometry import (
    PlanarPoint,
    PlanarPointSet,
    collinear_indices,
    dist_squared,
    integer_distance,
    verify_integral_set,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Found:
    min_diameter: int
    witness: DistanceMatrix


@dataclass(frozen=True)
class NotWithinBound:
    bound: int


@dataclass(frozen=True)
class SearchOutcome:
    n: int
    bound: int
    result: Union[Found, NotWithinBound]
    nodes_explored: int
    nodes_by_diameter: Dict[int, int] = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return isinstance(self.result, Found)


@dataclass(frozen=True)
class Facher:
    line_points: Tuple[int, ...]
    apex: int
    unit_pair: Tuple[int, int]


@dataclass(frozen=True)
class Violation:
    unit_pair: Tuple[int, int]
    off_line: Tuple[int, ...]
    reason: str


@dataclass(frozen=True)
class UnitSetClassification:
    verdict: Union[Facher, Violation]

    @property
    def is_facher(self) -> bool:
        return isinstance(self.verdict, Facher)


@dataclass(frozen=True)
class Extendable:
    point: PlanarPoint
    distances: Tuple[int, ...]


@dataclass(frozen=True)
class MaximalWithin:
    radius_bound: int
    # true only when no extension exists at any radius
    certified_absolute: bool = False


def _planar4(sq: List[List[int]], a: int, b: int, c: int, d: int) -> bool:
    # doubled Gram matrix at base a must be singular
    gbb, gcc, gdd = 2 * sq[a][b], 2 * sq[a][c], 2 * sq[a][d]
    gbc = sq[a][b] + sq[a][c] - sq[b][c]
    gbd = sq[a][b] + sq[a][d] - sq[b][d]
    gcd = sq[a][c] + sq[a][d] - sq[c][d]
    det = (
        gbb * (gcc * gdd - gcd * gcd)
        - gbc * (gbc * gdd - gcd * gbd)
        + gbd * (gbc * gcd - gcc * gbd)
    )
    return det == 0


class _Enumerator:
    """Planar integer distance matrices with d01 fixed and entries in [d01, ceiling]."""

    def __init__(self, n: int, ceiling: int, d01: int):
        self.n = n
        self.ceiling = ceiling
        self.d01 = d01
        self.nodes = 0
        self.m = [[0] * n for _ in range(n)]
        self.sq = [[0] * n for _ in range(n)]
        self.order = [(j, i) for i in range(2, n) for j in range(i)]

    def _set(self, i: int, j: int, v: int) -> None:
        self.m[i][j] = self.m[j][i] = v
        self.sq[i][j] = self.sq[j][i] = v * v

    def _consistent(self, j: int, i: int) -> bool:
        m = self.m
        for a in range(j):
            x, y, z = m[a][j], m[a][i], m[j][i]
            if x > y + z or y > x + z or z > x + y:
                return False
        for a, b in itertools.combinations(range(j), 2):
            if not _planar4(self.sq, a, b, j, i):
                return False
        return True

    def matrices(self) -> Iterator[DistanceMatrix]:
        self._set(0, 1, self.d01)
        yield from self._extend(0)

    def _extend(self, pos: int) -> Iterator[DistanceMatrix]:
        if pos == len(self.order):
            dm = DistanceMatrix(tuple(tuple(row) for row in self.m))
            verdict = realizable_dim(dm)
            if verdict.psd and verdict.gram_rank == 2:
                yield dm
            return
        j, i = self.order[pos]
        m = self.m
        lo, hi = self.d01, self.ceiling
        if j > 0:
            lo = max(lo, abs(m[0][j] - m[0][i]))
            hi = min(hi, m[0][j] + m[0][i])
        if i >= 3 and j == 0:
            lo = max(lo, m[0][i - 1])
        if i >= 3 and j == 1 and m[0][i] == m[0][i - 1]:
            lo = max(lo, m[1][i - 1])
        for v in range(lo, hi + 1):
            self.nodes += 1
            self._set(j, i, v)
            if self._consistent(j, i):
                yield from self._extend(pos + 1)
        self._set(j, i, 0)


def _branch(args) -> Tuple[Optional[Tuple[Tuple[int, ...], ...]], int]:
    n, ceiling, d01 = args
    e = _Enumerator(n, ceiling, d01)
    dm = next(e.matrices(), None)
    return (dm.entries if dm is not None else None), e.nodes


def _check_guard(n: Optional[int], b_max: int) -> None:
    if n is not None and not 3 <= n <= config.SEARCH_MAX_N:
        raise SearchGuardError(f"n={n} outside the supported range 3..{config.SEARCH_MAX_N}")
    if not 1 <= b_max <= config.SEARCH_MAX_BMAX:
        raise SearchGuardError(f"b_max={b_max} outside the supported range 1..{config.SEARCH_MAX_BMAX}")


def min_diameter(n: int, b_max: int, jobs: Optional[int] = None) -> SearchOutcome:
    """Least diameter of an n-point planar integral set, searching diameters 1..b_max."""
    _check_guard(n, b_max)
    jobs = config.JOBS if jobs is None else jobs
    total = 0
    by_diameter: Dict[int, int] = {}
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        for ceiling in range(1, b_max + 1):
            tasks = [(n, ceiling, d01) for d01 in range(1, ceiling + 1)]
            futures = [pool.submit(_branch, t) for t in tasks] if pool is not None else []
            # branches are consumed in d01 order, so counts match a sequential run
            nodes = 0
            witness = None
            for idx, task in enumerate(tasks):
                entries, count = futures[idx].result() if futures else _branch(task)
                nodes += count
                if entries is not None:
                    witness = DistanceMatrix(entries)
                    break
            for f in futures:
                f.cancel()
            by_diameter[ceiling] = nodes
            total += nodes
            log.debug("min_diameter(n=%d): diameter %d, %d nodes", n, ceiling, nodes)
            if witness is not None:
                return SearchOutcome(n, b_max, Found(ceiling, witness), total, by_diameter)
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    return SearchOutcome(n, b_max, NotWithinBound(b_max), total, by_diameter)


def is_planar_integral(dm: DistanceMatrix) -> bool:
    return realizable_dim(dm).dimension == 2


def enumerate_unit4(b_max: int) -> List[DistanceMatrix]:
    """All 4-point planar integral sets with a unit distance and diameter <= b_max, up to isometry."""
    _check_guard(None, b_max)
    seen = set()
    out: List[DistanceMatrix] = []
    e = _Enumerator(4, b_max, 1)
    for dm in e.matrices():
        canon = canonical_form(dm)
        if canon.entries not in seen:
            seen.add(canon.entries)
            out.append(canon)
    out.sort(key=lambda dm: dm.entries)
    log.info("enumerate_unit4(b_max=%d): %d sets, %d nodes", b_max, len(out), e.nodes)
    return out


def _unit_pairs(s: PlanarPointSet) -> List[Tuple[int, int]]:
    return [
        (i, j)
        for i, j in itertools.combinations(range(len(s)), 2)
        if dist_squared(s[i], s[j], s.q) == 1
    ]


def classify_unit_set(s: PlanarPointSet) -> UnitSetClassification:
    """Check that a unit-distance set is facher around its unit pair.

    Expected shape: n-1 collinear points including the unit pair and one
    apex on the pair's perpendicular bisector.
    """
    report = verify_integral_set(s)
    if not report.ok:
        raise GeometryError("classify_unit_set needs an integral full-dimensional set")
    pairs = _unit_pairs(s)
    if not pairs:
        raise GeometryError("no unit distance present")
    u, v = pairs[0]
    line = tuple(collinear_indices(s, u, v))
    off = tuple(i for i in range(len(s)) if i not in line)
    if len(off) != 1:
        return UnitSetClassification(Violation((u, v), off, f"{len(off)} points off the unit line"))
    apex = off[0]
    if dist_squared(s[apex], s[u], s.q) != dist_squared(s[apex], s[v], s.q):
        return UnitSetClassification(Violation((u, v), off, "apex is not on the perpendicular bisector"))
    return UnitSetClassification(Facher(line, apex, (u, v)))


def _circle_points(p0: PlanarPoint, p1: PlanarPoint, q: int, r1: int, r2: int) -> List[PlanarPoint]:
    """Points with rational coordinates at distance r1 from p0 and r2 from p1."""
    a = 2 * (p1.x - p0.x)
    b = 2 * q * (p1.y - p0.y)
    c = r1 * r1 - r2 * r2 - p0.x ** 2 + p1.x ** 2 - q * p0.y ** 2 + q * p1.y ** 2
    points: List[PlanarPoint] = []
    if b == 0:
        x = c / a
        rest = (r1 * r1 - (x - p0.x) ** 2) / q
        root = is_rational_square(rest)
        if root is None:
            return points
        for y in sorted({p0.y - root, p0.y + root}):
            points.append(PlanarPoint(x, y))
        return points
    # y = u + w*x
    u, w = c / b, -a / b
    k2 = 1 + q * w * w
    k1 = -2 * p0.x + 2 * q * w * (u - p0.y)
    k0 = p0.x ** 2 + q * (u - p0.y) ** 2 - r1 * r1
    root = is_rational_square(k1 * k1 - 4 * k2 * k0)
    if root is None:
        return points
    for x in sorted({(-k1 - root) / (2 * k2), (-k1 + root) / (2 * k2)}):
        points.append(PlanarPoint(x, u + w * x))
    return points


def bounded_maximality(s: PlanarPointSet, radius_bound: int) -> Union[Extendable, MaximalWithin]:
    """Look for one more point at integral distances <= radius_bound from every point of s.

    Candidates are circle intersections around points 0 and 1 whose
    coordinates fit the set's own radicand.
    """
    if len(s) < 2:
        raise GeometryError("need a base pair of two points")
    report = verify_integral_set(s)
    if not report.ok:
        raise GeometryError("bounded_maximality needs an integral planar set")
    if radius_bound < report.diameter:
        raise GeometryError(f"radius bound {radius_bound} is below the diameter {report.diameter}")
    p0, p1 = s[0], s[1]
    base = integer_distance(p0, p1, s.q)
    present = set(s.points)
    for r1 in range(1, radius_bound + 1):
        for r2 in range(max(1, abs(r1 - base)), min(radius_bound, r1 + base) + 1):
            for cand in _circle_points(p0, p1, s.q, r1, r2):
                if cand in present:
                    continue
                distances = []
                for p in s.points:
                    d = integer_distance(cand, p, s.q)
                    if d is None or d > radius_bound:
                        break
                    distances.append(d)
                else:
                    log.info("extension found at %s", cand)
                    return Extendable(cand, tuple(distances))
    units = report.distance_multiset.count(1)
    return MaximalWithin(radius_bound, certified_absolute=units >= 2)
