"""Integral point sets with a prescribed distance.

The base construction places 2**k line points M_{J+-} = (+-b_J/2, 0) and the apex
N = (0, sqrt(a)/2) with a = 2**(2**k) - 1; the pair with b_J = 1 is at
distance 1. Trimming, dilation and the simplex blow-up turn it into prime
sets in any dimension m >= 3.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from ips import config
from ips.dmatrix import DistanceMatrix, dilate_matrix, from_points, realizable_dim
from ips.errors import ConstructionError, ExactArithmeticError
from ips.exactnum import squarefree_part
from ips.geometry import PlanarPoint, PlanarPointSet, dist_squared, orientation

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SubsetTerm:
    """The numbers attached to one index subset J of the base construction."""

    subset: Tuple[int, ...]
    c: int
    b: int
    g: int


@dataclass(frozen=True)
class ConstructionParams:
    k: int
    a: int
    d_list: Tuple[int, ...]
    terms: Tuple[SubsetTerm, ...]

    def unit_term(self) -> SubsetTerm:
        return next(t for t in self.terms if abs(t.b) == 1)

    def check_invariants(self) -> None:
        if self.a % 4 != 3:
            raise ConstructionError(f"a={self.a} is not 3 mod 4")
        for d in self.d_list:
            if d % 4 != 1:
                raise ConstructionError(f"d={d} is not 1 mod 4")
        for t in self.terms:
            if t.c % 4 != 1 or self.a % t.c != 0:
                raise ConstructionError(f"c_J={t.c} breaks c_J = 1 mod 4 or c_J | a")
            if t.b % 2 != 1 or t.g % 2 != 0:
                raise ConstructionError(f"b_J={t.b} must be odd and g_J={t.g} even")
        magnitudes = [abs(t.b) for t in self.terms]
        if len(set(magnitudes)) != len(magnitudes):
            raise ConstructionError(f"|b_J| values repeat: {magnitudes}")
        if self.k >= 2:
            top = next(t for t in self.terms if t.subset == (self.k - 1,))
            if top.b != 1:
                raise ConstructionError(f"b_H={top.b}, expected 1")


@dataclass(frozen=True)
class ConstructedSet:
    """A planar set with the provenance of how it was obtained."""

    points: PlanarPointSet
    k: int
    # (J, sign) per line point, in point order; the apex is the last point
    labels: Tuple[Tuple[Tuple[int, ...], int], ...]
    dilation: int = 1

    @property
    def apex_index(self) -> int:
        return len(self.points) - 1

    def provenance(self) -> Dict[str, object]:
        return {
            "construction": "construction1",
            "k": self.k,
            "kept": [{"J": list(j), "sign": "+" if s > 0 else "-"} for j, s in self.labels],
            "dilation": self.dilation,
        }


@dataclass(frozen=True)
class BlowupPlan:
    base: PlanarPointSet
    target_dim: int
    simplex_side: int
    apex_height_squared: Fraction = field(default=Fraction(-1))

    def __post_init__(self):
        if self.apex_height_squared < 0:
            object.__setattr__(self, "apex_height_squared", apex_height_squared(self.base))


@dataclass(frozen=True)
class PrimeSet:
    matrix: DistanceMatrix
    m: int
    d: int
    k: int
    min_unique: bool
    provenance: Dict[str, object]


def construction_params(k: int) -> ConstructionParams:
    if k < 1:
        raise ConstructionError(f"k must be >= 1, got {k}")
    a = 2 ** (2 ** k) - 1
    d_list = tuple(2 ** (2 ** j) + 1 for j in range(1, k))
    indices = range(1, k)
    terms = []
    for size in range(len(d_list) + 1):
        for subset in itertools.combinations(indices, size):
            c = math.prod(d_list[j - 1] for j in subset)
            co = a // c
            terms.append(SubsetTerm(subset, c, (c - co) // 2, (c + co) // 2))
    return ConstructionParams(k, a, d_list, tuple(terms))


def construction1(k: int, max_k: Optional[int] = None) -> ConstructedSet:
    max_k = config.MAX_K if max_k is None else max_k
    if k < 1:
        raise ConstructionError(f"k must be >= 1, got {k}")
    if k > max_k:
        raise ConstructionError(f"k={k} exceeds the supported range k <= {max_k}")
    params = construction_params(k)
    try:
        q, f = squarefree_part(params.a)
    except ExactArithmeticError as e:
        raise ConstructionError(f"factorization limit exceeded for a={params.a}: {e}") from e
    points: List[PlanarPoint] = []
    labels = []
    for t in params.terms:
        for sign in (1, -1):
            points.append(PlanarPoint(Fraction(sign * t.b, 2), 0))
            labels.append((t.subset, sign))
    # sqrt(a)/2 == (f/2) * sqrt(q)
    points.append(PlanarPoint(0, Fraction(f, 2)))
    log.debug("construction1(k=%d): a=%d, q=%d, %d points", k, params.a, q, len(points))
    return ConstructedSet(PlanarPointSet(q, tuple(points)), k, tuple(labels))


def trim(cs: ConstructedSet, target_n: int) -> ConstructedSet:
    """Drop line points down to target_n points, keeping the unit pair and the apex.

    Pairs go by descending |b_J|; when a single point must go it is the one
    with positive x coordinate.
    """
    n = len(cs.points)
    if not 3 <= target_n <= n:
        raise ConstructionError(f"target_n={target_n} outside 3..{n}")
    line = list(range(n - 1))
    excess = n - target_n
    by_subset: Dict[Tuple[int, ...], List[int]] = {}
    for idx in line:
        by_subset.setdefault(cs.labels[idx][0], []).append(idx)
    order = sorted(
        by_subset.items(),
        key=lambda kv: -abs(cs.points[kv[1][0]].x),
    )
    dropped = set()
    for subset, members in order:
        if excess == 0:
            break
        if abs(cs.points[members[0]].x) == Fraction(cs.dilation, 2):
            continue
        if excess >= len(members):
            dropped.update(members)
            excess -= len(members)
        else:
            positive = max(members, key=lambda i: cs.points[i].x)
            dropped.add(positive)
            excess -= 1
    kept = [i for i in range(n) if i not in dropped]
    labels = tuple(cs.labels[i] for i in kept if i != n - 1)
    return ConstructedSet(cs.points.subset(kept), cs.k, labels, cs.dilation)


def dilate(s: Union[ConstructedSet, PlanarPointSet, DistanceMatrix], p: int):
    if p < 1:
        raise ConstructionError(f"dilation factor must be >= 1, got {p}")
    if isinstance(s, DistanceMatrix):
        return dilate_matrix(s, p)
    if isinstance(s, ConstructedSet):
        return ConstructedSet(dilate(s.points, p), s.k, s.labels, s.dilation * p)
    return PlanarPointSet(s.q, tuple(pt.scaled(p) for pt in s.points))


def facher_split(s: PlanarPointSet) -> Tuple[List[int], int]:
    """Return (line point indices, apex index) of a facher set."""
    n = len(s)
    # the last point is preferred as apex; a triangle is facher for any choice
    for apex in reversed(range(n)):
        rest = [i for i in range(n) if i != apex]
        a, b = s[rest[0]], s[rest[1]]
        if all(orientation(a, b, s[i], s.q) == 0 for i in rest[2:]) and orientation(a, b, s[apex], s.q) != 0:
            return rest, apex
    raise ConstructionError("set is not facher: no n-1 collinear points with one point off the line")


def apex_height_squared(s: PlanarPointSet) -> Fraction:
    """Squared distance from the apex of a facher set to the carrier line."""
    line, apex = facher_split(s)
    a, b, c = s[line[0]], s[line[1]], s[apex]
    cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
    # |cross| * sqrt(q) / |ab|
    return cross * cross * s.q / dist_squared(a, b, s.q)


def simplex_circumradius_squared(side: int, m: int) -> Fraction:
    """Circumradius squared of the regular simplex with m-1 vertices and the given side."""
    return Fraction(side * side * (m - 2), 2 * (m - 1))


def blowup(plan: BlowupPlan) -> DistanceMatrix:
    """Replace the apex by a regular (m-2)-simplex of side s in the orthogonal complement of the line.

    Each simplex vertex keeps the apex's distance to every line point, so
    the condition is that the simplex fits strictly inside the sphere of
    radius h around the foot of the apex.
    """
    m, side = plan.target_dim, plan.simplex_side
    if m < 3:
        raise ConstructionError(f"target dimension must be >= 3, got {m}")
    if side < 1:
        raise ConstructionError(f"simplex side must be >= 1, got {side}")
    base = from_points(plan.base)
    line, apex = facher_split(plan.base)
    r2 = simplex_circumradius_squared(side, m)
    if r2 >= plan.apex_height_squared:
        raise ConstructionError(
            f"simplex circumradius^2 {r2} does not fit under apex height^2 {plan.apex_height_squared}"
        )
    count = len(line) + m - 1
    rows = [[0] * count for _ in range(count)]
    for u, v in itertools.combinations(range(len(line)), 2):
        rows[u][v] = rows[v][u] = base[line[u], line[v]]
    for u in range(len(line)):
        for w in range(len(line), count):
            rows[u][w] = rows[w][u] = base[line[u], apex]
    for w, z in itertools.combinations(range(len(line), count), 2):
        rows[w][z] = rows[z][w] = side
    dm = DistanceMatrix(tuple(tuple(r) for r in rows))
    verdict = realizable_dim(dm)
    if verdict.dimension != m:
        raise ConstructionError(f"blow-up realizes dimension {verdict.dimension}, expected {m}")
    return dm


def prime_set(m: int, n: int, d: int, unique_min: bool = False, max_k: Optional[int] = None) -> PrimeSet:
    """Prime integral set of n points spanning R^m that contains distance d.

    Takes the smallest admissible k, trims the base set to n-m+2 points,
    dilates by d and blows the apex up into a simplex of side d+1.
    """
    if m < 3:
        raise ConstructionError(f"m must be >= 3, got {m}")
    if n < m + 1:
        raise ConstructionError(f"n must be >= m+1={m + 1}, got {n}")
    if d < 1:
        raise ConstructionError(f"d must be >= 1, got {d}")
    max_k = config.MAX_K if max_k is None else max_k
    planar_n = n - m + 2
    side = d + 1
    r2 = simplex_circumradius_squared(side, m)
    k = 2 if unique_min else 1
    while True:
        if k > max_k:
            raise ConstructionError(f"no admissible k <= {max_k} for m={m}, n={n}, d={d}")
        a = 2 ** (2 ** k) - 1
        if 2 ** k + 1 >= planar_n and r2 < Fraction(d * d * a, 4):
            break
        log.debug("prime_set: k=%d rejected (size %d, circumradius^2 %s)", k, 2 ** k + 1, r2)
        k += 1
    base = dilate(trim(construction1(k, max_k), planar_n), d)
    dm = blowup(BlowupPlan(base.points, m, side))
    counts = dm.distance_multiset()
    min_unique = counts[0] == d and (len(counts) == 1 or counts[1] > d)
    if dm.gcd() != 1:
        raise ConstructionError(f"blow-up is not prime: gcd {dm.gcd()}")
    provenance = dict(base.provenance())
    provenance.update({"m": m, "simplex_side": side, "unique_min": min_unique})
    return PrimeSet(dm, m, d, k, min_unique, provenance)
