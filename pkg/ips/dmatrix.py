"""Integer distance matrices and their exact realizability.

A matrix of n points is realizable in R^m iff its Gram matrix
G_ij = (d_0i^2 + d_0j^2 - d_ij^2) / 2 is positive semidefinite, and the
points then span exactly rank(G) dimensions.
"""
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from ips.errors import RealizabilityError
from ips.geometry import PlanarPointSet, integer_distance, verify_integral_set

log = logging.getLogger(__name__)

Matrix = List[List[Fraction]]


@dataclass(frozen=True)
class DistanceMatrix:
    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.entries)
        n = len(rows)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise RealizabilityError(f"row {i} has {len(row)} entries, expected {n}")
            if row[i] != 0:
                raise RealizabilityError(f"diagonal entry ({i},{i}) is {row[i]}, expected 0")
            for j in range(i + 1, n):
                if row[j] != rows[j][i]:
                    raise RealizabilityError(f"entries ({i},{j}) and ({j},{i}) differ")
                if row[j] < 1:
                    raise RealizabilityError(f"off-diagonal entry ({i},{j}) is {row[j]}, expected >= 1")
        object.__setattr__(self, "entries", rows)

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: Tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def pairs(self) -> Iterable[Tuple[int, int, int]]:
        for i, j in itertools.combinations(range(self.n), 2):
            yield i, j, self.entries[i][j]

    def distance_multiset(self) -> Tuple[int, ...]:
        return tuple(sorted(d for _, _, d in self.pairs()))

    def diameter(self) -> int:
        return max(d for _, _, d in self.pairs())

    def min_distance(self) -> int:
        return min(d for _, _, d in self.pairs())

    def gcd(self) -> int:
        return math.gcd(*(d for _, _, d in self.pairs()))

    def permute(self, order: Sequence[int]) -> "DistanceMatrix":
        return DistanceMatrix(tuple(tuple(self.entries[i][j] for j in order) for i in order))

    def to_lists(self) -> List[List[int]]:
        return [list(row) for row in self.entries]


@dataclass(frozen=True)
class RealizabilityVerdict:
    gram_rank: int
    psd: bool
    dimension: Optional[int]
    full_dim_in: Optional[int]


def from_points(s: PlanarPointSet) -> DistanceMatrix:
    report = verify_integral_set(s)
    if not report.is_integral:
        raise RealizabilityError(f"set is not integral; failing pairs {list(report.failures)}")
    if not report.full_dimensional:
        raise RealizabilityError("set is collinear")
    n = len(s)
    rows = [[0] * n for _ in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        rows[i][j] = rows[j][i] = integer_distance(s[i], s[j], s.q)
    return DistanceMatrix(tuple(tuple(r) for r in rows))


def dilate_matrix(dm: DistanceMatrix, p: int) -> DistanceMatrix:
    if p < 1:
        raise RealizabilityError(f"dilation factor must be >= 1, got {p}")
    return DistanceMatrix(tuple(tuple(p * v for v in row) for row in dm.entries))


def gram(dm: DistanceMatrix, base: int = 0) -> Matrix:
    if not 0 <= base < dm.n:
        raise RealizabilityError(f"base index {base} out of range for {dm.n} points")
    others = [i for i in range(dm.n) if i != base]
    sq = [[v * v for v in row] for row in dm.entries]
    return [
        [Fraction(sq[base][i] + sq[base][j] - sq[i][j], 2) for j in others]
        for i in others
    ]


def _plain_rank(a: Matrix) -> int:
    # row echelon over Q
    m = [row[:] for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    rank = 0
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if m[r][c] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(rank + 1, rows):
            f = m[r][c] / m[rank][c]
            if f:
                for cc in range(c, cols):
                    m[r][cc] -= f * m[rank][cc]
        rank += 1
    return rank


def rank_psd(g: Matrix) -> Tuple[int, bool]:
    """Exact rank and positive semidefiniteness of a rational symmetric matrix.

    Symmetric elimination pivoting on the largest remaining diagonal entry.
    A negative pivot or a zero diagonal beside a nonzero off-diagonal entry
    means the matrix is not PSD; the rank of such a leftover block is then
    finished by ordinary row reduction.
    """
    a = [[Fraction(v) for v in row] for row in g]
    n = len(a)
    for i in range(n):
        for j in range(i + 1, n):
            if a[i][j] != a[j][i]:
                raise RealizabilityError(f"matrix is not symmetric at ({i},{j})")
    remaining = list(range(n))
    rank = 0
    psd = True
    while remaining:
        piv = max(remaining, key=lambda i: a[i][i])
        pv = a[piv][piv]
        if pv == 0:
            block = [[a[i][j] for j in remaining] for i in remaining]
            if any(v != 0 for row in block for v in row):
                psd = False
                rank += _plain_rank(block)
            break
        if pv < 0:
            psd = False
        remaining.remove(piv)
        for i in remaining:
            f = a[i][piv] / pv
            if f:
                for j in remaining:
                    a[i][j] -= f * a[piv][j]
        rank += 1
    return rank, psd


def realizable_dim(dm: DistanceMatrix, base: int = 0) -> RealizabilityVerdict:
    if dm.n == 1:
        return RealizabilityVerdict(0, True, 0, 0)
    rank, psd = rank_psd(gram(dm, base))
    dimension = rank if psd else None
    return RealizabilityVerdict(rank, psd, dimension, dimension)


def cayley_menger_determinant(dm: DistanceMatrix, indices: Optional[Sequence[int]] = None) -> int:
    """Cayley-Menger determinant of the chosen points (all by default).

    For k+1 points it equals (-1)**(k+1) * 2**k * (k!)**2 * V**2, so it
    vanishes exactly when the points are affinely dependent.
    """
    idx = list(range(dm.n)) if indices is None else list(indices)
    size = len(idx) + 1
    m = [[Fraction(1)] * size for _ in range(size)]
    m[0][0] = Fraction(0)
    for r, i in enumerate(idx, start=1):
        for c, j in enumerate(idx, start=1):
            m[r][c] = Fraction(dm[i, j] ** 2)
    return int(_determinant(m))


def _determinant(m: Matrix) -> Fraction:
    a = [row[:] for row in m]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        pivot = next((r for r in range(c, n) if a[r][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                for cc in range(c, n):
                    a[r][cc] -= f * a[c][cc]
    return det


def collinear_triple(dm: DistanceMatrix, i: int, j: int, k: int) -> bool:
    """True when points i, j, k are collinear: the longest side is the sum of the other two."""
    sides = sorted((dm[i, j], dm[j, k], dm[i, k]))
    return sides[2] == sides[0] + sides[1]


def canonical_form(dm: DistanceMatrix) -> DistanceMatrix:
    """Lexicographically least matrix among all point orderings."""
    best = None
    for order in itertools.permutations(range(dm.n)):
        flat = tuple(dm.entries[i][j] for i in order for j in order)
        if best is None or flat < best[0]:
            best = (flat, order)
    return dm.permute(best[1])
