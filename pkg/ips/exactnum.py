"""Exact scalars: rationals, quadratic numbers p + r*sqrt(q) and certified rational intervals.

Rationals are ``fractions.Fraction`` values; Fraction keeps numerator and
denominator coprime with a positive denominator after every operation.
"""
import functools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple, Union

from ips import config
from ips.errors import ExactArithmeticError

Rational = Fraction
RationalLike = Union[int, Fraction]

_RATIONAL_RE = re.compile(r"^-?\d+(/[1-9]\d*)?$")


def isqrt(n: int) -> Tuple[int, bool]:
    """Return (floor(sqrt(n)), whether n is a perfect square)."""
    if n < 0:
        raise ExactArithmeticError(f"isqrt of negative number {n}")
    root = math.isqrt(n)
    return root, root * root == n


def squarefree_part(n: int, limit: Optional[int] = None) -> Tuple[int, int]:
    """Split n into (s, f) with n == s * f**2 and s squarefree.

    Trial division up to ``limit`` (IPS_FACTOR_LIMIT by default). A cofactor
    that is a perfect square is accepted without factoring it; any other
    cofactor that would need a divisor above the limit is an error.
    """
    if n < 1:
        raise ExactArithmeticError(f"squarefree_part needs a positive integer, got {n}")
    limit = config.FACTOR_LIMIT if limit is None else limit
    s, f = 1, 1
    rest = n
    d = 2
    while d * d <= rest:
        if d > limit:
            root, exact = isqrt(rest)
            if exact:
                return s, f * root
            raise ExactArithmeticError(
                f"cannot factor {n}: cofactor {rest} needs trial divisors above {limit}"
            )
        e = 0
        while rest % d == 0:
            rest //= d
            e += 1
        if e:
            f *= d ** (e // 2)
            if e % 2:
                s *= d
        d += 1 if d == 2 else 2
    # rest is 1 or prime
    return s * rest, f


@functools.lru_cache(maxsize=256)
def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    return squarefree_part(n)[1] == 1


def is_rational_square(x: RationalLike) -> Optional[Fraction]:
    """Return the non-negative rational root of x when x is a rational square, else None."""
    x = Fraction(x)
    if x < 0:
        return None
    num, num_exact = isqrt(x.numerator)
    den, den_exact = isqrt(x.denominator)
    if num_exact and den_exact:
        return Fraction(num, den)
    return None


def format_rational(x: RationalLike) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: Union[str, int]) -> Fraction:
    """Parse "num/den" or "num"; the denominator must be positive."""
    if isinstance(text, bool):
        raise ExactArithmeticError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    s = str(text).strip()
    if not _RATIONAL_RE.match(s):
        raise ExactArithmeticError(f"not a rational of the form num/den: {text!r}")
    return Fraction(s)


def decimal_string(value: RationalLike, digits: int = 15, rounding: str = "nearest") -> str:
    """Render a rational with a fixed number of decimals.

    rounding is "floor", "ceil" or "nearest"; floor/ceil keep interval
    renderings outward.
    """
    scale = 10 ** digits
    scaled = Fraction(value) * scale
    if rounding == "floor":
        n = math.floor(scaled)
    elif rounding == "ceil":
        n = math.ceil(scaled)
    else:
        n = round(scaled)
    sign = "-" if n < 0 else ""
    whole, frac = divmod(abs(n), scale)
    if digits == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{digits}d}"


@dataclass(frozen=True)
class RationalInterval:
    low: Fraction
    high: Fraction

    def __post_init__(self):
        object.__setattr__(self, "low", Fraction(self.low))
        object.__setattr__(self, "high", Fraction(self.high))
        if self.low > self.high:
            raise ExactArithmeticError(f"empty interval [{self.low}, {self.high}]")

    @classmethod
    def point(cls, value: RationalLike) -> "RationalInterval":
        return cls(value, value)

    @property
    def width(self) -> Fraction:
        return self.high - self.low

    @property
    def midpoint(self) -> Fraction:
        return (self.low + self.high) / 2

    def contains(self, value: RationalLike) -> bool:
        return self.low <= Fraction(value) <= self.high

    def contains_interval(self, other: "RationalInterval") -> bool:
        return self.low <= other.low and other.high <= self.high

    def certainly_lt(self, other: Union["RationalInterval", RationalLike]) -> bool:
        other = _as_interval(other)
        return self.high < other.low

    def certainly_le(self, other: Union["RationalInterval", RationalLike]) -> bool:
        other = _as_interval(other)
        return self.high <= other.low

    def __add__(self, other):
        other = _as_interval(other)
        return RationalInterval(self.low + other.low, self.high + other.high)

    __radd__ = __add__

    def __neg__(self):
        return RationalInterval(-self.high, -self.low)

    def __sub__(self, other):
        other = _as_interval(other)
        return RationalInterval(self.low - other.high, self.high - other.low)

    def __rsub__(self, other):
        return _as_interval(other) - self

    def __mul__(self, other):
        other = _as_interval(other)
        products = (
            self.low * other.low,
            self.low * other.high,
            self.high * other.low,
            self.high * other.high,
        )
        return RationalInterval(min(products), max(products))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_interval(other)
        if other.low <= 0 <= other.high:
            raise ExactArithmeticError(f"division by interval containing zero: {other}")
        return self * RationalInterval(1 / other.high, 1 / other.low)

    def __rtruediv__(self, other):
        return _as_interval(other) / self

    def square(self) -> "RationalInterval":
        if self.low >= 0:
            return RationalInterval(self.low ** 2, self.high ** 2)
        if self.high <= 0:
            return RationalInterval(self.high ** 2, self.low ** 2)
        return RationalInterval(0, max(self.low ** 2, self.high ** 2))

    def sqrt(self, precision: Optional[RationalLike] = None) -> "RationalInterval":
        if self.low < 0:
            raise ExactArithmeticError(f"sqrt of interval with negative part: {self}")
        return RationalInterval(
            interval_sqrt(self.low, precision).low,
            interval_sqrt(self.high, precision).high,
        )

    def to_dict(self, digits: int = 15) -> Dict[str, str]:
        return {
            "low": format_rational(self.low),
            "high": format_rational(self.high),
            "low_decimal": decimal_string(self.low, digits, "floor"),
            "high_decimal": decimal_string(self.high, digits, "ceil"),
        }

    def __str__(self) -> str:
        return f"[{decimal_string(self.low, 12, 'floor')}, {decimal_string(self.high, 12, 'ceil')}]"


def _as_interval(value) -> RationalInterval:
    if isinstance(value, RationalInterval):
        return value
    if isinstance(value, (int, Fraction)):
        return RationalInterval.point(value)
    raise ExactArithmeticError(f"cannot use {value!r} in interval arithmetic")


def interval_sqrt(x: RationalLike, precision: Optional[RationalLike] = None) -> RationalInterval:
    """Certified enclosure of sqrt(x) of width at most ``precision``.

    Uses the integer square root of p*q*4**e for x = p/q, so the enclosure
    is [r, r + 1] / (q * 2**e); exact roots come back as a point interval.
    Finer precisions give nested intervals.
    """
    x = Fraction(x)
    if x < 0:
        raise ExactArithmeticError(f"interval_sqrt of negative number {x}")
    precision = config.SQRT_PRECISION if precision is None else Fraction(precision)
    if precision <= 0:
        raise ExactArithmeticError(f"precision must be positive, got {precision}")
    e = (precision.denominator // precision.numerator).bit_length()
    scale = 1 << e
    p, q = x.numerator, x.denominator
    root, exact = isqrt(p * q * scale * scale)
    den = q * scale
    if exact:
        return RationalInterval.point(Fraction(root, den))
    return RationalInterval(Fraction(root, den), Fraction(root + 1, den))


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class QuadraticNumber:
    """p + r*sqrt(q) with rational p, r and squarefree q.

    Canonical form: r == 0 forces q == 0, and q == 1 is folded into p, so
    equality of the fields is equality of the numbers.
    """

    p: Fraction
    r: Fraction = Fraction(0)
    q: int = 0

    def __post_init__(self):
        p, r, q = Fraction(self.p), Fraction(self.r), int(self.q)
        if q < 0:
            raise ExactArithmeticError(f"negative radicand {q}")
        if q > 1 and not is_squarefree(q):
            raise ExactArithmeticError(f"radicand {q} is not squarefree")
        if q == 1:
            p, r = p + r, Fraction(0)
        if q == 0 or r == 0:
            r, q = Fraction(0), 0
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "q", q)

    @property
    def is_rational(self) -> bool:
        return self.r == 0

    def _radicand_with(self, other: "QuadraticNumber") -> int:
        if self.r == 0:
            return other.q
        if other.r == 0 or other.q == self.q:
            return self.q
        raise ExactArithmeticError(f"mixed radicands {self.q} and {other.q}")

    def __add__(self, other):
        other = _as_quadratic(other)
        q = self._radicand_with(other)
        return QuadraticNumber(self.p + other.p, self.r + other.r, q)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.p, -self.r, self.q)

    def __sub__(self, other):
        return self + (-_as_quadratic(other))

    def __rsub__(self, other):
        return _as_quadratic(other) - self

    def __mul__(self, other):
        other = _as_quadratic(other)
        q = self._radicand_with(other)
        return QuadraticNumber(
            self.p * other.p + self.r * other.r * q,
            self.p * other.r + other.p * self.r,
            q,
        )

    __rmul__ = __mul__

    def square(self) -> "QuadraticNumber":
        return self * self

    def sign(self) -> int:
        sp, sr = _sign(self.p), _sign(self.r)
        if sr == 0:
            return sp
        if sp == 0 or sp == sr:
            return sr
        # opposite signs: compare p**2 with r**2 * q
        lhs, rhs = self.p * self.p, self.r * self.r * self.q
        if lhs > rhs:
            return sp
        return sr

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.r == 0 and self.p == other
        if isinstance(other, QuadraticNumber):
            return (self.p, self.r, self.q) == (other.p, other.r, other.q)
        return NotImplemented

    def __hash__(self):
        if self.r == 0:
            return hash(self.p)
        return hash((self.p, self.r, self.q))

    def to_interval(self, precision: Optional[RationalLike] = None) -> RationalInterval:
        if self.r == 0:
            return RationalInterval.point(self.p)
        return self.p + self.r * interval_sqrt(self.q, precision)

    def to_dict(self) -> Dict[str, object]:
        return {"p": format_rational(self.p), "r": format_rational(self.r), "q": self.q}

    @classmethod
    def from_dict(cls, data: Dict[str, object]) -> "QuadraticNumber":
        try:
            return cls(parse_rational(data["p"]), parse_rational(data["r"]), int(data["q"]))
        except (KeyError, TypeError) as e:
            raise ExactArithmeticError(f"bad quadratic number document {data!r}: {e}") from e

    def __str__(self) -> str:
        if self.r == 0:
            return format_rational(self.p)
        return f"{format_rational(self.p)} + {format_rational(self.r)}*sqrt({self.q})"


def _as_quadratic(value) -> QuadraticNumber:
    if isinstance(value, QuadraticNumber):
        return value
    if isinstance(value, (int, Fraction)):
        return QuadraticNumber(value)
    raise ExactArithmeticError(f"cannot use {value!r} as a quadratic number")
