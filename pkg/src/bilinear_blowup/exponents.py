"""Exact arithmetic for critical symbol-class orders and exponent regions.

Everything in this module is pure `fractions.Fraction` arithmetic; region
classification must be decided exactly on boundaries, so floating point is
banned here.  Exponents use the reciprocal convention throughout: an
exponent p in (0, inf] is stored as 1/p >= 0, with 1/p = 0 meaning
p = infinity.

Two region families are supported.  Family "J" decomposes the quarter
plane [0, inf)^2 of reciprocal pairs into five regions whose critical
order is the piecewise-affine function

    -n * max(1/2, x, y, 1 - x - y, x + y - 1/2),

and family "I" decomposes the unit square [0, 1]^2 into four regions with
the duality term 1 - x - y dropped:

    -n * max(1/2, x, y, x + y - 1/2).

Each max term corresponds to exactly one region; a point lies in the
region whose term attains the max, and on a boundary several terms tie
(all the affine formulas agree there).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

HALF = Fraction(1, 2)
ONE = Fraction(1)

#: Valid region families.  "J" covers [0, inf)^2; "I" is restricted to [0, 1]^2.
FAMILIES = ("J", "I")

RationalLike = Fraction | int | str


class ExponentDomainError(ValueError):
    """A reciprocal pair lies outside the domain of the requested family."""


def as_fraction(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions and "num/den" strings to an exact Fraction."""
    if isinstance(value, float):
        raise TypeError(f"refusing inexact float {value!r}; pass a Fraction")
    return Fraction(value)


def as_point(point) -> tuple[Fraction, Fraction]:
    x, y = point
    x, y = as_fraction(x), as_fraction(y)
    if x < 0 or y < 0:
        raise ExponentDomainError(f"reciprocal pair must be nonnegative, got {point}")
    return x, y


def inv_exponent(value) -> Fraction:
    """Reciprocal of an exponent given as 2, "4/3", "inf", Fraction, ...

    Returns 1/p as an exact Fraction, with inf mapped to 0.
    """
    if isinstance(value, str) and value.strip().lower() in ("inf", "infinity", "oo"):
        return Fraction(0)
    p = as_fraction(value)
    if p <= 0:
        raise ExponentDomainError(f"exponent must be positive, got {value}")
    return 1 / p


@dataclass(frozen=True)
class ExponentTriple:
    """Reciprocal triple (1/p1, 1/p2, 1/p), all nonnegative, 0 = infinity."""

    inv_p1: Fraction
    inv_p2: Fraction
    inv_p: Fraction

    def __post_init__(self):
        for name in ("inv_p1", "inv_p2", "inv_p"):
            v = getattr(self, name)
            if not isinstance(v, Fraction):
                object.__setattr__(self, name, as_fraction(v))
            if getattr(self, name) < 0:
                raise ExponentDomainError(f"{name} must be >= 0, got {v}")

    @classmethod
    def from_exponents(cls, p1, p2, p) -> "ExponentTriple":
        return cls(inv_exponent(p1), inv_exponent(p2), inv_exponent(p))

    @property
    def point(self) -> tuple[Fraction, Fraction]:
        return (self.inv_p1, self.inv_p2)

    @property
    def holder_gap(self) -> Fraction:
        """1/p - 1/p1 - 1/p2; zero exactly on the Hoelder relation."""
        return self.inv_p - self.inv_p1 - self.inv_p2

    def __str__(self):
        return f"(1/p1={self.inv_p1}, 1/p2={self.inv_p2}, 1/p={self.inv_p})"


@dataclass(frozen=True)
class Region:
    """A region tag: family "J" (indices 0..4) or "I" (indices 1..4).

    ``on_boundary`` is set when at least two max terms tie at the queried
    point; the reported index is then the smallest among the tied regions
    and every tied region's formula agrees there.
    """

    family: str
    index: int
    on_boundary: bool

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        lo = 0 if self.family == "J" else 1
        if not lo <= self.index <= 4:
            raise ValueError(f"index {self.index} invalid for family {self.family}")

    def __str__(self):
        star = "*" if self.on_boundary else ""
        return f"{self.family}{self.index}{star}"


def order_terms(point, family: str = "J") -> list[tuple[int, Fraction]]:
    """The (region index, affine term) pairs entering the max formula."""
    x, y = as_point(point)
    if family == "J":
        return [(0, ONE - x - y), (1, HALF), (2, y), (3, x), (4, x + y - HALF)]
    if family == "I":
        return [(1, HALF), (2, y), (3, x), (4, x + y - HALF)]
    raise ValueError(f"unknown family {family!r}")


def base_order(point, n: int = 1, family: str = "J") -> Fraction:
    """Critical order of the symbol class at full roughness (rho = 0).

    Family "J" evaluates -n * max(1/2, x, y, 1-x-y, x+y-1/2); family "I"
    omits the 1-x-y term.  Exact on all nonnegative rational pairs.
    """
    if n < 1:
        raise ValueError("dimension n must be a positive integer")
    return -n * max(t for _, t in order_terms(point, family))


def critical_order(point, n: int, rho: RationalLike, family: str = "J") -> Fraction:
    """(1 - rho) * base_order(point, n, family), for rho in [0, 1)."""
    rho = as_fraction(rho)
    if not 0 <= rho < 1:
        raise ExponentDomainError(f"rho must lie in [0, 1), got {rho}")
    return (1 - rho) * base_order(point, n, family)


def classify_region(point, family: str = "J") -> Region:
    """Locate a reciprocal pair in its region family.

    Family "I" queries must lie in the unit square.  Ties at region
    boundaries report the smallest index and set ``on_boundary``.
    """
    x, y = as_point(point)
    if family == "I" and not (x <= 1 and y <= 1):
        raise ExponentDomainError(f"family I is defined on [0,1]^2 only, got {point}")
    terms = order_terms((x, y), family)
    top = max(t for _, t in terms)
    winners = [i for i, t in terms if t == top]
    return Region(family, min(winners), on_boundary=len(winners) > 1)


def region_order(region: Region, point, n: int = 1) -> Fraction:
    """The piecewise formula of a region, evaluated exactly at the point.

    Used to cross-check that the per-region affine expressions agree with
    the max formula.
    """
    x, y = as_point(point)
    if region.family == "J":
        formulas = {
            0: n * x + n * y - n,
            1: Fraction(-n, 2),
            2: -n * y,
            3: -n * x,
            4: Fraction(n, 2) - n * x - n * y,
        }
    else:
        formulas = {
            1: Fraction(-n, 2),
            2: -n * y,
            3: -n * x,
            4: Fraction(n, 2) - n * x - n * y,
        }
    return formulas[region.index]


def rational_grid(limit: Fraction, count: int) -> list[Fraction]:
    """count exact rationals equally spaced over [0, limit]."""
    limit = as_fraction(limit)
    if count < 2:
        raise ValueError("grid needs at least two points")
    return [limit * k / (count - 1) for k in range(count)]


def grid_points(limit, count) -> Iterable[tuple[Fraction, Fraction]]:
    axis = rational_grid(limit, count)
    for x in axis:
        for y in axis:
            yield (x, y)
