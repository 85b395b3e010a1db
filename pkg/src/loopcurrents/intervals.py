"""Certified rational interval arithmetic.

Endpoints are exact Fractions and every operation except square root is
performed exactly on them, so an :class:`Interval` always encloses the true
value.  Square roots are the single source of width: they are enclosed by
dyadic bounds obtained from ``math.isqrt`` with directed rounding.

Intended use: evaluating closed forms that involve sqrt(1-x^2) at rational
x, and certifying strict inequalities (two enclosures that do not overlap
prove the comparison).  Enclosures are never used to assert equalities.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Callable, Sequence


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"inverted interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, value) -> "Interval":
        v = Fraction(value)
        return cls(v, v)

    # arithmetic -------------------------------------------------------------
    def __add__(self, other) -> "Interval":
        other = _as_interval(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other) -> "Interval":
        other = _as_interval(other)
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other) -> "Interval":
        return _as_interval(other) - self

    def __mul__(self, other) -> "Interval":
        other = _as_interval(other)
        if self.lo >= 0 and other.lo >= 0:
            return Interval(self.lo * other.lo, self.hi * other.hi)
        products = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return Interval(min(products), max(products))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Interval":
        other = _as_interval(other)
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("division by an interval containing 0")
        return self * Interval(1 / other.hi, 1 / other.lo)

    def __rtruediv__(self, other) -> "Interval":
        return _as_interval(other) / self

    def __pow__(self, n: int) -> "Interval":
        if n < 0:
            raise ValueError("negative interval power")
        if n == 0:
            return Interval.point(1)
        if self.lo >= 0:
            return Interval(self.lo ** n, self.hi ** n)
        if n % 2 == 1:
            return Interval(self.lo ** n, self.hi ** n)
        mags = (abs(self.lo), abs(self.hi))
        low = Fraction(0) if self.lo <= 0 <= self.hi else min(mags) ** n
        return Interval(low, max(mags) ** n)

    # queries ----------------------------------------------------------------
    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def strictly_above(self, other: "Interval") -> bool:
        """Certified: every value in self exceeds every value in other."""
        return self.lo > other.hi

    def __contains__(self, value) -> bool:
        v = Fraction(value)
        return self.lo <= v <= self.hi


def _as_interval(value) -> Interval:
    if isinstance(value, Interval):
        return value
    return Interval.point(value)


def sqrt_interval(value: Fraction | Interval, bits: int = 128) -> Interval:
    """Enclosure of the square root with dyadic endpoints, width <= 2^-bits."""
    iv = _as_interval(value)
    if iv.lo < 0:
        raise ValueError("square root of a negative interval")
    return Interval(_sqrt_lower(iv.lo, bits), _sqrt_upper(iv.hi, bits))


def _round_down(v: Fraction, bits: int) -> Fraction:
    """Largest dyadic with ~bits significant bits that is <= v."""
    if v == 0:
        return v
    n, d = v.numerator, v.denominator
    shift = bits - (n.bit_length() - d.bit_length())
    if shift >= 0:
        return Fraction((n << shift) // d, 1 << shift)
    m = n // (d << -shift)
    return Fraction(m << -shift)


def _round_up(v: Fraction, bits: int) -> Fraction:
    return -_round_down(-v, bits)


@dataclass(frozen=True)
class RoundedInterval:
    """Interval with outward directed rounding after every operation.

    Keeps endpoint sizes near ``bits`` significant bits, so high powers
    (x^4600, p^4000) stay cheap while the enclosure property is preserved:
    the lower endpoint only ever moves down, the upper only up.
    """

    lo: Fraction
    hi: Fraction
    bits: int

    @classmethod
    def point(cls, value, bits: int) -> "RoundedInterval":
        v = Fraction(value)
        return cls(v, v, bits)

    @classmethod
    def from_interval(cls, iv: Interval, bits: int) -> "RoundedInterval":
        return cls(iv.lo, iv.hi, bits)

    def as_interval(self) -> Interval:
        return Interval(self.lo, self.hi)

    def _wrap(self, lo: Fraction, hi: Fraction) -> "RoundedInterval":
        return RoundedInterval(_round_down(lo, self.bits), _round_up(hi, self.bits), self.bits)

    def _coerce(self, other) -> "RoundedInterval":
        if isinstance(other, RoundedInterval):
            return other
        if isinstance(other, Interval):
            return RoundedInterval(other.lo, other.hi, self.bits)
        return RoundedInterval.point(other, self.bits)

    def __add__(self, other) -> "RoundedInterval":
        other = self._coerce(other)
        return self._wrap(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self) -> "RoundedInterval":
        return RoundedInterval(-self.hi, -self.lo, self.bits)

    def __sub__(self, other) -> "RoundedInterval":
        other = self._coerce(other)
        return self._wrap(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other) -> "RoundedInterval":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RoundedInterval":
        other = self._coerce(other)
        if self.lo >= 0 and other.lo >= 0:
            return self._wrap(self.lo * other.lo, self.hi * other.hi)
        products = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return self._wrap(min(products), max(products))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RoundedInterval":
        other = self._coerce(other)
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("division by an interval containing 0")
        inv = RoundedInterval(
            _round_down(1 / other.hi, self.bits), _round_up(1 / other.lo, self.bits), self.bits
        )
        return self * inv

    def __rtruediv__(self, other) -> "RoundedInterval":
        return self._coerce(other) / self

    def __pow__(self, n: int) -> "RoundedInterval":
        # square-and-multiply with per-step rounding; inclusion-monotone,
        # so the result still encloses the true power
        if n < 0:
            raise ValueError("negative interval power")
        result = RoundedInterval.point(1, self.bits)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def strictly_above(self, other) -> bool:
        return self.lo > other.hi


def _sqrt_lower(v: Fraction, bits: int) -> Fraction:
    if v == 0:
        return Fraction(0)
    n, d = v.numerator, v.denominator
    # sqrt(n/d) = sqrt(n*d)/d; floor(2^bits * sqrt(n*d)) / (2^bits * d)
    root = isqrt((n * d) << (2 * bits))
    return Fraction(root, d << bits)

def _sqrt_upper(v: Fraction, bits: int) -> Fraction:
    if v == 0:
        return Fraction(0)
    n, d = v.numerator, v.denominator
    scaled = (n * d) << (2 * bits)
    root = isqrt(scaled)
    if root * root < scaled:
        root += 1
    return Fraction(root, d << bits)


# ---------------------------------------------------------------------------
# Certified monotonicity-violation search


def certify_decreasing_pair(
    f: Callable[[Fraction, int], Interval],
    grid: Sequence[Fraction],
    start_bits: int = 128,
    max_bits: int = 4096,
) -> tuple[Fraction, Fraction, Interval, Interval] | None:
    """Find x1 < x2 on the grid with f(x1) > f(x2), certified by enclosures.

    ``f(x, bits)`` must return an enclosure of the target function whose
    width shrinks as ``bits`` grows.  Candidate pairs are located with the
    midpoints of coarse enclosures; each candidate is then refined until the
    two enclosures are disjoint, which proves the strict inequality.  A
    ``None`` result is not a monotonicity proof.
    """
    enclosures = [f(x, start_bits) for x in grid]
    mids = [iv.midpoint for iv in enclosures]
    best_idx = 0
    for j in range(1, len(grid)):
        if mids[j] > mids[best_idx]:
            best_idx = j
            continue
        if mids[j] < mids[best_idx]:
            certified = _refine_until_disjoint(
                f, grid[best_idx], grid[j], enclosures[best_idx], enclosures[j], start_bits, max_bits
            )
            if certified is not None:
                return grid[best_idx], grid[j], certified[0], certified[1]
    return None


def _refine_until_disjoint(f, x1, x2, iv1, iv2, bits, max_bits):
    while True:
        if iv1.strictly_above(iv2):
            return iv1, iv2
        if bits >= max_bits:
            return None
        bits *= 2
        iv1 = f(x1, bits)
        iv2 = f(x2, bits)
