"""Dyadic ball arithmetic.

A ball is ``mantissa * 2**-scale`` with a radius counted in the same units.
Every operation returns a ball that contains the exact result of applying it
to any pair of points of the inputs, so floors taken from a ball whose ends
share the same integer part are certified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InsufficientPrecision, PrecisionExhausted, StraddlesInteger

DEFAULT_PRECISION = 256
MAX_PRECISION = 8192


@dataclass(frozen=True, slots=True)
class DyadicBall:
    mantissa: int
    scale: int = 0
    radius: int = 0

    def __post_init__(self):
        if self.scale < 0 or self.radius < 0:
            raise ValueError("scale and radius must be non-negative")

    # construction -----------------------------------------------------

    @classmethod
    def exact(cls, value) -> "DyadicBall":
        """Exact ball for an int, a dyadic Fraction or a float."""
        if isinstance(value, int):
            return cls(value)
        q = Fraction(value)
        den = q.denominator
        if den & (den - 1):
            raise ValueError(f"{value!r} is not a dyadic rational")
        return cls(q.numerator, den.bit_length() - 1)

    @classmethod
    def from_fraction(cls, value, prec: int = DEFAULT_PRECISION) -> "DyadicBall":
        q = Fraction(value)
        den = q.denominator
        if not den & (den - 1):
            return cls(q.numerator, den.bit_length() - 1)
        num = q.numerator << prec
        m, rem = divmod(num, den)
        if 2 * rem >= den:
            m += 1
        return cls(m, prec, 1)

    # views ------------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.radius == 0

    def lower(self) -> Fraction:
        return Fraction(self.mantissa - self.radius, 1 << self.scale)

    def upper(self) -> Fraction:
        return Fraction(self.mantissa + self.radius, 1 << self.scale)

    def center(self) -> Fraction:
        return Fraction(self.mantissa, 1 << self.scale)

    def width(self) -> Fraction:
        return Fraction(2 * self.radius, 1 << self.scale)

    def contains(self, value) -> bool:
        v = Fraction(value)
        return self.lower() <= v <= self.upper()

    def intersects(self, other: "DyadicBall") -> bool:
        return self.lower() <= other.upper() and other.lower() <= self.upper()

    # arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, DyadicBall):
            other = DyadicBall.exact(other)
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return DyadicBall(-self.mantissa, self.scale, self.radius)

    def __sub__(self, other):
        if not isinstance(other, DyadicBall):
            other = DyadicBall.exact(other)
        return add(self, -other)

    def __mul__(self, other):
        if not isinstance(other, DyadicBall):
            other = DyadicBall.exact(other)
        return mul(self, other)

    __rmul__ = __mul__

    def __repr__(self):
        return f"DyadicBall({float(self.center())!r} ± 2^{self.radius.bit_length() - self.scale})"


def add(a: DyadicBall, b: DyadicBall) -> DyadicBall:
    if a.scale < b.scale:
        a, b = b, a
    shift = a.scale - b.scale
    return DyadicBall(a.mantissa + (b.mantissa << shift), a.scale, a.radius + (b.radius << shift))


def round_to(a: DyadicBall, prec: int) -> DyadicBall:
    """Drop fractional bits beyond ``prec``; the radius grows by one ulp if bits were lost."""
    shift = a.scale - prec
    if shift <= 0:
        return a
    m = a.mantissa >> shift
    lost = a.mantissa - (m << shift)
    r = -((-a.radius) >> shift)  # ceil
    if lost:
        r += 1
    return DyadicBall(m, prec, r)


def mul(a: DyadicBall, b: DyadicBall, prec: int | None = None) -> DyadicBall:
    r = abs(a.mantissa) * b.radius + abs(b.mantissa) * a.radius + a.radius * b.radius
    out = DyadicBall(a.mantissa * b.mantissa, a.scale + b.scale, r)
    if prec is not None:
        out = round_to(out, prec)
    return out


def floor_certified(a: DyadicBall) -> int:
    lo = (a.mantissa - a.radius) >> a.scale
    hi = (a.mantissa + a.radius) >> a.scale
    if lo != hi:
        raise StraddlesInteger(f"ball [{float(a.lower())}, {float(a.upper())}] contains an integer")
    return lo


def frac_certified(a: DyadicBall) -> DyadicBall:
    fl = floor_certified(a)
    return DyadicBall(a.mantissa - (fl << a.scale), a.scale, a.radius)


def to_float64(a: DyadicBall) -> float:
    if (a.radius << 60) > (1 << a.scale):
        raise InsufficientPrecision(f"radius 2^{a.radius.bit_length() - a.scale} exceeds 2^-60")
    return a.mantissa / (1 << a.scale)


# named constants --------------------------------------------------------


@lru_cache(maxsize=512)
def sqrt_int(k: int, prec: int = DEFAULT_PRECISION) -> DyadicBall:
    if k < 0:
        raise ValueError("sqrt of a negative integer")
    root = math.isqrt(k)
    if root * root == k:
        return DyadicBall(root)
    return DyadicBall(math.isqrt(k << (2 * prec)), prec, 1)


def _atan_inv(x: int, bits: int) -> int:
    # fixed-point atan(1/x) * 2^bits, truncation error <= number of terms
    one = 1 << bits
    x2 = x * x
    term = one // x
    total = term
    k = 1
    while term:
        term //= x2
        t = term // (2 * k + 1)
        total += -t if k & 1 else t
        k += 1
    return total


@lru_cache(maxsize=64)
def pi_ball(prec: int = DEFAULT_PRECISION) -> DyadicBall:
    guard = 32
    bits = prec + guard
    m = 16 * _atan_inv(5, bits) - 4 * _atan_inv(239, bits)
    return DyadicBall((m + (1 << (guard - 1))) >> guard, prec, 1)


def precision_ladder(start: int = DEFAULT_PRECISION, cap: int = MAX_PRECISION):
    """Working precisions tried in order: start, 2*start, ... up to cap."""
    p = max(int(start), 1)
    while p < cap:
        yield p
        p *= 2
    yield cap


def with_ladder(fn, start: int = DEFAULT_PRECISION, cap: int = MAX_PRECISION):
    """Call ``fn(prec)`` with doubling precision until it stops raising StraddlesInteger."""
    last = None
    for prec in precision_ladder(start, cap):
        try:
            return fn(prec)
        except StraddlesInteger as exc:
            last = exc
    raise PrecisionExhausted(f"undecided at {cap} bits: {last}", node=getattr(last, "node", None)) from last
