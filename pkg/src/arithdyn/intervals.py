"""Certified real enclosures for logarithmic heights.

Every height in the package is a :class:`HeightInterval` whose endpoints are
exact dyadic rationals (``fractions.Fraction`` with a power-of-two
denominator).  Logarithms of integers are bracketed with pure integer
arithmetic, so containment never depends on the floating point environment.

Units are nats throughout.
"""

from __future__ import annotations

import decimal
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from .errors import DegenerateInputError

DEFAULT_PRECISION = 53

_ZERO = Fraction(0)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact endpoint")


def floor_dyadic(x: Fraction, bits: int) -> Fraction:
    """Largest multiple of 2**-bits that is <= x."""
    return Fraction((x.numerator << bits) // x.denominator, 1 << bits)


def ceil_dyadic(x: Fraction, bits: int) -> Fraction:
    return Fraction(-((-x.numerator << bits) // x.denominator), 1 << bits)


def _is_dyadic(x: Fraction) -> bool:
    den = x.denominator
    return den & (den - 1) == 0


@dataclass(frozen=True)
class HeightInterval:
    """Closed interval ``[lo, hi]`` known to contain a real height value."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = _as_fraction(self.lo), _as_fraction(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def exact(cls, value) -> "HeightInterval":
        v = _as_fraction(value)
        return cls(v, v)

    @classmethod
    def zero(cls) -> "HeightInterval":
        return cls(_ZERO, _ZERO)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def is_exact_zero(self) -> bool:
        return self.lo == 0 and self.hi == 0

    def contains(self, x) -> bool:
        x = _as_fraction(x)
        return self.lo <= x <= self.hi

    def contains_real(self, lo_bound, hi_bound) -> bool:
        """True if ``[lo_bound, hi_bound]`` (an enclosure of some real) lies inside."""
        return self.lo <= lo_bound and hi_bound <= self.hi

    def subset_of(self, other: "HeightInterval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def overlaps(self, other: "HeightInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __add__(self, other):
        if not isinstance(other, HeightInterval):
            other = HeightInterval.exact(other)
        return HeightInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return HeightInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        if not isinstance(other, HeightInterval):
            other = HeightInterval.exact(other)
        return HeightInterval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other):
        return HeightInterval.exact(other) - self

    def scale(self, q, bits: int | None = None) -> "HeightInterval":
        """Multiply by the exact rational ``q``.

        With ``bits`` given, non-dyadic endpoints are rounded outward to the
        grid ``2**-bits``.
        """
        q = _as_fraction(q)
        a, b = self.lo * q, self.hi * q
        lo, hi = (a, b) if a <= b else (b, a)
        if bits is not None:
            if not _is_dyadic(lo):
                lo = floor_dyadic(lo, bits)
            if not _is_dyadic(hi):
                hi = ceil_dyadic(hi, bits)
        return HeightInterval(lo, hi)

    def abs(self) -> "HeightInterval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return HeightInterval(_ZERO, max(-self.lo, self.hi))

    def abs_diff(self, other: "HeightInterval") -> "HeightInterval":
        return (self - other).abs()

    def max(self, other: "HeightInterval") -> "HeightInterval":
        return HeightInterval(max(self.lo, other.lo), max(self.hi, other.hi))

    def clamp_below(self, floor_value) -> "HeightInterval":
        """Intersect with ``[floor_value, +inf)``; used for quantities known to be >= floor_value."""
        f = _as_fraction(floor_value)
        if self.hi < f:
            raise ValueError(f"interval {self} lies entirely below {f}")
        return HeightInterval(max(self.lo, f), self.hi)

    def rounded(self, bits: int) -> "HeightInterval":
        """Outward rounding of both endpoints to the dyadic grid ``2**-bits``."""
        return HeightInterval(floor_dyadic(self.lo, bits), ceil_dyadic(self.hi, bits))

    def to_json(self, digits: int = 25) -> list[str]:
        return [decimal_string(self.lo, digits, "floor"), decimal_string(self.hi, digits, "ceiling")]

    @classmethod
    def from_json(cls, pair) -> "HeightInterval":
        lo, hi = pair
        return cls(Fraction(lo), Fraction(hi))

    def __float__(self):
        return float(self.mid)

    def __repr__(self):
        lo, hi = self.to_json(17)
        return f"HeightInterval[{lo}, {hi}]"


def decimal_string(x: Fraction, digits: int = 25, direction: str = "floor") -> str:
    """Decimal rendering of ``x`` rounded toward -inf (``floor``) or +inf (``ceiling``)."""
    rounding = decimal.ROUND_FLOOR if direction == "floor" else decimal.ROUND_CEILING
    ctx = decimal.Context(prec=digits, rounding=rounding)
    if x == 0:
        return "0"
    value = ctx.divide(decimal.Decimal(x.numerator), decimal.Decimal(x.denominator))
    return format(value, "f") if abs(value.adjusted()) < digits else str(value)


# ---------------------------------------------------------------------------
# logarithms with integer arithmetic
# ---------------------------------------------------------------------------


def _atanh_fixed(a: int, b: int, prec: int) -> tuple[int, int]:
    """Integers lo, hi with lo <= atanh(a/b) * 2**prec <= hi, for 0 <= a/b <= 1/3."""
    if a == 0:
        return 0, 0
    a2, b2 = a * a, b * b
    p_lo = (a << prec) // b
    p_hi = -((-a << prec) // b)
    s_lo = s_hi = 0
    k = 1
    while p_hi > 1:
        s_lo += p_lo // k
        s_hi += -(-p_hi // k)
        p_lo = p_lo * a2 // b2
        p_hi = -(-(p_hi * a2) // b2)
        k += 2
    # tail: sum_{j>=0} z^(k+2j)/(k+2j) <= z^k / (1 - z^2) <= (9/8) z^k
    s_hi += -(-(p_hi * 9) // 8)
    return s_lo, s_hi


@lru_cache(maxsize=64)
def _ln2_fixed(prec: int) -> tuple[int, int]:
    lo, hi = _atanh_fixed(1, 3, prec)
    return 2 * lo, 2 * hi


def _log_small_fixed(m: int, prec: int) -> tuple[int, int]:
    """Bounds on log(m) * 2**prec for m >= 1, via log m = k log 2 + 2 atanh(z)."""
    if m == 1:
        return 0, 0
    k = m.bit_length() - 1
    base = 1 << k
    z_lo, z_hi = _atanh_fixed(m - base, m + base, prec)
    l2_lo, l2_hi = _ln2_fixed(prec)
    return k * l2_lo + 2 * z_lo, k * l2_hi + 2 * z_hi


def log_fixed(n: int, prec: int) -> tuple[int, int]:
    """Integers lo, hi with lo <= log(n) * 2**prec <= hi."""
    if n <= 0:
        raise DegenerateInputError(f"log of non-positive integer {n}")
    keep = prec + 8
    shift = n.bit_length() - keep
    if shift <= 0:
        return _log_small_fixed(n, prec)
    top = n >> shift
    lo, _ = _log_small_fixed(top, prec)
    _, hi = _log_small_fixed(top + 1, prec)
    l2_lo, l2_hi = _ln2_fixed(prec)
    return lo + shift * l2_lo, hi + shift * l2_hi


def log_enclosure(n: int, precision_bits: int = DEFAULT_PRECISION) -> HeightInterval:
    """Enclosure of ``log(n)`` as one cell of the dyadic grid ``2**-precision_bits``.

    The result is the unique cell ``[c, c + 1] * 2**-precision_bits`` that
    contains ``log(n)`` (``log n`` is irrational for ``n >= 2``, so the cell is
    well defined).  Cells at higher precision are sub-cells, which makes the
    enclosures nest as the precision grows.
    """
    if not isinstance(n, int) or isinstance(n, bool):
        raise TypeError("log_enclosure expects an int")
    if n <= 0:
        raise DegenerateInputError(f"log of non-positive integer {n}")
    if precision_bits < 1:
        raise ValueError("precision_bits must be positive")
    if n == 1:
        return HeightInterval.zero()
    q = precision_bits
    work = q + n.bit_length().bit_length() + 12
    while True:
        lo, hi = log_fixed(n, work)
        drop = work - q
        cell = lo >> drop
        if hi <= (cell + 1) << drop:
            return HeightInterval(Fraction(cell, 1 << q), Fraction(cell + 1, 1 << q))
        work += 32


def log_rational_enclosure(x, precision_bits: int = DEFAULT_PRECISION) -> HeightInterval:
    """Enclosure of ``log(x)`` for a positive rational ``x``."""
    x = _as_fraction(x)
    if x <= 0:
        raise DegenerateInputError(f"log of non-positive rational {x}")
    num = log_enclosure(x.numerator, precision_bits)
    if x.denominator == 1:
        return num
    return num - log_enclosure(x.denominator, precision_bits)


def interval_combine(a: HeightInterval, b: HeightInterval | None, mode: str, q=None,
                     bits: int | None = None) -> HeightInterval:
    """Apply ``mode`` in {add, sub, scale, abs_diff, max} with outward rounding."""
    if mode == "add":
        return a + b
    if mode == "sub":
        return a - b
    if mode == "scale":
        if q is None:
            raise ValueError("scale needs a rational factor q")
        return a.scale(q, bits=bits if bits is not None else DEFAULT_PRECISION + 8)
    if mode == "abs_diff":
        return a.abs_diff(b)
    if mode == "max":
        return a.max(b)
    raise ValueError(f"unknown interval mode {mode!r}")
