"""Rational points of projective space in canonical integer coordinates."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import product
from math import gcd, lcm
from typing import Iterator, Sequence

from .errors import DegenerateInputError
from .intervals import DEFAULT_PRECISION, HeightInterval, log_enclosure


def primitive(coords: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by its content and make the first nonzero entry positive."""
    g = reduce(gcd, coords, 0)
    if g == 0:
        raise DegenerateInputError("all coordinates are zero")
    for c in coords:
        if c:
            if c < 0:
                g = -g
            break
    return tuple(c // g for c in coords)


@dataclass(frozen=True, order=True)
class ProjPoint:
    """A point ``[x_0 : ... : x_N]`` of P^N(Q).

    ``coords`` is always the primitive integer representative whose first
    nonzero coordinate is positive, so equality and hashing are projective.
    """

    coords: tuple[int, ...]

    def __post_init__(self):
        coords = tuple(int(c) for c in self.coords)
        if len(coords) < 2:
            raise DegenerateInputError("a projective point needs at least two coordinates")
        object.__setattr__(self, "coords", primitive(coords))

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    @property
    def naive_height(self) -> int:
        """H(P) = max |x_i| of the primitive representative."""
        return max(abs(c) for c in self.coords)

    def weil_height(self, precision_bits: int = DEFAULT_PRECISION) -> HeightInterval:
        return log_enclosure(self.naive_height, precision_bits)

    def to_json(self) -> list[int]:
        return list(self.coords)

    def __str__(self):
        return ":".join(str(c) for c in self.coords)

    def __repr__(self):
        return f"ProjPoint[{' : '.join(str(c) for c in self.coords)}]"

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]


def normalize(raw: Sequence) -> ProjPoint:
    """Canonical point from a list of rationals (ints, Fractions or strings like '2/3')."""
    fr = [Fraction(x) for x in raw]
    if not any(fr):
        raise DegenerateInputError("all-zero point is not in projective space")
    den = reduce(lcm, (f.denominator for f in fr), 1)
    return ProjPoint(tuple(int(f * den) for f in fr))


def parse_point(text: str) -> ProjPoint:
    """Parse the colon syntax ``"x0:x1:...:xN"``; entries may be rationals."""
    parts = [p.strip() for p in text.strip().strip("[]").split(":")]
    if len(parts) < 2 or any(p == "" for p in parts):
        raise DegenerateInputError(f"cannot parse point {text!r}")
    try:
        return normalize(parts)
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, DegenerateInputError):
            raise
        raise DegenerateInputError(f"cannot parse point {text!r}") from exc


def weil_height(P: ProjPoint, precision_bits: int = DEFAULT_PRECISION) -> HeightInterval:
    """Enclosure of h(P) = log max |x_i|."""
    return P.weil_height(precision_bits)


def _tails(length: int, B: int) -> Iterator[tuple[int, ...]]:
    return product(range(-B, B + 1), repeat=length)


def iter_points(N: int, B: int) -> Iterator[ProjPoint]:
    """Yield every point of P^N(Q) with H(P) <= B, lexicographically by coordinates."""
    if B < 1 or N < 1:
        return

    def rec(prefix_zeros: int) -> Iterator[tuple[int, ...]]:
        n_rest = N - prefix_zeros  # coordinates after the leading one
        zeros = (0,) * prefix_zeros
        if n_rest >= 1:
            yield from rec(prefix_zeros + 1)
        for lead in range(1, B + 1):
            for tail in _tails(n_rest, B):
                if reduce(gcd, tail, lead) == 1:
                    yield zeros + (lead,) + tail

    for coords in rec(0):
        P = object.__new__(ProjPoint)
        object.__setattr__(P, "coords", coords)
        yield P


def enumerate_points(N: int, B: int) -> list[ProjPoint]:
    """All normalized points with max |coordinate| <= B, each exactly once.

    Order is lexicographic on the signed coordinate tuple, so
    ``enumerate_points(1, 1)`` is ``[0:1], [1:-1], [1:0], [1:1]``.
    """
    if N < 1:
        raise DegenerateInputError("N must be at least 1")
    return list(iter_points(N, B))


def count_points(N: int, B: int) -> int:
    return sum(1 for _ in iter_points(N, B))
