"""Degree-d self-maps of P^N with integer coefficients.

A map is stored as its point in Rat_d^N: an ``(N+1) x K`` integer matrix
``coeffs`` with ``coeffs[i][k]`` the coefficient of the k-th monomial (in
:func:`~arithdyn.polynomials.monomials` order) of the i-th coordinate
polynomial.  The matrix is primitive with a positive first nonzero entry.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import reduce
from math import lcm
from pathlib import Path
from typing import Mapping, Sequence

from .errors import BaseLocusError, DegenerateInputError
from .intervals import DEFAULT_PRECISION, HeightInterval, log_enclosure
from .points import ProjPoint, primitive
from .polynomials import (
    coefficient_vector,
    eval_monomials,
    format_polynomial,
    from_coefficients,
    monomials,
    num_monomials,
    parse_polynomial,
)

VERIFIED = "verified"
UNVERIFIED = "unverified"
NOT_MORPHISM = "not_morphism"


@dataclass(frozen=True)
class Morphism:
    N: int
    d: int
    coeffs: tuple[tuple[int, ...], ...]
    status: str = field(default=UNVERIFIED, compare=False)

    def __post_init__(self):
        if self.N < 1 or self.d < 1:
            raise DegenerateInputError("need N >= 1 and d >= 1")
        rows = tuple(tuple(int(c) for c in r) for r in self.coeffs)
        K = num_monomials(self.N, self.d)
        if len(rows) != self.N + 1 or any(len(r) != K for r in rows):
            raise DegenerateInputError(
                f"coefficient table must be {self.N + 1} x {K} for N={self.N}, d={self.d}"
            )
        flat = primitive([c for r in rows for c in r])
        object.__setattr__(
            self, "coeffs", tuple(flat[i * K:(i + 1) * K] for i in range(self.N + 1))
        )

    @property
    def K(self) -> int:
        return num_monomials(self.N, self.d)

    @property
    def flat(self) -> tuple[int, ...]:
        return tuple(c for r in self.coeffs for c in r)

    @property
    def max_coeff(self) -> int:
        return max(abs(c) for c in self.flat)

    def polynomials(self) -> list[dict]:
        return [from_coefficients(r, self.N, self.d) for r in self.coeffs]

    def is_power_map(self) -> bool:
        return self == power_map(self.N, self.d)

    def with_status(self, status: str) -> "Morphism":
        return replace(self, status=status)

    def raw(self, x: Sequence[int]) -> tuple[int, ...]:
        """Coordinate polynomials evaluated at the integer vector ``x`` (no normalization)."""
        mono = eval_monomials(self.N, self.d, x)
        return tuple(sum(a * m for a, m in zip(row, mono) if a) for row in self.coeffs)

    def __call__(self, P: ProjPoint) -> ProjPoint:
        return evaluate(self, P)[0]

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "d": self.d,
            "coords": [format_polynomial(p, self.N) for p in self.polynomials()],
        }

    def __str__(self):
        return "[" + " : ".join(self.to_json()["coords"]) + "]"

    def __repr__(self):
        return f"Morphism(N={self.N}, d={self.d}, {self})"


def construct(N: int, d: int, coords: Sequence) -> Morphism:
    """Build a normalized map from per-coordinate text, sparse dicts, or coefficient rows.

    Rational coefficients are cleared to integers before normalization.
    """
    if len(coords) != N + 1:
        raise DegenerateInputError(f"expected {N + 1} coordinate polynomials, got {len(coords)}")
    rows = []
    for entry in coords:
        if isinstance(entry, str):
            poly = parse_polynomial(entry, N)
        elif isinstance(entry, Mapping):
            poly = {tuple(e): c for e, c in entry.items() if c}
        else:
            vals = list(entry)
            if len(vals) != num_monomials(N, d):
                raise DegenerateInputError("coefficient row has the wrong length")
            rows.append([Fraction(v) for v in vals])
            continue
        degrees = {sum(e) for e in poly}
        if len(degrees) > 1:
            raise DegenerateInputError(f"inhomogeneous polynomial {entry!r}")
        if degrees and degrees != {d}:
            raise DegenerateInputError(
                f"degree mismatch: {entry!r} has degree {degrees.pop()}, expected {d}"
            )
        rows.append([Fraction(c) for c in coefficient_vector(poly, N, d)])
    if not any(c for r in rows for c in r):
        raise DegenerateInputError("all coordinate polynomials are zero")
    den = reduce(lcm, (c.denominator for r in rows for c in r), 1)
    return Morphism(N, d, tuple(tuple(int(c * den) for c in r) for r in rows))


def from_json(obj: Mapping) -> Morphism:
    return construct(int(obj["N"]), int(obj["d"]), list(obj["coords"]))


def power_map(N: int, d: int) -> Morphism:
    """[x_0^d : ... : x_N^d]."""
    rows = []
    for i in range(N + 1):
        target = tuple(d if j == i else 0 for j in range(N + 1))
        rows.append(tuple(1 if e == target else 0 for e in monomials(N, d)))
    return Morphism(N, d, tuple(rows))


def phi_A(d: int, A: int) -> Morphism:
    """[x^d + A x^(d-1) y : y^d] on P^1."""
    if A == 0:
        raise DegenerateInputError("phi_A needs A != 0")
    if d < 1:
        raise DegenerateInputError("phi_A needs d >= 1")
    f = {(d, 0): 1, (d - 1, 1): A}
    g = {(0, d): 1}
    return construct(1, d, [f, g])


def standard_family(kind: str, *args: int) -> Morphism:
    if kind == "power":
        return power_map(*args)
    if kind in ("phi_A", "phi_a", "phiA"):
        return phi_A(*args)
    raise DegenerateInputError(f"unknown family {kind!r}")


def evaluate(phi: Morphism, P: ProjPoint, iterations: int = 1) -> tuple[ProjPoint, tuple[int, ...]]:
    """``phi^n(P)`` and the raw (un-normalized) tuple of the last application.

    For ``iterations == 1`` the raw tuple is ``(phi_0(x), ..., phi_N(x))`` at the
    primitive representative ``x`` of ``P``.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if P.dim != phi.N:
        raise DegenerateInputError(f"point in P^{P.dim} for a map on P^{phi.N}")
    x = P.coords
    raw: tuple[int, ...] = ()
    for _ in range(iterations):
        raw = phi.raw(x)
        if not any(raw):
            raise BaseLocusError(f"{phi} vanishes at [{':'.join(map(str, x))}]")
        x = primitive(raw)
    Q = object.__new__(ProjPoint)
    object.__setattr__(Q, "coords", x)
    return Q, raw


def naive_height(phi: Morphism, precision_bits: int = DEFAULT_PRECISION) -> HeightInterval:
    """h(phi): log of the largest coefficient of the primitive coefficient point."""
    return log_enclosure(phi.max_coeff, precision_bits)


def load_map(source: str) -> Morphism:
    """Read a map from a JSON file, or from a family spec like ``power:1:2`` / ``phi_A:2:7``."""
    path = Path(source)
    if path.exists():
        return from_json(json.loads(path.read_text()))
    parts = source.split(":")
    if parts[0] in ("power", "phi_A", "phi_a", "phiA"):
        try:
            args = [int(p) for p in parts[1:]]
        except ValueError as exc:
            raise DegenerateInputError(f"bad family spec {source!r}") from exc
        return standard_family(parts[0], *args)
    try:
        return from_json(json.loads(source))
    except json.JSONDecodeError as exc:
        raise DegenerateInputError(f"no map file or family spec {source!r}") from exc
