"""Change of coordinates phi -> phi^f = f^-1 . phi . f for f in PGL_{N+1}(Q)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .distance import DEFAULT_EPS, DistanceEstimate, delta_hat
from .errors import DegenerateInputError
from .intervals import DEFAULT_PRECISION
from .linalg import adjugate, bareiss_det, matmul, matvec
from .morphisms import Morphism
from .points import ProjPoint, primitive
from .polynomials import coefficient_vector, compose_linear, poly_add


@dataclass(frozen=True, order=True)
class PglMap:
    """Integer representative of an element of PGL_{N+1}(Q): primitive, first nonzero entry positive."""

    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(c) for c in r) for r in self.matrix)
        n = len(rows)
        if n < 2 or any(len(r) != n for r in rows):
            raise DegenerateInputError("PGL element needs a square matrix of size >= 2")
        if bareiss_det(rows) == 0:
            raise DegenerateInputError("singular matrix")
        flat = primitive([c for r in rows for c in r])
        object.__setattr__(self, "matrix", tuple(flat[i * n:(i + 1) * n] for i in range(n)))

    @property
    def N(self) -> int:
        return len(self.matrix) - 1

    @property
    def det(self) -> int:
        return bareiss_det(self.matrix)

    def inverse(self) -> "PglMap":
        return PglMap(tuple(map(tuple, adjugate(self.matrix))))

    def __matmul__(self, other: "PglMap") -> "PglMap":
        return PglMap(tuple(map(tuple, matmul(self.matrix, other.matrix))))

    def __call__(self, P: ProjPoint) -> ProjPoint:
        if P.dim != self.N:
            raise DegenerateInputError(f"point in P^{P.dim} for a map of P^{self.N}")
        return ProjPoint(tuple(matvec(self.matrix, P.coords)))

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.matrix]

    def __str__(self):
        return ";".join(",".join(str(c) for c in r) for r in self.matrix)


def identity_pgl(N: int) -> PglMap:
    return PglMap(tuple(tuple(1 if i == j else 0 for j in range(N + 1)) for i in range(N + 1)))


def parse_pgl(text: str) -> PglMap:
    """Parse ``"1,1;0,1"`` (rows separated by semicolons)."""
    try:
        rows = [tuple(int(c) for c in r.split(",")) for r in text.strip().split(";")]
    except ValueError as exc:
        raise DegenerateInputError(f"bad matrix {text!r}") from exc
    return PglMap(tuple(rows))


def conjugate(phi: Morphism, f: PglMap) -> Morphism:
    """phi^f, with f^-1 realized by the integer adjugate; status is carried over."""
    if f.N != phi.N:
        raise DegenerateInputError("matrix size does not match the map's projective space")
    inv = adjugate(f.matrix)
    inner = [compose_linear(p, f.matrix) for p in phi.polynomials()]
    rows = []
    for i in range(phi.N + 1):
        out: dict = {}
        for k in range(phi.N + 1):
            if inv[i][k]:
                out = poly_add(out, inner[k], inv[i][k])
        rows.append(tuple(coefficient_vector(out, phi.N, phi.d)))
    return Morphism(phi.N, phi.d, tuple(rows), phi.status)


def enumerate_pgl(N: int, M: int) -> list[PglMap]:
    """All classes with an integer representative whose entries lie in [-M, M], in a fixed order."""
    if M < 1:
        raise DegenerateInputError("entry bound must be >= 1")
    n = N + 1
    seen = set()
    out = []
    for flat in product(range(-M, M + 1), repeat=n * n):
        if not any(flat) or next(c for c in flat if c) < 0:
            continue
        rows = tuple(flat[i * n:(i + 1) * n] for i in range(n))
        if bareiss_det(rows) == 0:
            continue
        f = PglMap(rows)
        if f not in seen:
            seen.add(f)
            out.append(f)
    return out


@dataclass(frozen=True)
class SearchResult:
    best: PglMap
    estimate: DistanceEstimate
    table: list[tuple[PglMap, DistanceEstimate]]

    def to_json(self) -> dict:
        return {
            "best_f": self.best.to_json(),
            "estimate": self.estimate.to_json(),
            "table": [{"f": f.to_json(), "lower": e.to_json()["lower"], "upper": e.to_json()["upper"],
                       "witness": e.witness.to_json()} for f, e in self.table],
        }


def dynamical_distance_search(phi: Morphism, psi: Morphism, M: int = 1, B: int = 3,
                              eps=DEFAULT_EPS, precision_bits: int = DEFAULT_PRECISION,
                              candidates: Sequence[PglMap] | None = None) -> SearchResult:
    """Bracket delta_hat(phi^f, psi) for every f with entries in [-M, M].

    The best candidate minimizes the certified upper bound, then the sampled
    lower bound; remaining ties go to enumeration order.
    """
    if phi.N != psi.N:
        raise DegenerateInputError("maps act on different projective spaces")
    fs = list(candidates) if candidates is not None else enumerate_pgl(phi.N, M)
    table = []
    for f in fs:
        table.append((f, delta_hat(conjugate(phi, f), psi, B, Fraction(eps), precision_bits)))
    k = min(range(len(table)), key=lambda i: (table[i][1].upper, table[i][1].lower, i))
    return SearchResult(table[k][0], table[k][1], table)
