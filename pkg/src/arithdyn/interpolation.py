"""Monomial matrices and exact recovery of a map from its values.

For K = C(N+d, N) points P_1..P_K the monomial matrix A has row j equal to
the degree-d monomials evaluated at P_j.  When det A = D is nonzero, the
coefficients a_iI of any degree-d map are determined by its raw values:
D * a_iI = sum_j adj(A)[I][j] * phi_i(P_j).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import comb, factorial, lcm
from typing import Sequence

from .errors import DegenerateInputError, InconsistentValuesError
from .intervals import DEFAULT_PRECISION, HeightInterval
from .linalg import adjugate, bareiss_det
from .morphisms import Morphism, evaluate, naive_height
from .points import ProjPoint, enumerate_points
from .polynomials import eval_monomials, monomials, num_monomials


@dataclass(frozen=True)
class MonomialMatrix:
    N: int
    d: int
    points: tuple[tuple[int, ...], ...]
    entries: tuple[tuple[int, ...], ...]
    det: int
    adjugate: tuple[tuple[int, ...], ...]

    @property
    def degenerate(self) -> bool:
        return self.det == 0

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "d": self.d,
            "points": [list(p) for p in self.points],
            "entries": [list(r) for r in self.entries],
            "det": self.det,
            "adjugate": [list(r) for r in self.adjugate],
        }


def _coords(p) -> tuple[int, ...]:
    return p.coords if isinstance(p, ProjPoint) else tuple(int(c) for c in p)


def monomial_matrix(N: int, d: int, points: Sequence) -> MonomialMatrix:
    """Exact monomial matrix of ``K`` points.

    Points may be :class:`ProjPoint` or raw integer tuples; raw tuples are
    used as given, which is how scaling one row is tested.
    """
    K = num_monomials(N, d)
    if len(points) != K:
        raise DegenerateInputError(f"need exactly {K} points for N={N}, d={d}, got {len(points)}")
    pts = tuple(_coords(p) for p in points)
    if any(len(p) != N + 1 for p in pts):
        raise DegenerateInputError(f"every point needs {N + 1} coordinates")
    rows = [eval_monomials(N, d, p) for p in pts]
    det = bareiss_det(rows)
    adj = adjugate(rows, det)
    return MonomialMatrix(N, d, pts, tuple(map(tuple, rows)), det,
                          tuple(tuple(r) for r in adj))


def vandermonde_product(points: Sequence) -> int:
    """prod over i < j of (x_i y_j - x_j y_i) for points of P^1."""
    pts = [_coords(p) for p in points]
    out = 1
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            out *= pts[i][0] * pts[j][1] - pts[j][0] * pts[i][1]
    return out


def recover_map(N: int, d: int, pairs: Sequence[tuple]) -> Morphism:
    """Recover the degree-d map whose raw values at the given points are the given tuples.

    ``pairs`` holds ``(point, values)`` with ``values`` the un-normalized
    evaluation at the point's canonical representative.  The first ``K``
    pairs determine the map; every pair (including any beyond ``K``) is then
    re-evaluated, and a single global scalar must relate all raw values to
    the recovered map's, else :class:`InconsistentValuesError` is raised.
    """
    K = num_monomials(N, d)
    if len(pairs) < K:
        raise DegenerateInputError(f"need at least {K} point/value pairs, got {len(pairs)}")
    points = [P if isinstance(P, ProjPoint) else ProjPoint(tuple(P)) for P, _ in pairs]
    values = [tuple(Fraction(v) for v in V) for _, V in pairs]
    if any(len(V) != N + 1 for V in values):
        raise DegenerateInputError(f"every value tuple needs {N + 1} entries")
    M = monomial_matrix(N, d, points[:K])
    if M.degenerate:
        raise DegenerateInputError("points lie on the degenerate locus (det = 0)")
    coeffs = [[sum(M.adjugate[I][j] * values[j][i] for j in range(K)) for I in range(K)]
              for i in range(N + 1)]
    if not any(c for row in coeffs for c in row):
        raise DegenerateInputError("all values are zero")
    den = lcm(*(c.denominator for row in coeffs for c in row))
    phi = Morphism(N, d, tuple(tuple(int(c * den) for c in row) for row in coeffs))

    scale = None
    for P, V in zip(points, values):
        got = phi.raw(P.coords)
        if not any(got) and not any(V):
            continue
        if not any(got) or not any(V):
            raise InconsistentValuesError(f"recovered map disagrees at {P}")
        k = next(a for a in range(N + 1) if got[a])
        ratio = V[k] / got[k]
        if scale is None:
            scale = ratio
        if ratio != scale or any(V[a] != scale * got[a] for a in range(N + 1)):
            raise InconsistentValuesError(
                f"values at {P} are not the raw evaluation of a single map"
            )
    return phi


def prop9_slack(phi: Morphism, points: Sequence[ProjPoint],
                precision_bits: int = DEFAULT_PRECISION) -> HeightInterval:
    """Enclosure of d(K-1) sum h(P_j) + sum h(phi P_j) - h(phi) at a non-degenerate configuration."""
    M = monomial_matrix(phi.N, phi.d, points)
    if M.degenerate:
        raise DegenerateInputError("points lie on the degenerate locus (det = 0)")
    pts = [P if isinstance(P, ProjPoint) else ProjPoint(tuple(P)) for P in points]
    total = HeightInterval.zero()
    for P in pts:
        total = total + P.weil_height(precision_bits)
    total = total.scale(phi.d * (phi.K - 1))
    for P in pts:
        total = total + evaluate(phi, P)[0].weil_height(precision_bits)
    return total - naive_height(phi, precision_bits)


def generic_determinant_terms(N: int, d: int) -> int:
    """Number of distinct monomials in the determinant with symbolic points.

    Expands the Leibniz sum over all permutations with variables x_{j,k}
    for coordinate k of point j, collecting like terms.
    """
    mons = monomials(N, d)
    K = len(mons)
    terms: dict[tuple, int] = {}
    for perm in permutations(range(K)):
        inversions = sum(1 for a in range(K) for b in range(a + 1, K) if perm[a] > perm[b])
        key = tuple(e for j in range(K) for e in mons[perm[j]])
        terms[key] = terms.get(key, 0) + (-1 if inversions % 2 else 1)
    return sum(1 for c in terms.values() if c)


def degenerate_fraction(N: int, d: int, B: int = 3, trials: int = 1000,
                        seed: int = 0) -> tuple[int, int]:
    """(degenerate count, trials) for random K-tuples drawn from points of coordinate bound B."""
    pool = enumerate_points(N, B)
    K = num_monomials(N, d)
    rng = random.Random(seed)
    bad = 0
    for _ in range(trials):
        pts = [rng.choice(pool) for _ in range(K)]
        if bareiss_det([eval_monomials(N, d, p.coords) for p in pts]) == 0:
            bad += 1
    return bad, trials


def factorial_term_count(N: int, d: int) -> int:
    """K! for K = C(N+d, N): the number of Leibniz terms."""
    return factorial(comb(N + d, N))
