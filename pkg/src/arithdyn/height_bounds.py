"""Certified height offsets for morphisms.

For a morphism phi of degree d on P^N, an offset certificate is an exact
polynomial identity

    R_j * x_j**t = sum_i G_ij(x) * phi_i(x)        (j = 0..N)

with integer cofactors G_ij of degree t - d.  It exists at the Macaulay
degree t = (N+1)(d-1) + 1 exactly when the phi_i have no common zero over
the algebraic closure, so finding one doubles as the morphism test.

From the identity, for every primitive integer vector x with H = max|x_j|:

* the gcd g of the raw values phi_i(x) divides L = lcm(R_j);
* R_j H^t <= C_Gj H^(t-d) max|phi_i(x)| where C_Gj = sum_i ||G_ij||_1.

Hence H(phi(P)) >= H(P)^d / (L * max_j C_Gj / R_j), and trivially
H(phi(P)) <= max_i ||phi_i||_1 * H(P)^d.  Logarithms of these two ratios are
the lower and upper offsets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd, lcm
from typing import Sequence

from .errors import InvalidCertificateError, NotAMorphismError
from .intervals import DEFAULT_PRECISION, HeightInterval, log_rational_enclosure
from .linalg import adjugate, bareiss_det, solve_rational
from .morphisms import NOT_MORPHISM, VERIFIED, Morphism
from .points import ProjPoint
from .polynomials import monomial_index, monomials, num_monomials, poly_add, poly_mul


@dataclass(frozen=True)
class OffsetCertificate:
    """``G[i][j]`` is the coefficient vector (in ``monomials(N, t - d)`` order) of G_ij."""

    N: int
    d: int
    t: int
    G: tuple[tuple[tuple[int, ...], ...], ...]
    R: tuple[int, ...]
    c_up: HeightInterval
    c_low: HeightInterval
    method: str = "macaulay"

    @property
    def lcm_R(self) -> int:
        return reduce(lcm, self.R, 1)

    def cofactor_norms(self) -> list[int]:
        """C_Gj = sum over i of the coefficient 1-norm of G_ij, for each target j."""
        return [sum(sum(abs(c) for c in self.G[i][j]) for i in range(self.N + 1))
                for j in range(self.N + 1)]

    @property
    def size(self) -> int:
        """Total number of nonzero cofactor coefficients."""
        return sum(1 for row in self.G for vec in row for c in vec if c)

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "d": self.d,
            "t": self.t,
            "R": list(self.R),
            "G": [[list(vec) for vec in row] for row in self.G],
            "method": self.method,
            "C_up": self.c_up.to_json(),
            "C_low": self.c_low.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict, phi: Morphism, precision_bits: int = DEFAULT_PRECISION) -> "OffsetCertificate":
        G = tuple(tuple(tuple(int(c) for c in vec) for vec in row) for row in obj["G"])
        R = tuple(int(r) for r in obj["R"])
        raw = cls(int(obj["N"]), int(obj["d"]), int(obj["t"]), G, R,
                  HeightInterval.zero(), HeightInterval.zero(), obj.get("method", "macaulay"))
        if not verify_identity(phi, raw):
            raise InvalidCertificateError("certificate identity does not hold for this map")
        up, low = offsets(phi, raw, precision_bits)
        return cls(raw.N, raw.d, raw.t, G, R, up, low, raw.method)


def macaulay_degree(N: int, d: int) -> int:
    return (N + 1) * (d - 1) + 1


def _cofactor_poly(vec: Sequence[int], N: int, deg: int) -> dict:
    return {e: c for e, c in zip(monomials(N, deg), vec) if c}


def verify_identity(phi: Morphism, cert: OffsetCertificate) -> bool:
    """Expand sum_i G_ij * phi_i and compare with R_j x_j^t coefficient by coefficient."""
    N, d, t = phi.N, phi.d, cert.t
    if (cert.N, cert.d) != (N, d) or t < d or len(cert.R) != N + 1:
        return False
    if any(r <= 0 for r in cert.R):
        return False
    K_G = num_monomials(N, t - d)
    polys = phi.polynomials()
    for j in range(N + 1):
        total: dict = {}
        for i in range(N + 1):
            vec = cert.G[i][j]
            if len(vec) != K_G:
                return False
            total = poly_add(total, poly_mul(_cofactor_poly(vec, N, t - d), polys[i]))
        target = {tuple(t if k == j else 0 for k in range(N + 1)): cert.R[j]}
        if total != target:
            return False
    return True


def _reduce_identity(G_col: list[list[int]], R: int) -> tuple[list[list[int]], int]:
    g = reduce(gcd, (c for vec in G_col for c in vec), R)
    if g > 1:
        return [[c // g for c in vec] for vec in G_col], R // g
    return G_col, R


def _sylvester_cofactors(phi: Morphism) -> tuple[list[list[list[int]]], list[int]] | None:
    """N = 1: cofactors from the adjugate of the Sylvester matrix (R_j = |resultant| before reduction)."""
    d = phi.d
    f, g = phi.coeffs
    n = 2 * d
    S = [[0] * n for _ in range(n)]
    for m in range(d):
        for k in range(d + 1):
            S[m + k][m] = f[k]
            S[m + k][d + m] = g[k]
    det = bareiss_det(S)
    if det == 0:
        return None
    adj = adjugate(S, det)
    sign = 1 if det > 0 else -1
    G = [[None, None], [None, None]]
    R = [0, 0]
    for j, r in ((0, 0), (1, n - 1)):
        col = [sign * adj[k][r] for k in range(n)]
        cof = [col[:d], col[d:]]
        cof, Rj = _reduce_identity(cof, abs(det))
        G[0][j], G[1][j] = cof[0], cof[1]
        R[j] = Rj
    return G, R


def _macaulay_cofactors(phi: Morphism, t: int) -> tuple[list[list[list[int]]], list[int]] | None:
    N, d = phi.N, phi.d
    src = monomials(N, t - d)
    tgt_index = monomial_index(N, t)
    n_rows = len(tgt_index)
    cols = [(i, J) for i in range(N + 1) for J in src]
    A = [[0] * len(cols) for _ in range(n_rows)]
    phi_mons = monomials(N, d)
    for c, (i, J) in enumerate(cols):
        for a, I in zip(phi.coeffs[i], phi_mons):
            if a:
                E = tuple(x + y for x, y in zip(I, J))
                A[tgt_index[E]][c] = a
    rhs = []
    for j in range(N + 1):
        E = tuple(t if k == j else 0 for k in range(N + 1))
        col = [0] * n_rows
        col[tgt_index[E]] = 1
        rhs.append(col)
    sols = solve_rational(A, rhs)
    if sols is None:
        return None
    K_G = len(src)
    G = [[None] * (N + 1) for _ in range(N + 1)]
    R = [0] * (N + 1)
    for j, x in enumerate(sols):
        den = reduce(lcm, (v.denominator for v in x), 1)
        ints = [int(v * den) for v in x]
        cof = [ints[i * K_G:(i + 1) * K_G] for i in range(N + 1)]
        cof, Rj = _reduce_identity(cof, den)
        for i in range(N + 1):
            G[i][j] = cof[i]
        R[j] = Rj
    return G, R


def offset_ratios(phi: Morphism, cert: OffsetCertificate) -> tuple[Fraction, Fraction]:
    """Exact ``(U, V)`` with ``H(phi P) <= U H(P)^d`` and ``H(P)^d <= V H(phi P)``."""
    U = Fraction(max(sum(abs(a) for a in row) for row in phi.coeffs))
    norms = cert.cofactor_norms()
    V = cert.lcm_R * max(Fraction(norms[j], cert.R[j]) for j in range(phi.N + 1))
    return U, V


def textbook_ratios(phi: Morphism, cert: OffsetCertificate) -> tuple[Fraction, Fraction]:
    """The cruder ratios ``K * max|a|`` and ``(N+1) * max_j C_Gj * lcm(R)``."""
    U = Fraction(phi.K * phi.max_coeff)
    V = Fraction((phi.N + 1) * max(cert.cofactor_norms()) * cert.lcm_R)
    return U, V


def offsets(phi: Morphism, cert: OffsetCertificate,
            precision_bits: int = DEFAULT_PRECISION) -> tuple[HeightInterval, HeightInterval]:
    """``(C_up, C_low)`` with d h(P) - C_low <= h(phi P) <= d h(P) + C_up for all rational P."""
    if not verify_identity(phi, cert):
        raise InvalidCertificateError("certificate identity does not hold for this map")
    U, V = offset_ratios(phi, cert)
    return log_rational_enclosure(U, precision_bits), log_rational_enclosure(V, precision_bits)


def textbook_offsets(phi: Morphism, cert: OffsetCertificate,
                     precision_bits: int = DEFAULT_PRECISION) -> tuple[HeightInterval, HeightInterval]:
    """Enclosures of log(K max|a|) and log((N+1) C_G lcm R); always dominate :func:`offsets`."""
    U, V = textbook_ratios(phi, cert)
    return log_rational_enclosure(U, precision_bits), log_rational_enclosure(V, precision_bits)


@lru_cache(maxsize=4096)
def _find(phi: Morphism, method: str) -> OffsetCertificate:
    t = macaulay_degree(phi.N, phi.d)
    if method == "auto":
        method = "sylvester" if phi.N == 1 else "macaulay"
    if method == "sylvester":
        if phi.N != 1:
            raise ValueError("the Sylvester route needs N = 1")
        found = _sylvester_cofactors(phi)
    else:
        found = _macaulay_cofactors(phi, t)
    if found is None:
        raise NotAMorphismError(f"{phi} has a common zero over the algebraic closure")
    G, R = found
    cert = OffsetCertificate(
        phi.N, phi.d, t,
        tuple(tuple(tuple(vec) for vec in row) for row in G),
        tuple(R), HeightInterval.zero(), HeightInterval.zero(), method,
    )
    if not verify_identity(phi, cert):
        raise AssertionError("internal error: constructed certificate fails its identity")
    up, low = offsets(phi, cert)
    return OffsetCertificate(cert.N, cert.d, t, cert.G, cert.R, up, low, method)


def find_certificate(phi: Morphism, method: str = "auto") -> OffsetCertificate:
    """Offset certificate at the Macaulay degree; raises :class:`NotAMorphismError` if none exists."""
    return _find(phi.with_status(phi.status), method)


def is_morphism(phi: Morphism) -> bool:
    try:
        find_certificate(phi)
    except NotAMorphismError:
        return False
    return True


def verify(phi: Morphism) -> Morphism:
    """Copy of ``phi`` with ``status`` set to verified or not_morphism."""
    return phi.with_status(VERIFIED if is_morphism(phi) else NOT_MORPHISM)


def check_point(phi: Morphism, cert: OffsetCertificate, P: ProjPoint) -> dict[str, bool]:
    """Exact integer checks of every offset inequality at one point (no logarithms)."""
    raw = phi.raw(P.coords)
    g = reduce(gcd, raw, 0)
    H = P.naive_height
    Hd = H ** phi.d
    H_img = max(abs(v) for v in raw) // g
    U, V = offset_ratios(phi, cert)
    Ut, Vt = textbook_ratios(phi, cert)
    L = cert.lcm_R
    return {
        "gcd_divides_lcm_R": L % g == 0,
        "upper": H_img * U.denominator <= U.numerator * Hd,
        "lower": Hd * V.denominator <= V.numerator * H_img,
        "upper_textbook": H_img * Ut.denominator <= Ut.numerator * Hd,
        "lower_textbook": Hd * Vt.denominator <= Vt.numerator * H_img,
    }
