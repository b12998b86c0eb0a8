"""Certified canonical heights by Tate telescoping.

Write x_0 for the primitive representative of P and x_{k+1} = phi(x_k)/g_k with
g_k = gcd(phi(x_k)).  Then

    d^-n h(x_n) = h(x_0) + sum_{k<n} d^-(k+1) (lambda_k - log g_k),
    lambda_k = log max|phi_i(x_k)| - d log max|x_k|,

and the offsets of the certificate bound every later increment, so

    hhat(P) in d^-n h(x_n) + [-C_low, C_up] / (d^n (d - 1)).

Two routes evaluate d^-n h(x_n):

``exact``
    iterate with exact integers and take one logarithm at the end.  Bit
    sizes grow like d^n, so this is only usable for moderate n.
``split``
    lambda_k depends only on the real direction of x_k, which is tracked as
    an interval box of fixed width W bits; g_k divides lcm(R), so it is
    recovered exactly from x_0 modulo lcm(R)^(n+1).  Cost is polynomial in n.

Both compute the same real number, which the test suite uses as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd
from typing import Sequence

from .errors import BaseLocusError, DegenerateInputError, ResourceCeilingError
from .height_bounds import OffsetCertificate, find_certificate
from .intervals import DEFAULT_PRECISION, HeightInterval, log_enclosure
from .morphisms import Morphism
from .points import ProjPoint, primitive
from .polynomials import monomials

DEFAULT_BIT_CEILING = 2 ** 26
DEFAULT_PREPERIOD_STEPS = 16
_EXACT_ROUTE_BITS = 2 ** 18
_MAX_BOX_BITS = 2 ** 15


@dataclass(frozen=True)
class Preperiodicity:
    """Outcome of an exact orbit scan.

    ``status`` is ``"preperiodic"`` (with ``tail`` and ``period``) or
    ``"unknown"``; ``reason`` says why the scan stopped.
    """

    status: str
    tail: int | None = None
    period: int | None = None
    orbit: tuple[ProjPoint, ...] = ()
    reason: str = ""

    @property
    def is_preperiodic(self) -> bool:
        return self.status == "preperiodic"


@dataclass(frozen=True)
class CanonicalHeight:
    interval: HeightInterval
    n_used: int
    c_up: HeightInterval
    c_low: HeightInterval
    method: str
    preperiodicity: Preperiodicity | None = None

    def to_json(self) -> dict:
        out = {
            "interval": self.interval.to_json(),
            "n_used": self.n_used,
            "C_up": self.c_up.to_json(),
            "C_low": self.c_low.to_json(),
            "method": self.method,
        }
        if self.preperiodicity is not None and self.preperiodicity.is_preperiodic:
            out["tail"] = self.preperiodicity.tail
            out["period"] = self.preperiodicity.period
        return out


def _wrap(coords: tuple[int, ...]) -> ProjPoint:
    P = object.__new__(ProjPoint)
    object.__setattr__(P, "coords", coords)
    return P


def preperiodicity_check(phi: Morphism, P: ProjPoint, max_steps: int = DEFAULT_PREPERIOD_STEPS,
                         cert: OffsetCertificate | None = None,
                         bit_limit: int = 1 << 14) -> Preperiodicity:
    """Scan the exact orbit of P for a repeated point.

    With a certificate, an orbit point of height above C_low/(d-1) proves
    that P wanders (a preperiodic point has hhat = 0, hence h <= C_low/(d-1));
    the scan then stops early with status ``unknown``.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    seen = {P.coords: 0}
    orbit = [P]
    bound = None
    if cert is not None and phi.d >= 2:
        bound = cert.c_low.hi / (phi.d - 1)
    x = P.coords
    for k in range(1, max_steps + 1):
        raw = phi.raw(x)
        if not any(raw):
            raise BaseLocusError(f"{phi} vanishes at {_wrap(x)!r}")
        x = primitive(raw)
        if x in seen:
            tail = seen[x]
            return Preperiodicity("preperiodic", tail, k - tail, tuple(orbit), "orbit repeats")
        seen[x] = k
        orbit.append(_wrap(x))
        H = max(abs(c) for c in x)
        if bound is not None and log_enclosure(H, 20).lo > bound:
            return Preperiodicity("unknown", orbit=tuple(orbit), reason="height exceeds preperiodic bound")
        if H.bit_length() > bit_limit:
            return Preperiodicity("unknown", orbit=tuple(orbit), reason="bit limit")
    return Preperiodicity("unknown", orbit=tuple(orbit), reason="step limit")


def _grid_bits(eps: Fraction, precision_bits: int) -> int:
    # 2**-q <= eps / 32
    q = 5
    while Fraction(1, 1 << q) > eps / 32:
        q += 1
    return max(q, precision_bits)


def iterations_needed(c_up: Fraction, c_low: Fraction, d: int, eps: Fraction) -> int:
    """Smallest n with (C_up + C_low) / (d^n (d-1)) <= eps / 2."""
    spread = max(c_up, 0) + max(c_low, 0)
    n = 0
    while spread > eps / 2 * (d - 1) * d ** n:
        n += 1
    return n


def tate_partial_sum(phi: Morphism, P: ProjPoint, n: int, precision_bits: int = DEFAULT_PRECISION,
                     bit_ceiling: int = DEFAULT_BIT_CEILING) -> HeightInterval:
    """Enclosure of d^-n h(phi^n(P)) by exact iteration."""
    x = P.coords
    for _ in range(n):
        raw = phi.raw(x)
        if not any(raw):
            raise BaseLocusError(f"{phi} vanishes at {_wrap(x)!r}")
        x = primitive(raw)
        if max(abs(c) for c in x).bit_length() > bit_ceiling:
            raise ResourceCeilingError(
                f"coordinates exceed {bit_ceiling} bits after iterating; raise the ceiling or use the split route"
            )
    H = max(abs(c) for c in x)
    extra = (phi.d ** n).bit_length()
    return log_enclosure(H, precision_bits + extra).scale(Fraction(1, phi.d ** n))


# ---------------------------------------------------------------------------
# split route: interval boxes for the real place, modular tracking for the rest
# ---------------------------------------------------------------------------


class _Imprecise(Exception):
    pass


def _imul(a, b):
    p = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(p), max(p)


def _ipow(a, e):
    lo, hi = a
    if e == 0:
        return 1, 1
    if e % 2 or lo >= 0:
        return lo ** e, hi ** e
    if hi <= 0:
        return hi ** e, lo ** e
    return 0, max(lo ** e, hi ** e)


def _mig(a):
    lo, hi = a
    if lo <= 0 <= hi:
        return 0
    return min(abs(lo), abs(hi))


def _mag(a):
    return max(abs(a[0]), abs(a[1]))


def _rescale(box, W):
    m = max(_mag(a) for a in box)
    s = m.bit_length() - W
    if s > 0:
        return [(lo >> s, -((-hi) >> s)) for lo, hi in box]
    if s < 0:
        return [(lo << -s, hi << -s) for lo, hi in box]
    return list(box)


def _terms(phi: Morphism):
    mons = monomials(phi.N, phi.d)
    return [[(a, e) for a, e in zip(row, mons) if a] for row in phi.coeffs]


def _box_image(terms, box, d):
    pw = [[_ipow(a, e) for e in range(d + 1)] for a in box]
    out = []
    for row in terms:
        lo = hi = 0
        for coef, e in row:
            m = (1, 1)
            for c, k in enumerate(e):
                if k:
                    m = _imul(m, pw[c][k])
            if coef >= 0:
                lo += coef * m[0]
                hi += coef * m[1]
            else:
                lo += coef * m[1]
                hi += coef * m[0]
        out.append((lo, hi))
    return out


def _local_sum(phi: Morphism, x0: Sequence[int], n: int, L: int, W: int, q: int) -> tuple[Fraction, Fraction]:
    """Bounds on sum_{k<n} d^-(k+1) (lambda_k - log g_k)."""
    d = phi.d
    terms = _terms(phi)
    box = _rescale([(c, c) for c in x0], W)
    modulus = L ** (n + 1) if L > 1 else 1
    z = [c % modulus for c in x0] if L > 1 else None
    s_lo = s_hi = Fraction(0)
    weight = Fraction(1)
    for k in range(n):
        weight /= d
        img = _box_image(terms, box, d)
        v_lo = max(_mig(a) for a in img)
        v_hi = max(_mag(a) for a in img)
        u_lo = max(_mig(a) for a in box)
        u_hi = max(_mag(a) for a in box)
        if v_lo < 1 or u_lo < 1:
            raise _Imprecise
        lv_lo, lv_hi = log_enclosure(v_lo, q), log_enclosure(v_hi, q)
        lu_lo, lu_hi = log_enclosure(u_lo, q), log_enclosure(u_hi, q)
        lam_lo = lv_lo.lo - d * lu_hi.hi
        lam_hi = lv_hi.hi - d * lu_lo.lo
        if z is not None:
            y = [c % modulus for c in phi.raw(z)]
            g = reduce(gcd, y, L)
            modulus //= L
            z = [(c // g) % modulus for c in y]
            if g > 1:
                lg = log_enclosure(g, q)
                lam_lo -= lg.hi
                lam_hi -= lg.lo
        s_lo += weight * lam_lo
        s_hi += weight * lam_hi
        box = _rescale(img, W)
    return s_lo, s_hi


def _split_value(phi, P, n, L, eps, q) -> HeightInterval:
    W = q + 32
    h0 = log_enclosure(P.naive_height, q)
    while W <= _MAX_BOX_BITS:
        try:
            lo, hi = _local_sum(phi, P.coords, n, L, W, q + 4)
        except _Imprecise:
            W *= 2
            continue
        if hi - lo <= eps / 4:
            return h0 + HeightInterval(lo, hi)
        W *= 2
    raise ResourceCeilingError(f"interval boxes need more than {_MAX_BOX_BITS} bits at {P!r}")


def _predicted_bits(phi: Morphism, P: ProjPoint, n: int, c_up: Fraction) -> float:
    per = P.naive_height.bit_length() + float(c_up) / 0.69 / max(phi.d - 1, 1) + 1
    return per * phi.d ** n


@lru_cache(maxsize=1 << 16)
def _compute(phi: Morphism, P: ProjPoint, eps: Fraction, precision_bits: int, method: str,
             bit_ceiling: int, preperiod_steps: int) -> CanonicalHeight:
    d = phi.d
    if d < 2:
        raise DegenerateInputError("canonical heights need degree >= 2")
    if P.dim != phi.N:
        raise DegenerateInputError(f"point in P^{P.dim} for a map on P^{phi.N}")
    cert = find_certificate(phi)
    if preperiod_steps > 0:
        pre = preperiodicity_check(phi, P, preperiod_steps, cert=cert)
        if pre.is_preperiodic:
            return CanonicalHeight(HeightInterval.zero(), 0, cert.c_up, cert.c_low, "preperiodic", pre)
    c_up, c_low = cert.c_up.hi, cert.c_low.hi
    n = iterations_needed(c_up, c_low, d, eps)
    q = _grid_bits(eps, precision_bits)
    if method == "auto":
        method = "exact" if _predicted_bits(phi, P, n, c_up) <= _EXACT_ROUTE_BITS else "split"
    if method == "exact":
        value = tate_partial_sum(phi, P, n, q, bit_ceiling)
    elif method == "split":
        value = _split_value(phi, P, n, cert.lcm_R, eps, q)
    else:
        raise ValueError(f"unknown method {method!r}")
    scale = Fraction(1, d ** n * (d - 1))
    tail = HeightInterval(-c_low * scale, c_up * scale) if c_low + c_up >= 0 else HeightInterval.zero()
    total = (value + tail).rounded(q + 2)
    if total.hi < 0:
        raise AssertionError(f"negative canonical height enclosure {total} at {P!r}")
    total = total.clamp_below(0)
    if total.width > eps:
        raise AssertionError(f"enclosure width {float(total.width)} exceeds eps at {P!r}")
    return CanonicalHeight(total, n, cert.c_up, cert.c_low, method)


def compute_canonical_height(phi: Morphism, P: ProjPoint, eps=Fraction(1, 10 ** 6),
                             precision_bits: int = DEFAULT_PRECISION, method: str = "auto",
                             bit_ceiling: int = DEFAULT_BIT_CEILING,
                             preperiod_steps: int = DEFAULT_PREPERIOD_STEPS) -> CanonicalHeight:
    """Canonical height of ``P`` with full provenance (iterations used, offsets, route).

    ``method`` is ``"auto"``, ``"exact"`` or ``"split"``.  Preperiodic points
    found by the orbit scan get the exact-zero interval.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise DegenerateInputError("eps must be positive")
    return _compute(phi, P, eps, precision_bits, method, bit_ceiling, preperiod_steps)


def canonical_height(phi: Morphism, P: ProjPoint, eps=Fraction(1, 10 ** 6),
                     precision_bits: int = DEFAULT_PRECISION, **kwargs) -> HeightInterval:
    """Interval of width <= eps containing hhat_phi(P)."""
    return compute_canonical_height(phi, P, eps, precision_bits, **kwargs).interval
