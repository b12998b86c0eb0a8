"""Arithmetic distances between morphisms, as certified bracket [lower, upper].

The suprema defining the distances run over all algebraic points; here the
lower bound is a maximum over a finite sample of rational points (with the
maximizing point kept as a witness) and the upper bound comes from the
certificate offsets:

* |hhat_phi - h| <= max(C_up, C_low) / (d - 1) for every point;
* |(1/d) h(phi P) - h(P)| <= max(C_up, C_low) / d for every point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .canonical import canonical_height
from .errors import DegenerateInputError
from .height_bounds import find_certificate
from .intervals import DEFAULT_PRECISION, HeightInterval, ceil_dyadic, decimal_string
from .morphisms import Morphism, evaluate, power_map
from .points import ProjPoint, enumerate_points

DEFAULT_EPS = Fraction(1, 10 ** 6)


@dataclass(frozen=True)
class DistanceEstimate:
    """Certified bracket for a supremum over P^N.

    ``lower`` is the largest certified lower endpoint over the sample and
    ``witness`` attains it; ``upper`` holds for every algebraic point.
    """

    mode: str
    lower: Fraction
    upper: Fraction
    witness: ProjPoint
    sample_spec: dict
    pointwise: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.lower > self.upper:
            raise AssertionError(f"unsound estimate: lower {self.lower} > upper {self.upper}")

    def to_json(self, include_pointwise: bool = False) -> dict:
        out = {
            "mode": self.mode,
            "lower": decimal_string(self.lower, 25, "floor"),
            "upper": decimal_string(self.upper, 25, "ceiling"),
            "witness": self.witness.to_json(),
            "sample": self.sample_spec,
        }
        if include_pointwise:
            out["pointwise"] = [
                {"point": P.to_json(), "interval": I.to_json()} for P, I in self.pointwise.items()
            ]
        return out


def height_gap_bound(phi: Morphism) -> Fraction:
    """Upper bound for sup |hhat_phi - h|, namely max(C_up, C_low) / (d - 1)."""
    if phi.d < 2:
        raise DegenerateInputError("canonical heights need degree >= 2")
    cert = find_certificate(phi)
    return max(cert.c_up.hi, cert.c_low.hi, Fraction(0)) / (phi.d - 1)


def _ch(phi: Morphism, P: ProjPoint, eps, precision_bits) -> HeightInterval:
    if phi.is_power_map():
        return P.weil_height(precision_bits)
    return canonical_height(phi, P, eps, precision_bits)


def pointwise_gap(phi: Morphism, psi: Morphism, P: ProjPoint, eps=DEFAULT_EPS,
                  precision_bits: int = DEFAULT_PRECISION) -> HeightInterval:
    """Enclosure of |hhat_phi(P) - hhat_psi(P)|."""
    for f in (phi, psi):
        if f.d < 2:
            raise DegenerateInputError("canonical heights need degree >= 2")
    return _ch(phi, P, eps, precision_bits).abs_diff(_ch(psi, P, eps, precision_bits))


def pointwise_Delta(phi: Morphism, psi: Morphism, P: ProjPoint, eps=DEFAULT_EPS,
                    precision_bits: int = DEFAULT_PRECISION) -> HeightInterval:
    """Enclosure of |(1/deg phi) hhat_psi(phi P) - hhat_psi(P)|."""
    image, _ = evaluate(phi, P)
    a = _ch(psi, image, eps, precision_bits).scale(Fraction(1, phi.d), bits=precision_bits + 8)
    return a.abs_diff(_ch(psi, P, eps, precision_bits))


def sample_points(N: int, B: int, extra: Iterable[ProjPoint] = ()) -> list[ProjPoint]:
    """Bounded-height sample plus extra points, deduplicated, enumeration order first."""
    pts = enumerate_points(N, B)
    seen = set(pts)
    for P in extra:
        if P not in seen:
            pts.append(P)
            seen.add(P)
    return pts


def _round_up(x: Fraction, bits: int) -> Fraction:
    return x if x.denominator & (x.denominator - 1) == 0 else ceil_dyadic(x, bits)


def _Delta_upper(phi: Morphism, psi: Morphism, bits: int) -> Fraction:
    cert = find_certificate(phi)
    own = max(cert.c_up.hi, cert.c_low.hi, Fraction(0)) / phi.d
    if psi.is_power_map():
        return own
    # triangle through h: works for deg(phi) = 1 as well
    via_h = own + height_gap_bound(psi) * (1 + Fraction(1, phi.d))
    if phi.d >= 2:
        via_delta = (1 + Fraction(1, phi.d)) * (height_gap_bound(phi) + height_gap_bound(psi))
        return min(via_h, via_delta)
    return via_h


def sup_estimates(mode: str, phi: Morphism, psi: Morphism | None = None, B: int = 3,
                  eps=DEFAULT_EPS, precision_bits: int = DEFAULT_PRECISION,
                  extra_points: Sequence[ProjPoint] = ()) -> DistanceEstimate:
    """Certified bracket for one of the distance suprema.

    ``mode`` is ``delta_hat`` (needs ``psi``), ``Delta_hat`` (``psi`` defaults to
    the power map of degree 2) or ``complexity`` (delta_hat against the power map
    of the same degree).
    """
    if B < 1 and not extra_points:
        raise DegenerateInputError("empty sample: coordinate bound must be >= 1")
    eps = Fraction(eps)
    bits = precision_bits + 8
    N = phi.N
    if mode == "complexity":
        psi = power_map(N, phi.d)
        mode_eff = "delta_hat"
    elif mode == "Delta_hat":
        psi = psi if psi is not None else power_map(N, 2)
        mode_eff = "Delta_hat"
    elif mode == "delta_hat":
        if psi is None:
            raise DegenerateInputError("delta_hat needs a second map")
        mode_eff = "delta_hat"
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if psi.N != N:
        raise DegenerateInputError("maps act on different projective spaces")
    if psi.d < 2 or (mode_eff == "delta_hat" and phi.d < 2):
        raise DegenerateInputError("canonical heights need degree >= 2")

    pts = sample_points(N, B, extra_points) if B >= 1 else list(dict.fromkeys(extra_points))
    if not pts:
        raise DegenerateInputError("empty sample")
    pointwise = {}
    for P in pts:
        if mode_eff == "delta_hat":
            pointwise[P] = pointwise_gap(phi, psi, P, eps, precision_bits)
        else:
            pointwise[P] = pointwise_Delta(phi, psi, P, eps, precision_bits)
    best = max(range(len(pts)), key=lambda k: (pointwise[pts[k]].lo, -k))
    witness = pts[best]
    lower = pointwise[witness].lo

    if mode_eff == "delta_hat":
        upper = height_gap_bound(phi) + height_gap_bound(psi)
    else:
        upper = _Delta_upper(phi, psi, bits)
    upper = _round_up(upper, bits)
    spec = {
        "coord_bound": B,
        "extra_points": [P.to_json() for P in extra_points],
        "size": len(pts),
        "eps": str(eps),
        "precision": precision_bits,
    }
    return DistanceEstimate(mode, lower, upper, witness, spec, pointwise)


def delta_hat(phi, psi, B=3, eps=DEFAULT_EPS, precision_bits=DEFAULT_PRECISION, extra_points=()):
    return sup_estimates("delta_hat", phi, psi, B, eps, precision_bits, extra_points)


def Delta_hat(phi, psi=None, B=3, eps=DEFAULT_EPS, precision_bits=DEFAULT_PRECISION, extra_points=()):
    return sup_estimates("Delta_hat", phi, psi, B, eps, precision_bits, extra_points)


def complexity(phi, B=3, eps=DEFAULT_EPS, precision_bits=DEFAULT_PRECISION, extra_points=()):
    return sup_estimates("complexity", phi, None, B, eps, precision_bits, extra_points)
