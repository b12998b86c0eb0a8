import json
import random

import pytest
import sympy

from arithdyn.errors import InvalidCertificateError, NotAMorphismError
from arithdyn.height_bounds import (
    OffsetCertificate,
    check_point,
    find_certificate,
    is_morphism,
    macaulay_degree,
    offset_ratios,
    textbook_ratios,
    verify_identity,
)
from arithdyn.morphisms import Morphism, construct, phi_A, power_map
from arithdyn.points import enumerate_points

def resultant_oracle(phi):
    """Resultant of a binary quadratic pair from its 4x4 Sylvester matrix."""
    a, b = phi.coeffs
    S = sympy.Matrix([
        [a[0], a[1], a[2], 0],
        [0, a[0], a[1], a[2]],
        [b[0], b[1], b[2], 0],
        [0, b[0], b[1], b[2]],
    ])
    return S.det()


def test_macaulay_degree():
    assert macaulay_degree(1, 2) == 3
    assert macaulay_degree(2, 2) == 4


def test_known_offsets():
    cert = find_certificate(phi_A(2, 7))
    assert offset_ratios(phi_A(2, 7), cert) == (8, 57)
    cert = find_certificate(construct(1, 2, ["x^2+y^2", "x*y"]))
    assert cert.R == (1, 1)
    assert offset_ratios(construct(1, 2, ["x^2+y^2", "x*y"]), cert) == (2, 2)


@pytest.mark.parametrize("N,d", [(1, 2), (1, 3), (2, 2), (2, 3)])
def test_power_maps_have_zero_offsets(N, d):
    cert = find_certificate(power_map(N, d))
    assert cert.c_up.is_exact_zero() and cert.c_low.is_exact_zero()


def test_non_morphisms_rejected():
    for phi in (construct(1, 2, ["x^2", "x*y"]), construct(1, 2, ["x^2 - y^2", "x*y - y^2"]),
                construct(2, 2, ["x^2", "x*y", "x*z"])):
        assert not is_morphism(phi)
        with pytest.raises(NotAMorphismError):
            find_certificate(phi)


@pytest.mark.parametrize("seed", range(120))
def test_morphism_test_matches_resultant(seed):
    rng = random.Random(seed)
    rows = tuple(tuple(rng.randint(-3, 3) for _ in range(3)) for _ in range(2))
    if not any(c for r in rows for c in r):
        return
    phi = Morphism(1, 2, rows)
    assert is_morphism(phi) == (resultant_oracle(phi) != 0)
    if is_morphism(phi):
        assert verify_identity(phi, find_certificate(phi, "macaulay"))


def has_common_zero(polys):
    """Groebner-basis oracle over the three standard affine charts of P^2."""
    x, y, z = sympy.symbols("x y z")
    for sub in ({x: 1}, {y: 1, x: 0}):
        eqs = [e for e in (sympy.expand(p.subs(sub)) for p in polys) if e != 0]
        free = [v for v in (x, y, z) if v not in sub]
        if not eqs or list(sympy.groebner(eqs, *free, order="lex").exprs) != [1]:
            return True
    return all(sympy.expand(p.subs({x: 0, y: 0, z: 1})) == 0 for p in polys)


PLANE_MAP = ["x^2 + 2 y z", "y^2 - x z", "z^2 + 3 x y"]


@pytest.mark.parametrize("seed", range(25))
def test_plane_morphism_test_matches_groebner_oracle(seed):
    rng = random.Random(500 + seed)
    x, y, z = sympy.symbols("x y z")
    mons = [x ** 2, x * y, x * z, y ** 2, y * z, z ** 2]
    rows = tuple(tuple(rng.choice([0, 0, 1, -1, 2]) for _ in range(6)) for _ in range(3))
    if not any(c for r in rows for c in r):
        return
    phi = Morphism(2, 2, rows)
    polys = [sum(c * m for c, m in zip(r, mons)) for r in phi.coeffs]
    assert is_morphism(phi) == (not has_common_zero(polys))


def test_certificate_routes_agree_on_identity():
    phi = construct(1, 3, ["x^3 - 2 y^3", "x^2 y + 5 x y^2"])
    for method in ("sylvester", "macaulay"):
        assert verify_identity(phi, find_certificate(phi, method))


def test_certificate_json_round_trip():
    phi = construct(2, 2, PLANE_MAP)
    cert = find_certificate(phi)
    back = OffsetCertificate.from_json(json.loads(json.dumps(cert.to_json())), phi)
    assert back.G == cert.G and back.R == cert.R
    assert back.c_low == cert.c_low


def test_tampered_certificate_rejected():
    phi = phi_A(2, 7)
    obj = find_certificate(phi).to_json()
    obj["R"][0] += 1
    with pytest.raises(InvalidCertificateError):
        OffsetCertificate.from_json(obj, phi)


def test_plane_map_is_a_morphism():
    x, y, z = sympy.symbols("x y z")
    assert not has_common_zero([x ** 2 + 2 * y * z, y ** 2 - x * z, z ** 2 + 3 * x * y])
    assert has_common_zero([x ** 2 + y * z, y ** 2 - x * z, z ** 2 + x * y])
    assert not is_morphism(construct(2, 2, ["x^2 + y z", "y^2 - x z", "z^2 + x y"]))


SWEEP = [
    (power_map(1, 2), 50),
    (power_map(1, 3), 50),
    (construct(1, 2, ["x^2 + y^2", "x*y"]), 50),
    (phi_A(2, 7), 50),
    (power_map(2, 2), 10),
    (construct(2, 2, PLANE_MAP), 6),
    (construct(1, 3, ["x^3 - 2 y^3", "x^2 y + 5 x y^2"]), 30),
]


@pytest.mark.parametrize("phi,B", SWEEP, ids=[str(p) for p, _ in SWEEP])
def test_offset_inequalities_hold_exactly(phi, B):
    cert = find_certificate(phi)
    for P in enumerate_points(phi.N, B):
        checks = check_point(phi, cert, P)
        assert all(checks.values()), (P, checks)


def test_textbook_ratios_dominate_sharp_ratios():
    for phi, _ in SWEEP:
        cert = find_certificate(phi)
        U, V = offset_ratios(phi, cert)
        Ut, Vt = textbook_ratios(phi, cert)
        assert U <= Ut and V <= Vt
