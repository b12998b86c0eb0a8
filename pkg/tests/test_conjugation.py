import random
from fractions import Fraction

import pytest

from arithdyn.canonical import canonical_height
from arithdyn.conjugation import (
    PglMap,
    conjugate,
    dynamical_distance_search,
    enumerate_pgl,
    identity_pgl,
    parse_pgl,
)
from arithdyn.distance import pointwise_gap
from arithdyn.errors import DegenerateInputError
from arithdyn.height_bounds import is_morphism
from arithdyn.morphisms import VERIFIED, Morphism, construct, phi_A, power_map
from arithdyn.points import ProjPoint, parse_point

EPS = Fraction(1, 10 ** 5)


def random_morphism(rng, N=1, d=2, bound=3):
    from arithdyn.polynomials import num_monomials
    K = num_monomials(N, d)
    while True:
        rows = tuple(tuple(rng.randint(-bound, bound) for _ in range(K)) for _ in range(N + 1))
        if any(c for r in rows for c in r):
            phi = Morphism(N, d, rows)
            if is_morphism(phi):
                return phi


def random_pgl(rng, N=1, bound=3):
    while True:
        rows = tuple(tuple(rng.randint(-bound, bound) for _ in range(N + 1)) for _ in range(N + 1))
        try:
            return PglMap(rows)
        except DegenerateInputError:
            continue


def test_examples():
    pw = power_map(1, 2)
    assert conjugate(pw, identity_pgl(1)) == pw
    assert str(conjugate(pw, parse_pgl("1,1;0,1"))) == "[x0^2 + 2*x0*x1 : x1^2]"
    with pytest.raises(DegenerateInputError):
        parse_pgl("1,1;1,1")


def test_normalization_and_inverse():
    f = PglMap(((-2, 4), (0, 6)))
    assert f.matrix == ((1, -2), (0, -3))
    assert (f @ f.inverse()) == identity_pgl(1)


def test_status_is_preserved():
    phi = phi_A(2, 3).with_status(VERIFIED)
    assert conjugate(phi, parse_pgl("2,1;1,1")).status == VERIFIED


@pytest.mark.parametrize("seed", range(30))
def test_conjugation_identities(seed):
    rng = random.Random(seed)
    N = 2 if seed % 5 == 4 else 1
    phi = random_morphism(rng, N)
    f = random_pgl(rng, N)
    phif = conjugate(phi, f)
    assert is_morphism(phif)
    assert conjugate(phif, f.inverse()) == phi
    g = random_pgl(rng, N)
    assert conjugate(phif, g) == conjugate(phi, f @ g)
    P = ProjPoint(tuple(rng.randint(-3, 3) or 1 for _ in range(N + 1)))
    assert phif(P) == f.inverse()(phi(f(P)))
    assert canonical_height(phif, P, EPS).overlaps(canonical_height(phi, f(P), EPS))


@pytest.mark.parametrize("seed", range(6))
def test_sample_level_change_of_variables(seed):
    rng = random.Random(100 + seed)
    phi, psi = random_morphism(rng), random_morphism(rng)
    f, g = random_pgl(rng), random_pgl(rng)
    left_phi, left_psi = conjugate(phi, f), conjugate(psi, g)
    right_phi = conjugate(phi, f @ g.inverse())
    for P in (parse_point(s) for s in ("1:0", "0:1", "2:-3", "1:4")):
        a = pointwise_gap(left_phi, left_psi, P, EPS)
        b = pointwise_gap(right_phi, psi, g(P), EPS)
        assert a.overlaps(b)


def test_enumeration():
    fs = enumerate_pgl(1, 1)
    assert len(fs) == len(set(fs)) == 24
    assert identity_pgl(1) in fs
    assert all(f.det != 0 for f in fs)


def test_search_finds_conjugating_matrix():
    phi = construct(1, 2, ["x^2 - 2 y^2", "x*y + y^2"])
    g = parse_pgl("1,-1;1,1")
    res = dynamical_distance_search(phi, conjugate(phi, g), M=1, B=2, eps=EPS)
    zero_rows = [f for f, e in res.table if e.lower == 0 and all(I.contains(0) for I in e.pointwise.values())]
    assert g in zero_rows


def test_search_is_monotone_in_entry_bound():
    phi, psi = phi_A(2, 2), power_map(1, 2)
    ups = [dynamical_distance_search(phi, psi, M=M, B=2, eps=EPS).estimate.upper for M in (1, 2)]
    assert ups[1] <= ups[0]


def test_power_maps_search_hits_zero():
    res = dynamical_distance_search(power_map(1, 2), power_map(1, 2), M=1, B=2)
    assert res.estimate.lower == 0 and res.estimate.upper == 0
    assert identity_pgl(1) in [f for f, e in res.table if e.upper == 0]
