import random
from itertools import permutations

import pytest
import sympy

from arithdyn.errors import DegenerateInputError, InconsistentValuesError
from arithdyn.interpolation import (
    degenerate_fraction,
    factorial_term_count,
    generic_determinant_terms,
    monomial_matrix,
    prop9_slack,
    recover_map,
    vandermonde_product,
)
from arithdyn.intervals import log_rational_enclosure
from arithdyn.morphisms import Morphism, construct, phi_A, power_map
from arithdyn.points import ProjPoint, parse_point
from arithdyn.polynomials import num_monomials

STD = [parse_point(p) for p in ("1:0", "0:1", "1:1")]


def leibniz_det(M):
    n = len(M)
    total = 0
    for perm in permutations(range(n)):
        inversions = sum(perm[a] > perm[b] for a in range(n) for b in range(a + 1, n))
        sign = -1 if inversions % 2 else 1
        term = 1
        for i in range(n):
            term *= M[i][perm[i]]
        total += sign * term
    return total


def test_monomial_matrix_examples():
    M = monomial_matrix(1, 2, STD)
    assert M.entries == ((1, 0, 0), (0, 0, 1), (1, 1, 1))
    assert abs(M.det) == 1
    assert monomial_matrix(1, 2, [parse_point(p) for p in ("1:0", "1:0", "0:1")]).det == 0
    M = monomial_matrix(1, 2, [parse_point(p) for p in ("1:1", "1:2", "1:3")])
    assert abs(M.det) == 2 == abs(vandermonde_product([(1, 1), (1, 2), (1, 3)]))


def test_wrong_point_count():
    with pytest.raises(DegenerateInputError):
        monomial_matrix(1, 2, STD[:2])


def random_points(rng, N, K, bound=4):
    out = []
    while len(out) < K:
        v = tuple(rng.randint(-bound, bound) for _ in range(N + 1))
        if any(v):
            out.append(ProjPoint(v))
    return out


@pytest.mark.parametrize("seed", range(40))
def test_adjugate_identity_and_leibniz_oracle(seed):
    rng = random.Random(seed)
    N, d = rng.choice([(1, 2), (1, 3), (2, 2)])
    M = monomial_matrix(N, d, random_points(rng, N, num_monomials(N, d)))
    K = len(M.entries)
    prod = [[sum(M.entries[i][k] * M.adjugate[k][j] for k in range(K)) for j in range(K)]
            for i in range(K)]
    assert prod == [[M.det if i == j else 0 for j in range(K)] for i in range(K)]
    if K <= 6:
        assert M.det == leibniz_det(M.entries)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_vandermonde_sign_is_fixed(d):
    rng = random.Random(d)
    signs = set()
    for _ in range(25):
        pts = random_points(rng, 1, d + 1, bound=6)
        det = monomial_matrix(1, d, pts).det
        V = vandermonde_product(pts)
        assert abs(det) == abs(V)
        if V:
            signs.add(det // V)
    assert len(signs) == 1


@pytest.mark.parametrize("lam", [2, 3, -2])
@pytest.mark.parametrize("N,d", [(1, 2), (1, 4), (2, 2)])
def test_multihomogeneity(lam, N, d):
    rng = random.Random(7)
    pts = [P.coords for P in random_points(rng, N, num_monomials(N, d))]
    base = monomial_matrix(N, d, pts).det
    for j in range(len(pts)):
        scaled = list(pts)
        scaled[j] = tuple(lam * c for c in pts[j])
        assert monomial_matrix(N, d, scaled).det == lam ** d * base


def test_recovery_examples():
    pw = power_map(1, 2)
    assert recover_map(1, 2, [(P, pw.raw(P.coords)) for P in STD]) == pw
    f = construct(1, 2, ["x^2 + y^2", "x*y"])
    assert recover_map(1, 2, [(P, f.raw(P.coords)) for P in STD]) == f


def test_global_scalar_is_allowed():
    f = phi_A(2, 7)
    pairs = [(P, tuple(5 * v for v in f.raw(P.coords))) for P in STD + [parse_point("2:3")]]
    assert recover_map(1, 2, pairs) == f


def test_broken_per_point_scaling_detected():
    f = construct(1, 2, ["x^2 + y^2", "x*y"])
    pts = STD + [parse_point("2:1")]
    pairs = [(P, f.raw(P.coords)) for P in pts]
    pairs[0] = (pairs[0][0], tuple(2 * v for v in pairs[0][1]))
    with pytest.raises(InconsistentValuesError):
        recover_map(1, 2, pairs)


def test_degenerate_configuration():
    pts = [parse_point(p) for p in ("1:0", "1:0", "0:1")]
    with pytest.raises(DegenerateInputError):
        recover_map(1, 2, [(P, power_map(1, 2).raw(P.coords)) for P in pts])
    with pytest.raises(DegenerateInputError):
        prop9_slack(phi_A(2, 7), pts)


@pytest.mark.parametrize("seed", range(60))
def test_random_round_trips(seed):
    rng = random.Random(seed)
    N, d = rng.choice([(1, 1), (1, 2), (1, 3), (1, 4), (2, 2)])
    K = num_monomials(N, d)
    phi = Morphism(N, d, tuple(tuple(rng.randint(-9, 9) for _ in range(K)) for _ in range(N + 1)))
    while True:
        pts = random_points(rng, N, K + 2, bound=5)
        if monomial_matrix(N, d, pts[:K]).det:
            break
    assert recover_map(N, d, [(P, phi.raw(P.coords)) for P in pts]) == phi


def test_prop9_examples():
    assert prop9_slack(power_map(1, 2), STD).contains(0)
    slack = prop9_slack(phi_A(2, 7), STD)
    assert slack.overlaps(log_rational_enclosure(sympy.Rational(8, 7), 80))


def test_determinant_term_count():
    # every permutation contributes a distinct monomial, so no cancellation occurs
    for N, d in [(1, 2), (1, 3), (2, 2)]:
        assert generic_determinant_terms(N, d) == factorial_term_count(N, d)
    assert generic_determinant_terms(1, 2) == 6


def test_degenerate_tuples_are_rare():
    for N, d in [(1, 2), (1, 3), (2, 2)]:
        bad, total = degenerate_fraction(N, d, B=3, trials=300)
        assert 0 <= bad < total
