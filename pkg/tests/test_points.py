from fractions import Fraction
from itertools import product
from math import gcd
from functools import reduce

import pytest
from hypothesis import given
from hypothesis import strategies as st

from arithdyn.errors import DegenerateInputError
from arithdyn.points import ProjPoint, count_points, enumerate_points, normalize, parse_point


def brute_force_points(N, B):
    out = set()
    for v in product(range(-B, B + 1), repeat=N + 1):
        if any(v) and reduce(gcd, v, 0) == 1:
            out.add(ProjPoint(v))
    return out


def test_normalization_examples():
    assert normalize([Fraction(2, 3), 4]).coords == (1, 6)
    assert normalize([-2, 4]).coords == (1, -2)
    assert normalize([0, -5, 10]).coords == (0, 1, -2)
    assert parse_point("1/2:1/3").coords == (3, 2)


def test_all_zero_point_rejected():
    with pytest.raises(DegenerateInputError):
        normalize([0, 0])
    with pytest.raises(DegenerateInputError):
        parse_point("0:0:0")


@pytest.mark.parametrize("text", ["", "1", "a:b", "1::2", "1/0:1"])
def test_bad_point_text(text):
    with pytest.raises(DegenerateInputError):
        parse_point(text)


coords = st.lists(st.integers(-50, 50), min_size=2, max_size=4).filter(any)


@given(coords, st.integers(-20, 20).filter(bool))
def test_normalization_is_scale_invariant(v, lam):
    assert ProjPoint(tuple(lam * c for c in v)) == ProjPoint(tuple(v))


@given(coords)
def test_canonical_representative(v):
    P = ProjPoint(tuple(v))
    assert reduce(gcd, P.coords, 0) == 1
    assert next(c for c in P.coords if c) > 0


@pytest.mark.parametrize("N,B,count", [(1, 1, 4), (1, 2, 8), (2, 1, 13)])
def test_small_counts(N, B, count):
    assert count_points(N, B) == count
    assert len(enumerate_points(N, B)) == count


@pytest.mark.parametrize("N,B", [(1, 5), (1, 9), (2, 3), (3, 2)])
def test_enumeration_matches_brute_force(N, B):
    pts = enumerate_points(N, B)
    assert len(pts) == len(set(pts))
    assert set(pts) == brute_force_points(N, B)
    assert pts == sorted(pts)


def test_enumeration_order_example():
    assert [str(P) for P in enumerate_points(1, 1)] == ["0:1", "1:-1", "1:0", "1:1"]


def test_heights():
    P = parse_point("3:-4")
    assert P.naive_height == 4
    assert P.weil_height().contains(Fraction(13862943611198906, 10 ** 16))
    assert parse_point("1:1").weil_height().is_exact_zero()
