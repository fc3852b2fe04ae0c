import random

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from loopvert.multipoint import (MultiPointSeries, expand_at_cluster, kappa_groups, mp_diagonal_nu,
                                 mp_diagonal_nu_inverse, mp_factorize_kappa, mp_invert, mp_is_invertible, mp_mul,
                                 random_multipoint)
from loopvert.scalars import NotAUnitError, RingDescriptor
from loopvert.series import NilLaurent
from oracles import poly_divmod

Q = RingDescriptor((2,))
e = Q.gen(0)
seeds = st.integers(0, 10**6)


def M(coeffs, points=(0, 0), prec=3):
    return MultiPointSeries(Q, points, coeffs, prec)


def as_ints(p):
    return [int(c.constant) for c in p]


def test_level_products():
    one_pi = M({1: (1,)})
    assert mp_mul(one_pi, one_pi) == M({2: (1,)})
    assert mp_mul(M({-1: (e,)}), M({0: (e,)})).is_zero()


def test_product_reduces_by_division():
    # t * t at points (0, 1): t^2 = 1 * t(t - 1) + t
    tt = mp_mul(M({0: (0, 1)}, points=(0, 1)), M({0: (0, 1)}, points=(0, 1)))
    t = sp.Symbol("t")
    quo, rem = poly_divmod(t ** 2, t * (t - 1))
    assert as_ints(tt.level(0)) == list(reversed(rem.all_coeffs()))
    assert as_ints(tt.level(1)) == list(reversed(quo.all_coeffs()))


def test_mismatched_points_are_rejected():
    with pytest.raises(ValueError):
        mp_mul(M({0: (1,)}), M({0: (1,)}, points=(0, 1)))


def test_diagonal_examples():
    assert mp_diagonal_nu(M({0: (0, 1)})) == NilLaurent(Q, {1: 1}, 7)
    assert mp_diagonal_nu(M({1: (1,)})) == NilLaurent(Q, {2: 1}, 7)
    with pytest.raises(ValueError):
        mp_diagonal_nu(M({0: (1,)}, points=(0, 1)))


@given(seeds)
def test_diagonal_round_trip(seed):
    a = random_multipoint(Q, random.Random(seed), [e, e], 3)
    assert mp_diagonal_nu_inverse(mp_diagonal_nu(a), 2, e) == a


@given(seeds)
def test_diagonal_is_multiplicative(seed):
    rng = random.Random(seed)
    a, b = (random_multipoint(Q, rng, [0, 0], 3) for _ in range(2))
    assert mp_diagonal_nu(a * b) == mp_diagonal_nu(a) * mp_diagonal_nu(b)


def test_factorization_of_a_simple_pole():
    # e/t at points (0, 1): level -1 polynomial e(t - 1)
    a = M({-1: (-e, e)}, points=(0, 1), prec=4)
    at0, at1 = mp_factorize_kappa(a)
    assert at0 == NilLaurent(Q, {-1: e}, at0.prec)
    # -sum (t1 - t2)^(-m-1) (z - t2)^m with t1 = 0, t2 = 1
    assert at1 == NilLaurent(Q, {m: -e * (-1) ** (m + 1) for m in range(5)}, 4)


def test_constants_factor_to_constants():
    assert mp_factorize_kappa(M({0: (1,)}, points=(0, 1))) == [NilLaurent(Q, {0: 1}, 3)] * 2


def test_factorization_needs_unit_separation():
    with pytest.raises(NotAUnitError):
        mp_factorize_kappa(M({0: (1,)}, points=(0, e)))


@settings(max_examples=30)
@given(seeds)
def test_factorization_is_a_homomorphism(seed):
    rng = random.Random(seed)
    pts = [0, 1 + e]
    a, b = (random_multipoint(Q, rng, pts, 3) for _ in range(2))
    for fab, fa, fb in zip(mp_factorize_kappa(a * b), mp_factorize_kappa(a), mp_factorize_kappa(b)):
        assert fab == fa * fb


@settings(max_examples=20)
@given(seeds)
def test_factorization_is_injective_on_the_window(seed):
    a = random_multipoint(Q, random.Random(seed), [0, 2], 3)
    if not a.is_zero():
        assert any(not f.is_zero() for f in mp_factorize_kappa(a))


@settings(max_examples=20)
@given(seeds)
def test_diagonal_and_factorization_commute(seed):
    beta = Q.scalar(3)
    a = random_multipoint(Q, random.Random(seed), [0, 0, beta], 2)
    pair, single = kappa_groups(a, [[0, 1], [2]])
    assert mp_diagonal_nu(pair) == expand_at_cluster(a, [0, 1])
    assert mp_factorize_kappa(single)[0] == expand_at_cluster(a, [2])


@settings(max_examples=20)
@given(seeds)
def test_inverse_of_units(seed):
    rng = random.Random(seed)
    a = random_multipoint(Q, rng, [0, 1], 3) + M({0: (1,)}, points=(0, 1), prec=10)
    if mp_is_invertible(a):
        inv = mp_invert(a)
        assert a * inv == M({0: (1,)}, points=(0, 1), prec=min(a.prec, inv.prec))
