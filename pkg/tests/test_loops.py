import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from loopvert.cli import parse_poly
from loopvert.loops import (EpsilonProfile, EtalePresentation, NotEtaleError, SeedError, epsilon_membership,
                            hensel_lift, is_loop_point, theta_projection, truncated_loop_ring,
                            truncation_ring_maps)
from loopvert.scalars import RingDescriptor
from loopvert.series import NilLaurent, NotNilLaurentError, mul_exact, nl_reduce_red, random_nil_laurent

Q2 = RingDescriptor((2,))
Q3 = RingDescriptor((3,))
Q22 = RingDescriptor((2, 2))
e = Q2.gen(0)


def square_root_chart():
    return EtalePresentation(("x",), ("y",), (parse_poly("y^2 - x - 1", ("x", "y")),))


def S(coeffs, desc=Q2, prec=4):
    return NilLaurent(desc, coeffs, prec)


def test_polar_units_are_not_loop_points():
    with pytest.raises(NotNilLaurentError):
        S({-1: 1})


def test_loop_point_examples():
    pres = square_root_chart()
    assert is_loop_point([S({-1: e}), S({0: 1, -1: e / 2})], pres)
    assert not is_loop_point([S({-1: e}), S({0: 1})], pres)
    assert is_loop_point([S({3: 1}), S({-1: e})], EtalePresentation.affine_space(2))


def test_hensel_square_root():
    pres = square_root_chart()
    (y,) = hensel_lift(pres, [S({-1: e})], [S({0: 1})])
    assert y == S({0: 1, -1: e / 2})
    assert mul_check(y, S({-1: e}))


def mul_check(y, x):
    return mul_exact(y, y, y.prec) == 1 + x


def test_hensel_fixed_point():
    pres = square_root_chart()
    assert hensel_lift(pres, [S({0: 3})], [S({0: 2})]) == [S({0: 2})]


def test_hensel_two_nilpotents_and_congruent_seeds():
    a, b = Q22.gen(0), Q22.gen(1)
    pres = square_root_chart()
    base = [S({-1: a, -2: b}, Q22)]
    lift = hensel_lift(pres, base, [S({0: 1}, Q22)])
    assert is_loop_point(base + lift, pres)
    other = hensel_lift(pres, base, [S({0: 1, -1: a * b, 1: 3 * a}, Q22)])
    assert other == lift


def test_hensel_errors():
    pres = square_root_chart()
    with pytest.raises(SeedError):
        hensel_lift(pres, [S({-1: e})], [S({0: 2})])
    with pytest.raises(NotEtaleError):
        hensel_lift(pres, [S({0: -1})], [S({0: 0})])


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_hensel_uniqueness_from_random_congruent_seeds(seed):
    rng = random.Random(seed)
    pres = square_root_chart()
    x = random_nil_laurent(Q3, rng, 3, depth=1)
    x = S({k: v.nilpotent_part() for k, v in x.coeffs.items()}, Q3, 3)
    lifts = []
    for _ in range(2):
        noise = random_nil_laurent(Q3, rng, 3, depth=1)
        noise = S({k: v.nilpotent_part() for k, v in noise.coeffs.items()}, Q3, 3)
        lifts.append(hensel_lift(pres, [x], [1 + noise]))
    assert lifts[0] == lifts[1]
    assert is_loop_point([x] + lifts[0], pres)


def test_theta_examples():
    aff = EtalePresentation.affine_space(2)
    pt = [S({-1: e, 0: 3, 2: 1}), S({0: Fraction(1, 2) + e, 1: 5})]
    assert theta_projection(aff, pt) == [Q2.scalar(3), Q2.scalar(Fraction(1, 2)) + e]
    const = [S({0: 2 + e}), S({0: 7})]
    assert theta_projection(aff, const) == [2 + e, Q2.scalar(7)]
    assert theta_projection(square_root_chart(), [S({-1: e}), S({0: 1, -1: e / 2})]) == [Q2.zero(), Q2.one()]


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_reduced_loop_points_have_no_poles(seed):
    pres = square_root_chart()
    rng = random.Random(seed)
    x = random_nil_laurent(Q2, rng, 3, depth=2)
    x = S({k: v.nilpotent_part() for k, v in x.coeffs.items()}, prec=3)
    (y,) = hensel_lift(pres, [x], [S({0: 1}, prec=3)])
    assert all(k >= 0 for s in (x, y) for k in nl_reduce_red(s).coeffs)


def test_epsilon_membership_examples():
    eps3 = Q3.gen(0)
    x = S({-1: eps3}, Q3)
    assert epsilon_membership([S({0: 1, 2: 3})], None, EpsilonProfile({}))
    assert not epsilon_membership([x], None, EpsilonProfile({-1: 1}))
    assert epsilon_membership([x], None, EpsilonProfile({-1: 2}))


@given(st.dictionaries(st.integers(-3, -1), st.integers(0, 3)),
       st.dictionaries(st.integers(-3, -1), st.integers(0, 3)))
def test_epsilon_monotonicity(a, b):
    small = EpsilonProfile(a)
    big = EpsilonProfile({j: max(a.get(j, 0), b.get(j, 0)) for j in set(a) | set(b)})
    x = S({-1: Q3.gen(0), -2: Q3.gen(0) ** 2}, Q3)
    if epsilon_membership([x], None, small):
        assert epsilon_membership([x], None, big)


def test_square_identity_when_nothing_moves():
    eps = EpsilonProfile({-1: 1})
    sq = truncation_ring_maps(1, eps, eps, 2, 2)
    assert all(m.is_identity() for m in (sq.to_quotient, sq.to_extended, sq.quotient_to_opposite,
                                          sq.extended_to_opposite))


def test_square_is_a_pushout():
    sq = truncation_ring_maps(1, EpsilonProfile({-1: 1}), EpsilonProfile({-1: 2}), 0, 1)
    assert sq.commutes() and sq.is_pushout()


def test_zero_profile_gives_arc_rings():
    ring = truncated_loop_ring(2, EpsilonProfile({}), 2)
    assert ring.generators == tuple((i, l) for i in (1, 2) for l in range(3))
    assert ring.relations == ()


def test_order_violations():
    with pytest.raises(ValueError):
        truncation_ring_maps(1, EpsilonProfile({-1: 2}), EpsilonProfile({-1: 1}), 0, 1)
    with pytest.raises(ValueError):
        truncation_ring_maps(1, EpsilonProfile({}), EpsilonProfile({}), 2, 1)


@given(st.integers(1, 2), st.dictionaries(st.integers(-2, -1), st.integers(0, 2)),
       st.dictionaries(st.integers(-2, -1), st.integers(0, 2)), st.integers(0, 1), st.integers(0, 1))
def test_all_small_squares_are_cartesian(d, a, b, n, dn):
    small = EpsilonProfile(a)
    big = EpsilonProfile({j: max(a.get(j, 0), b.get(j, 0)) for j in set(a) | set(b)})
    sq = truncation_ring_maps(d, small, big, n, n + dn)
    assert sq.commutes() and sq.is_pushout()
