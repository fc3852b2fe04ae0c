import pytest
from hypothesis import given, settings, strategies as st

from conftest import parse
from loopvert.cd import GenMode, VacVector, basis_states, vac_act
from loopvert.vertex import (borcherds_check, delta_is_derivation, delta_squared_vanishes, generator_states,
                             identity_field_holds, locality_check, msv_differential, nth_product,
                             product_bound, skew_symmetry_holds, translate, translation_axiom_holds,
                             vacuum_axioms_hold)

g = GenMode
vac = VacVector.vacuum()
A = parse("a[1,-1] |0>", "state")
AS = parse("a*[1,0] |0>", "state")
B = parse("b[1,-1] |0>", "state")
BS = parse("b*[1,0] |0>", "state")
SMALL = basis_states(1, 2)
MIXED = basis_states(2, 2)
homogeneous = st.sampled_from(basis_states(1, 3))


def test_translation_examples():
    assert translate(vac).is_zero()
    # T a_m = -m a_{m-1} and T a*_m = (1 - m) a*_{m-1}
    assert translate(A) == parse("a[1,-2] |0>", "state")
    assert translate(AS) == parse("a*[1,-1] |0>", "state")
    assert translate(parse("a[1,-2] |0>", "state")) == parse("2 a[1,-3] |0>", "state")


def test_generator_fields_are_the_mode_action():
    for v in MIXED:
        for n in range(-3, 4):
            assert nth_product(A, n, v) == vac_act(g("a", 1, n), v)
            assert nth_product(AS, n, v) == vac_act(g("a*", 1, n + 1), v)
            assert nth_product(B, n, v) == vac_act(g("b", 1, n), v)
            assert nth_product(BS, n, v) == vac_act(g("b*", 1, n + 1), v)


def test_product_examples():
    assert nth_product(A, 0, AS) == vac_act(g("a", 1, 0), AS)
    assert nth_product(A, 0, AS) == parse("-1 |0>", "state")
    for n in range(0, 4):
        assert nth_product(A, n, vac).is_zero()
    assert nth_product(A, -1, vac) == A
    assert nth_product(A, -2, vac) == parse("a[1,-2] |0>", "state")
    assert skew_symmetry_holds(AS, A, -1) and skew_symmetry_holds(A, AS, -1)


def test_differential_examples():
    assert msv_differential(vac).is_zero()
    # only b*_{1,0} pairs with a b-mode of the sum
    assert msv_differential(B).is_zero()
    assert msv_differential(BS) == AS
    assert msv_differential(parse("a[1,-1] |0>", "state")) == parse("a*[1,1] b[1,-1] a[1,-1] |0>", "state")
    assert delta_squared_vanishes(1, 4)


def test_locality_examples():
    assert locality_check(A, A, 0, SMALL)
    assert locality_check(A, AS, 2, SMALL)
    assert locality_check(A, AS, 1, SMALL)
    assert not locality_check(A, AS, 0, SMALL)
    assert locality_check(vac, AS, 0, SMALL)


@pytest.mark.parametrize("x", generator_states(2), ids=str)
@pytest.mark.parametrize("y", generator_states(2), ids=str)
def test_generators_are_local_with_n_2(x, y):
    assert locality_check(x, y, 2, basis_states(2, 1), modes=range(-2, 3))


def test_borcherds_examples():
    grid = range(-2, 3)
    assert all(borcherds_check(vac, A, AS, m, n, k) for m in grid for n in grid for k in grid)
    assert all(borcherds_check(A, AS, vac, m, n, k) for m in grid for n in grid for k in grid)


@settings(max_examples=20)
@given(homogeneous, homogeneous, st.sampled_from(SMALL), st.integers(-3, 3), st.integers(-3, 3),
       st.integers(-3, 3))
def test_borcherds_random(a, b, c, m, n, k):
    assert borcherds_check(a, b, c, m, n, k)


@pytest.mark.parametrize("v", basis_states(1, 4), ids=str)
def test_vacuum_axioms(v):
    assert vacuum_axioms_hold(v)
    assert identity_field_holds(v)


@pytest.mark.parametrize("x", generator_states(1), ids=str)
def test_translation_axiom_on_generators(x):
    assert translation_axiom_holds(x, basis_states(1, 2), range(-2, 3))


@settings(max_examples=20)
@given(homogeneous, homogeneous)
def test_strong_finiteness(a, b):
    bound = product_bound(a, b)
    assert all(nth_product(a, n, b).is_zero() for n in range(bound, bound + 3))


@settings(max_examples=20)
@given(homogeneous, homogeneous, st.integers(-2, 2))
def test_delta_is_an_odd_derivation(a, b, n):
    assert delta_is_derivation(a, b, n)


@settings(max_examples=20)
@given(homogeneous, homogeneous, st.integers(-2, 2))
def test_skew_symmetry(a, b, n):
    assert skew_symmetry_holds(a, b, n)
