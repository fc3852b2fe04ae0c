import pytest
from hypothesis import given, strategies as st

from conftest import parse
from loopvert.cd import VacVector, basis_states
from loopvert.chiral import (GENERATOR_KINDS, DeltaElement, chiral_vs_vertex, delta_canonicalize, delta_term,
                             format_delta, mu_generator, mul_t1, mul_u, total_derivative, translation_compatible,
                             unit_epsilon_check)

vac = VacVector.vacuum()
A = parse("a[1,-1] |0>", "state")
STATES = basis_states(1, 3)
states = st.sampled_from(STATES)
gens = st.sampled_from([(k, 1) for k in GENERATOR_KINDS])


def D(**terms):
    """D(m0p1=v) builds v * t2 * d(0)delta."""
    out = {}
    for key, v in terms.items():
        m, p = key[1:].split("p")
        out[(int(m), int(p))] = v
    return DeltaElement(out)


def test_multiplying_by_the_difference_lowers_the_order():
    assert mul_u(D(m2p0=A)) == D(m1p0=A)
    assert mul_u(D(m0p0=A)).is_zero()


def test_functions_of_t1_are_evaluated_on_the_diagonal():
    assert mul_t1(D(m0p0=A)) == D(m0p1=A)
    # t1 = t2 + (t1 - t2)
    assert mul_t1(D(m1p0=A)) == D(m1p1=A, m0p0=A)


def test_zero_input():
    assert delta_canonicalize([]).is_zero()
    assert format_delta(delta_canonicalize([])) == "0"


def test_regular_terms_vanish():
    assert delta_term(A, 3, 1, 0, 8).is_zero()
    assert delta_term(A, 1, 0, -1, 8) == D(m0p1=A)


@given(states, st.integers(0, 3), st.integers(0, 3), st.integers(-4, 1))
def test_canonicalization_is_idempotent(v, q1, q2, k):
    once = delta_canonicalize([(v, q1, q2, k)])
    again = delta_canonicalize([(w, 0, p, -m - 1) for (m, p), w in once.terms.items()])
    assert again == once


@given(states, st.integers(0, 4), st.integers(0, 3))
def test_annihilation_depth(v, m, p):
    assert mul_u(DeltaElement({(m, p): v}), m + 1).is_zero()
    if m:
        assert not mul_u(DeltaElement({(m, p): v}), m).is_zero()


def test_mu_examples():
    assert mu_generator(0, ("a", 1), vac).is_zero()
    assert mu_generator(-1, ("a", 1), vac) == D(m0p0=A)
    assert mu_generator(10, ("a", 1), parse("a*[1,-1] |0>", "state")).is_zero()
    assert mu_generator(0, ("b*", 1), parse("b[1,-1] |0>", "state")) == D(m0p0=vac)


def test_format():
    assert format_delta(D(m0p1=A, m2p0=vac)) == "{a[1,-1] |0>}*t2^1*d(0) + {|0>}*d(2)"


@pytest.mark.parametrize("kind", GENERATOR_KINDS)
def test_chiral_product_matches_vertex_side(kind):
    assert all(chiral_vs_vertex((kind, 1), n, b) for n in range(-3, 4) for b in STATES)


@pytest.mark.parametrize("kind", GENERATOR_KINDS)
def test_two_directions_with_mixed_parities(kind):
    for b in basis_states(2, 2):
        for i in (1, 2):
            assert all(chiral_vs_vertex((kind, i), n, b) for n in range(-2, 3))


@given(gens, st.integers(0, 5))
def test_vacuum_second_slot_vanishes_for_nonnegative_n(gen, n):
    assert mu_generator(n, gen, vac).is_zero()
    assert chiral_vs_vertex(gen, n, vac)


@given(gens, st.integers(-3, 3), states, st.integers(0, 2), st.integers(0, 2))
def test_function_factors(gen, n, b, q, p):
    assert chiral_vs_vertex(gen, n, b, q=q, p=p)


@given(gens, st.integers(-3, 3), states)
def test_translation_compatibility(gen, n, b):
    assert translation_compatible(gen, n, b)


@given(states, st.integers(0, 3))
def test_unit_axiom(v, p):
    assert unit_epsilon_check(v, p=p)
    assert unit_epsilon_check(v, n=-3, p=p)


def test_unit_examples():
    assert unit_epsilon_check(vac)
    assert unit_epsilon_check(A)


def test_total_derivative_kills_t2_free_delta():
    assert total_derivative(D(m3p0=A)).is_zero()
    assert total_derivative(D(m0p2=A)) == D(m0p1=A * 2)
