from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import orders_of, ring_to_sympy
from loopvert.scalars import (NotAUnitError, RingDescriptor, RingElem, RingMismatchError, ring_add,
                              ring_invert, ring_mul, ring_nilpotent_order)
from oracles import ring_inverse
from strategies import descriptors, ring_elems

Q2 = RingDescriptor((2,))
Q3 = RingDescriptor((3,))
Q22 = RingDescriptor((2, 2))


def eps(desc=Q2, k=0):
    return desc.gen(k)


def test_addition_examples():
    e = eps()
    assert ring_add(1 + e, -e) == Q2.one()
    assert ring_add(Q2.zero(), e) == e
    assert ring_add(Q2.scalar(Fraction(1, 2)), Q2.scalar(Fraction(1, 2))) == Q2.one()


def test_multiplication_examples():
    assert ring_mul(eps(), eps()).is_zero()
    assert ring_mul(eps(Q3), eps(Q3)) == RingElem(Q3, {(2,): 1})
    assert ring_mul(1 + eps(), 1 - eps()) == Q2.one()


def test_descriptor_mismatch_is_an_error():
    with pytest.raises(RingMismatchError):
        ring_add(eps(Q2), eps(Q3))
    with pytest.raises(RingMismatchError):
        ring_mul(eps(Q2), eps(Q3))


def test_nilpotent_order_examples():
    assert ring_nilpotent_order(eps(Q3)) == 3
    assert ring_nilpotent_order(1 + eps(Q3)) is None
    assert ring_nilpotent_order(eps(Q22, 0) * eps(Q22, 1)) == 2
    assert ring_nilpotent_order(eps(Q22, 0) + eps(Q22, 1)) == 3


def test_inverse_examples():
    assert ring_invert(1 + eps()) == 1 - eps()
    assert ring_invert(RingDescriptor(()).scalar(2)) == RingDescriptor(()).scalar(Fraction(1, 2))
    e = eps(Q3)
    assert ring_invert(1 + e) == 1 - e + e * e
    with pytest.raises(NotAUnitError):
        ring_invert(eps())


@given(descriptors.flatmap(lambda d: st.tuples(ring_elems(d), ring_elems(d), ring_elems(d))))
def test_ring_axioms(triple):
    a, b, c = triple
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)


@given(descriptors.flatmap(lambda d: ring_elems(d, unit=True)))
def test_inverse_multiplies_to_one(a):
    assert a * ring_invert(a) == a.descriptor.one()


@given(descriptors.flatmap(lambda d: ring_elems(d, unit=True)))
def test_inverse_matches_symbolic_oracle(a):
    import sympy as sp
    want = ring_inverse(ring_to_sympy(a), orders_of(a.descriptor))
    assert sp.expand(ring_to_sympy(ring_invert(a)) - want) == 0


@given(descriptors.flatmap(lambda d: ring_elems(d, nilpotent=True)))
def test_nilpotent_order_by_explicit_powers(a):
    k = ring_nilpotent_order(a)
    assert k is not None and k <= a.descriptor.nilpotency_bound
    assert (a ** k).is_zero()
    if k > 1:
        assert not (a ** (k - 1)).is_zero()


@given(descriptors.flatmap(lambda d: st.tuples(ring_elems(d), ring_elems(d))))
def test_canonical_form(pair):
    a, b = pair
    for r in (a + b, a * b):
        assert all(c != 0 for c in r.terms.values())
        assert all(e < d for idx in r.terms for e, d in zip(idx, r.descriptor.orders))
        assert list(r.terms) == sorted(r.terms)
