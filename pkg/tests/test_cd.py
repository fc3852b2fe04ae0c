from hypothesis import given, settings, strategies as st

from conftest import parse
from loopvert.cd import (CDElement, GenMode, VacVector, basis_states, commutator_table, format_state,
                         generating_function_counts, is_normal_word, normal_order, vac_act, vac_basis)
from oracles import vac_graded_dimensions

g = GenMode
vac = VacVector.vacuum()

modes = st.builds(GenMode, st.sampled_from(["a", "a*", "b", "b*"]), st.integers(1, 2), st.integers(-3, 3))
words = st.lists(modes, max_size=6)
elements = st.lists(st.tuples(words, st.integers(-3, 3)), max_size=3).map(
    lambda ts: CDElement({tuple(w): c for w, c in ts}))


def test_bracket_table():
    assert commutator_table(g("a*", 1, 2), g("a", 1, -2)) == 1
    assert commutator_table(g("a", 1, -2), g("a*", 1, 2)) == -1
    assert commutator_table(g("a", 1, 2), g("b", 1, -2)) == 0
    assert commutator_table(g("b*", 1, 0), g("b", 2, 0)) == 0
    assert commutator_table(g("b*", 1, 0), g("b", 1, 0)) == 1
    assert commutator_table(g("b", 1, 0), g("b*", 1, 0)) == 1


def test_normal_order_examples():
    # [a*_m, a_n] = delta_{m,-n} puts the constant on the other side
    assert normal_order(parse("a[1,1] a*[1,-1]", "cd")) == parse("a*[1,-1] a[1,1] - 1", "cd")
    assert normal_order(parse("b[1,0] b[1,0]", "cd")) == CDElement()
    assert normal_order(parse("b[1,0] b*[1,0]", "cd")) == parse("1 - b*[1,0] b[1,0]", "cd")
    assert normal_order(parse("b*[1,0] b[1,0]", "cd")) == parse("b*[1,0] b[1,0]", "cd")


def test_module_action_examples():
    assert vac_act(g("a", 1, 0), vac).is_zero()
    assert vac_act(g("a*", 1, 1), parse("a[1,-1] |0>", "state")) == vac
    assert vac_act(g("a", 1, 5), vac).is_zero()
    assert vac_act(g("a*", 1, 0), vac) == parse("a*[1,0] |0>", "state")


def test_state_printing():
    v = VacVector.from_letters([g("b", 1, -2), g("a*", 1, -1)])
    assert format_state(v) == "a*[1,-1] b[1,-2] |0>"
    assert format_state(VacVector.from_letters([g("b", 1, -1), g("b", 1, -2)])) == "-b[1,-2] b[1,-1] |0>"


@settings(max_examples=200)
@given(words)
def test_confluence(word):
    x = CDElement.word(*word)
    left = normal_order(x, "leftmost")
    assert left == normal_order(x, "rightmost")
    assert all(is_normal_word(w) for w in left.terms)


@given(elements, elements)
def test_normal_order_is_multiplicative(x, y):
    assert normal_order(x * y) == normal_order(normal_order(x) * normal_order(y))


@settings(max_examples=40)
@given(words, words, st.sampled_from(basis_states(2, 2)))
def test_action_is_a_module(u, w, v):
    x, y = CDElement.word(*u), CDElement.word(*w)
    assert vac_act(x * y, v) == vac_act(x, vac_act(y, v))


@given(words, st.sampled_from(basis_states(1, 3)))
def test_action_factors_through_normal_order(word, v):
    x = CDElement.word(*word)
    assert vac_act(x, v) == vac_act(normal_order(x), v)


def test_basis_counts_match_generating_function():
    for d in (1, 2):
        want = vac_graded_dimensions(d, 4)
        assert generating_function_counts(d, 4) == want
        basis = vac_basis(d, 4)
        by_degree = [0] * 5
        for m in basis:
            by_degree[sum(map(_deg, m))] += 1
        assert by_degree == want


def _deg(x):
    return -x.n if x.kind in ("a", "b") else 1 - x.n
