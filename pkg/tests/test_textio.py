import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from loopvert.cd import VacVector, basis_states
from loopvert.chiral import DeltaElement
from loopvert.jets import phi_sharp, random_jet_map
from loopvert.multipoint import random_multipoint
from loopvert.scalars import RingDescriptor
from loopvert.series import NilLaurent
from loopvert.textio import (ExpressionTypeError, ParseError, Report, Session, Value, format_document, from_json,
                             parse_document, parse_expression, parse_report, parse_ring, to_json)
from strategies import fractions, nil_laurents, ring_elems

RING = RingDescriptor((3, 2))
S = Session(ring=RING, prec=3, jet=4, dim=2)
seeds = st.integers(0, 10**6)


def kind_of(text, **kw):
    return parse_expression(text, Session(**kw)).kind


def test_state_monomial():
    v = parse_expression("a*[1,-1] b[1,-2] |0>").value
    assert isinstance(v, VacVector) and len(v.terms) == 1


def test_series_with_nilpotent_pole():
    v = parse_expression("(1 + e1*t^-1)", Session(ring="Q[e1]/(e1^2)")).value
    assert isinstance(v, NilLaurent)
    assert str(v) == "1 + e1*t^-1"


def test_kinds_are_inferred():
    assert kind_of("e1*e2 + 1/2", ring="Q[e1,e2]/(e1^3,e2^2)") == "ring"
    assert kind_of("a[1,1] a*[1,-1]") == "cd"
    assert kind_of("{a[1,-1] |0>}*t2*d(1)") == "delta"
    assert kind_of("(x1 + x2^2, x2)", dim=2) == "jetmap"
    assert kind_of("(1 + 2*x)*dx") == "jet"
    assert kind_of("t + P") == "multipoint"
    assert kind_of("[1, e1]") == "list"


def test_syntax_errors_carry_positions():
    with pytest.raises(ParseError) as err:
        parse_expression("a*[1, -1 |0>")
    assert (err.value.line, err.value.column) == (1, 10)
    assert "expected ']'" in str(err.value)
    with pytest.raises(ParseError) as err:
        parse_expression("(1 + ")
    assert err.value.column == 6


def test_type_errors_name_both_kinds():
    with pytest.raises(ExpressionTypeError) as err:
        parse_expression("x*|0>")
    assert err.value.expected == "state"
    with pytest.raises(ExpressionTypeError):
        parse_expression("e3", Session(ring="Q[e1]/(e1^2)"))
    with pytest.raises(ExpressionTypeError):
        parse_expression("a[1,-1] |0>", None, "series")


def test_ring_descriptors():
    assert parse_ring("Q[e1,e2]/(e1^3,e2^2)") == RING
    assert str(parse_ring("Q")) == "Q"
    with pytest.raises(ParseError):
        parse_ring("Z[e1]")


def test_reports():
    assert parse_report("PASS 3/3") == Report(3, 3)
    assert not parse_report("FAIL 2/3").ok
    with pytest.raises(ParseError):
        parse_report("PASS 2/3")


def round_trip(value, kind, session=S):
    text = Value(kind, value).text(session)
    again = parse_expression(text, session, kind)
    assert again.text(session) == text
    return again.value


@given(ring_elems(RING))
def test_ring_round_trip(a):
    assert round_trip(a, "ring") == a


@given(nil_laurents(RING, prec=3, depth=2))
def test_series_round_trip(a):
    assert round_trip(a, "series") == a


@settings(max_examples=30)
@given(seeds)
def test_multipoint_round_trip(seed):
    s = Session(ring=RING, prec=2, points=(RING.scalar(0), RING.scalar(1)))
    a = random_multipoint(RING, random.Random(seed), list(s.points), 2)
    assert round_trip(a, "multipoint", s) == a


@given(st.lists(st.tuples(st.sampled_from(basis_states(2, 2)), fractions), max_size=4))
def test_state_round_trip(pairs):
    v = sum((b * c for b, c in pairs), VacVector())
    assert round_trip(v, "state") == v


@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.sampled_from(basis_states(1, 2)), fractions),
                max_size=3))
def test_delta_round_trip(items):
    x = DeltaElement({(m, p): v * c for m, p, v, c in items}, S.delta_prec)
    assert round_trip(x, "delta") == x


@settings(max_examples=20)
@given(seeds)
def test_jet_round_trips(seed):
    phi = random_jet_map(random.Random(seed), 2, 4)
    assert round_trip(phi, "jetmap") == phi
    for kind in ("x", "dx", "D", "xi"):
        elem = phi_sharp(phi).generator_image(kind, 1)
        assert round_trip(elem, "jet").agrees_mod(elem, S.jet)


@settings(max_examples=20)
@given(seeds)
def test_json_round_trip(seed):
    rng = random.Random(seed)
    phi = random_jet_map(rng, 2, 4)
    values = [Value("series", NilLaurent(RING, {-1: RING.gen(0), 0: 1}, 3)),
              Value("state", basis_states(2, 2)[rng.randrange(40)]),
              Value("jetmap", phi),
              Value("multipoint", random_multipoint(RING, rng, [RING.scalar(0), RING.scalar(2)], 2))]
    for v in values:
        data = json.loads(json.dumps(to_json(v, S)))
        assert from_json(data, S).text(S) == v.text(S)


def test_documents():
    text = "point1: 1 + e1*t^-1\nPASS 4/4\nFAIL 1/2\n"
    doc = parse_document(text, Session(ring="Q[e1]/(e1^2)"))
    assert [label for label, _ in doc] == ["point1", None, None]
    assert format_document(doc, Session(ring="Q[e1]/(e1^2)")) == text


def test_document_errors_point_at_the_line():
    with pytest.raises(ParseError) as err:
        parse_document("PASS 1/1\nlabel: a*[1, -1 |0>")
    assert err.value.line == 2
    assert err.value.column == 17
