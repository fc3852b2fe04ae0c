import sys
from pathlib import Path

import pytest
import sympy as sp
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from loopvert.textio import Session, parse_expression  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

t = sp.Symbol("t")


def parse(text, expected=None, **session):
    return parse_expression(text, Session(**session), expected).value


def e_symbols(desc):
    return [sp.Symbol(f"e{k + 1}") for k in range(desc.nilpotent_count)]


def ring_to_sympy(a):
    es = e_symbols(a.descriptor)
    return sum((sp.Rational(c.numerator, c.denominator) * sp.Mul(*[e ** k for e, k in zip(es, idx)])
                for idx, c in a.terms.items()), sp.Integer(0))


def series_to_sympy(a):
    return sp.expand(sum((ring_to_sympy(c) * t ** e for e, c in a.coeffs.items()), sp.Integer(0)))


def orders_of(desc):
    return dict(zip(e_symbols(desc), desc.orders))


@pytest.fixture
def P():
    return parse
