"""Independent reference computations, done symbolically with sympy.

Nothing here calls into loopvert's algorithms; the tests compare the library
against these and against values frozen from them.
"""
from __future__ import annotations

from fractions import Fraction

import sympy as sp

t, q, x = sp.symbols("t q x")


def _truncate(expr, orders: dict, tmax: int):
    """Drop e_i^k with k >= orders[e_i] and t-powers above tmax."""
    expr = sp.expand(expr)
    out = 0
    for term in sp.Add.make_args(expr):
        powers = term.as_powers_dict()
        if any(powers.get(e, 0) >= k for e, k in orders.items()):
            continue
        if powers.get(t, 0) > tmax:
            continue
        out += term
    return out


def nil_laurent_inverse(a, orders: dict, prec: int, depth: int):
    """Inverse of a nil-Laurent Laurent polynomial by the geometric series in
    u = a0^-1 (a - a0), truncated at t^prec."""
    a = sp.expand(a)
    a0 = sum((term for term in sp.Add.make_args(a) if term.as_powers_dict().get(t, 0) == 0), sp.Integer(0))
    # invert a0 in the nilpotent ring: a0 = c (1 + n)
    c = a0.subs({e: 0 for e in orders})
    n = sp.expand(a0 / c - 1)
    bound = sum(k - 1 for k in orders.values()) + 1
    a0_inv = sum(((-n) ** k for k in range(bound + 1)), sp.Integer(0)) / c
    a0_inv = _truncate(a0_inv, orders, 10**6)
    u = _truncate(a0_inv * (a - a0), orders, 10**6)
    cutoff = prec + depth * bound
    total, term = sp.Integer(1), sp.Integer(1)
    for _ in range(cutoff + bound + 2):
        term = _truncate(-term * u, orders, cutoff)
        if term == 0:
            break
        total += term
    return _truncate(total * a0_inv, orders, prec)


def ring_inverse(a, orders: dict):
    return nil_laurent_inverse(a, orders, 0, 0)


def lagrange_reversion(phi, J: int):
    """Compositional inverse of a one-variable series phi(x) = c x + ... up to x^J:
    psi_n = (1/n) [x^(n-1)] (x / phi(x))^n."""
    ratio = sp.series(x / phi, x, 0, J + 1).removeO()
    out = 0
    for n in range(1, J + 1):
        coeff = sp.expand(ratio ** n).coeff(x, n - 1)
        out += sp.Rational(1, n) * coeff * x ** n
    return sp.expand(out)


def vac_graded_dimensions(d: int, cap: int) -> list[int]:
    """prod_{w >= 1} ((1 + q^w) / (1 - q^w))^(2d), coefficients of q^0..q^cap.

    1 / (1 - q^w)^(2d) is expanded as sum_k C(k + 2d - 1, 2d - 1) q^(wk)."""
    def trunc(p):
        return sp.Poly(sum(c * q ** k for (k,), c in p.terms() if k <= cap), q)

    gf = sp.Poly(1, q)
    for w in range(1, cap + 1):
        num = sp.Poly((1 + q ** w) ** (2 * d), q)
        den = sp.Poly(sum(sp.binomial(k + 2 * d - 1, 2 * d - 1) * q ** (w * k) for k in range(cap // w + 1)), q)
        gf = trunc(trunc(gf * num) * den)
    return [int(gf.coeff_monomial(q ** k)) for k in range(cap + 1)]


def poly_divmod(num, den):
    return sp.div(sp.Poly(num, t), sp.Poly(den, t))


def series_coefficients(expr, var=x, upto: int = 6) -> list[Fraction]:
    s = sp.series(expr, var, 0, upto + 1).removeO()
    return [Fraction(str(sp.Rational(s.coeff(var, k) if k else s.subs(var, 0)))) for k in range(upto + 1)]
