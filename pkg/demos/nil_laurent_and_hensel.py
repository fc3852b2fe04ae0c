"""Invert a Laurent series with a nilpotent pole, then lift a square root by Newton's method.

Run: python demos/nil_laurent_and_hensel.py
"""
from loopvert.series import mul_exact, nl_invert, nl_is_invertible
from loopvert.suites import square_root_example
from loopvert.textio import Session, parse_expression

s = Session(ring="Q[e1,e2]/(e1^3,e2^2)", prec=3)

a = parse_expression("1 + e1*t^-1 + e2*t^-2", s).value
print("a          =", a)
print("invertible =", nl_is_invertible(a))

# the pole has depth 2, so the inverse is taken two orders deeper before checking a * a^-1
inv = nl_invert(a.with_prec(a.prec + 2), exact=True)
print("a^-1       =", inv)
print("a * a^-1   =", mul_exact(a, inv, a.prec))

# a nilpotent leading term cannot be inverted
b = parse_expression("e1 + t", s).value
print(b, "invertible?", nl_is_invertible(b))

# y^2 = 1 + x at x = e t^-1, seeded at y = 1
(y,) = square_root_example()
print("sqrt(1 + e*t^-1) =", y)
