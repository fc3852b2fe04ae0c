"""Tour of the beta-gamma/bc vacuum module: normal forms, n-th products, the differential.

Run: python demos/free_field_vertex_algebra.py
"""
from loopvert.cd import basis_states
from loopvert.textio import parse_expression
from loopvert.vertex import borcherds_check, locality_check, msv_differential, nth_product, translate


def state(text):
    return parse_expression(text, None, "state").value


a, astar, bstar = state("a[1,-1] |0>"), state("a*[1,0] |0>"), state("b*[1,0] |0>")

print("T a          =", translate(a))
print("T^2 a        =", translate(translate(a)))
for n in (-2, -1, 0, 1):
    print(f"a_({n}) a*    =", nth_product(a, n, astar))

print("delta b*     =", msv_differential(bstar))
print("delta a      =", msv_differential(a))
print("delta^2 a    =", msv_differential(msv_differential(a)))

small = basis_states(1, 2)
print("a, a* local at order 2:", locality_check(a, astar, 2, small))
print("a, a* local at order 0:", locality_check(a, astar, 0, small))

grid = range(-2, 3)
print("Borcherds on (a, a*, b*):",
      all(borcherds_check(a, astar, bstar, m, n, k) for m in grid for n in grid for k in grid))
