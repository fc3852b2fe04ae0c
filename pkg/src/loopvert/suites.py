"""Property suites at acceptance size, shared by the CLI and the test-suite.

Each suite returns labelled Reports; a suite passes when every report does.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Callable, Iterable

from .cd import VacVector, apply_word, basis_states, generating_function_counts, vac_basis
from .chiral import GENERATOR_KINDS, chiral_vs_vertex, translation_compatible, unit_epsilon_check
from .jets import (JET_WORK_MARGIN, JetMap, invert_jet, inverse_round_trip, ope_preserved,
                   phi_sharp, random_jet_map, relations_hold)
from .loops import (EpsilonProfile, EtalePresentation, hensel_lift, is_loop_point, truncation_ring_maps)
from .multipoint import (expand_at_cluster, kappa_groups, mp_diagonal_nu, mp_factorize_kappa,
                         random_multipoint)
from .polys import Poly
from .scalars import RingDescriptor
from .series import (NilLaurent, mul_exact, nl_invert, nl_is_invertible, nl_reduce_red, random_nil_laurent,
                     random_ring_elem)
from .textio import Report
from .vertex import (borcherds_check, delta_is_derivation, delta_squared_vanishes, generator_states,
                     identity_field_holds, locality_check, translation_axiom_holds, vacuum_axioms_hold)
from .window import (VacWindow, compose_transitions, growth_word, transition_is_injective, transition_matches_vac,
                     vac_window_basis, vac_window_transition, window_vacuum)

Results = list[tuple[str, Report]]


def _count(checks: Iterable[bool]) -> Report:
    results = list(checks)
    return Report(sum(1 for r in results if r), len(results))


# -- 1. nil-Laurent invertibility

def invertibility_agrees(a: NilLaurent) -> tuple[bool, bool]:
    """(the three criteria agree, a * a^-1 == 1 when a is a unit)."""
    unit_a0 = a.coeff(0).is_unit()
    red = nl_reduce_red(a)
    reduced_ok = nl_is_invertible(red) and not red.is_zero()
    try:
        inv = nl_invert(a, exact=True)
        found = True
    except ArithmeticError:
        found = False
    agree = unit_a0 == reduced_ok == found
    product_ok = True
    if found:
        # a is an exact Laurent polynomial; its polar depth says how far the inverse is needed
        depth = max(0, -a.valuation)
        inv = nl_invert(a.with_prec(a.prec + depth), exact=True)
        product_ok = mul_exact(a, inv, a.prec) == NilLaurent.constant(a.descriptor, 1, a.prec)
    return agree, product_ok


def suite_nil_laurent(seed: int = 0, count: int = 200) -> Results:
    rng = random.Random(seed)
    desc = RingDescriptor((3, 2))
    agree, products = [], []
    for k in range(count):
        unit = None if k % 3 == 0 else (k % 3 == 1)
        a = random_nil_laurent(desc, rng, 4, unit=unit)
        g, p = invertibility_agrees(a)
        agree.append(g)
        products.append(p)
    return [("criteria-agree", _count(agree)), ("inverse-product", _count(products))]


# -- 2. Hensel lifting

def square_root_example() -> list[NilLaurent]:
    desc = RingDescriptor((2,))
    V = ("x", "y")
    x, y = Poly.var(V, "x"), Poly.var(V, "y")
    pres = EtalePresentation(("x",), ("y",), (y * y - 1 - x,))
    base = [NilLaurent(desc, {-1: desc.gen(0)}, 4)]
    return hensel_lift(pres, base, [NilLaurent.constant(desc, 1, 4)])


def random_etale_system(rng: random.Random, d: int, e: int):
    """f(x, y) = L (y - c) + quadratic terms + x-dependent terms vanishing at x = r.

    Returns (presentation, reduced base point r, fibre seed c).
    """
    xv = tuple(f"x{i + 1}" for i in range(d))
    yv = tuple(f"y{j + 1}" for j in range(e))
    V = xv + yv
    r = [Fraction(rng.randint(-2, 2)) for _ in range(d)]
    c = [Fraction(rng.choice([1, -1, 2, 3])) for _ in range(e)]
    X = [Poly.var(V, n) - r[i] for i, n in enumerate(xv)]
    Y = [Poly.var(V, n) - c[j] for j, n in enumerate(yv)]
    while True:
        L = [[Fraction(rng.randint(-2, 2)) for _ in range(e)] for _ in range(e)]
        if e == 1 and L[0][0] or e == 2 and L[0][0] * L[1][1] - L[0][1] * L[1][0]:
            break
    eqs = []
    for j in range(e):
        f = Poly.const(V, 0)
        for k in range(e):
            f = f + Y[k] * L[j][k]
        f = f + Y[rng.randrange(e)] * Y[rng.randrange(e)] * rng.randint(-1, 1)
        f = f + X[rng.randrange(d)] * rng.randint(-2, 2)
        f = f + X[rng.randrange(d)] * Y[rng.randrange(e)] * rng.randint(-1, 1)
        eqs.append(f)
    return EtalePresentation(xv, yv, tuple(eqs)), r, c


def suite_hensel(seed: int = 0, count: int = 50) -> Results:
    rng = random.Random(seed)
    desc = RingDescriptor((2, 2))
    ys = square_root_example()
    d0 = ys[0].descriptor
    example = ys[0] == NilLaurent(d0, {0: d0.one(), -1: d0.gen(0) * Fraction(1, 2)}, 4)
    solved, congruent = [], []
    for _ in range(count):
        d, e = rng.randint(1, 2), rng.randint(1, 2)
        pres, r, c = random_etale_system(rng, d, e)
        base = [NilLaurent.constant(desc, ri, 3) + _nil_part(desc, rng) for ri in r]
        seed1 = [NilLaurent.constant(desc, cj, 3) for cj in c]
        seed2 = [s + NilLaurent(desc, {rng.randint(-1, 2): random_ring_elem(desc, rng, nilpotent=True)}, 3)
                 for s in seed1]
        lift = hensel_lift(pres, base, seed1)
        solved.append(is_loop_point(base + lift, pres))
        congruent.append(hensel_lift(pres, base, seed2) == lift)
    return [("sqrt-example", _count([example])), ("lift-solves", _count(solved)),
            ("congruent-seeds", _count(congruent))]


def _nil_part(desc, rng) -> NilLaurent:
    return NilLaurent(desc, {k: random_ring_elem(desc, rng, nilpotent=True) for k in range(-2, 3)}, 3)


# -- 3. Cartesian squares

def all_truncation_squares(max_entry: int = 2, max_n: int = 2, dims=(1, 2)):
    profiles = [EpsilonProfile(dict(zip((-1, -2), v))) for v in itertools.product(range(max_entry + 1), repeat=2)]
    for E in profiles:
        for E2 in profiles:
            if not E <= E2:
                continue
            for n in range(max_n + 1):
                for n2 in range(n, max_n + 1):
                    for d in dims:
                        yield (d, E, E2, n, n2), truncation_ring_maps(d, E, E2, n, n2)


def square_ok(sq) -> bool:
    maps = (sq.to_quotient, sq.to_extended, sq.quotient_to_opposite, sq.extended_to_opposite)
    return all(m.is_well_defined() for m in maps) and sq.commutes() and sq.is_pushout()


def suite_squares(seed: int = 0) -> Results:
    return [("pushout", _count(square_ok(sq) for _, sq in all_truncation_squares()))]


# -- 4. vacuum stabilization

def suite_vacuum(seed: int = 0, cap: int = 4, sizes=(4, 5, 6)) -> Results:
    full = len(vac_basis(1, cap))
    gf = sum(generating_function_counts(1, cap))
    dims = [len(vac_window_basis(VacWindow(M, N), cap)) == full == gf
            for M in sizes for N in sizes]
    chain = [VacWindow(s, s) for s in sizes]
    inj, vac, comp = [], [], []
    for w, w2 in zip(chain, chain[1:]):
        t = vac_window_transition(w, w2, cap)
        inj.append(transition_is_injective(t))
        vac.append(transition_matches_vac(w, w2, t))
    direct = vac_window_transition(chain[0], chain[-1], cap)
    steps = compose_transitions(vac_window_transition(chain[0], chain[1], cap),
                                vac_window_transition(chain[1], chain[2], cap))
    comp.append(direct == steps)
    unit_images = []
    for w, w2 in zip(chain, chain[1:]):
        unit_images.append(apply_word(growth_word(w.M, w2.M, 1), window_vacuum(w2)) == window_vacuum(w))
    return [("stable-dimension", _count(dims)), ("injective", _count(inj)), ("vac-compatible", _count(vac)),
            ("composition", _count(comp)), ("vacuum-image", _count(unit_images))]


# -- 5. vertex axioms

def suite_vertex(seed: int = 0, triples: int = 100, weight: int = 3, d_max: int = 2) -> Results:
    vacuum, translation, locality = [], [], []
    for d in range(1, d_max + 1):
        gens = generator_states(d)
        tests = basis_states(d, 2)
        for a in gens:
            vacuum.append(vacuum_axioms_hold(a) and identity_field_holds(a))
            translation.append(translation_axiom_holds(a, tests, range(-2, 3)))
            for b in gens:
                locality.append(locality_check(a, b, 2, tests, modes=range(-2, 3)))
    out = [("vacuum", _count(vacuum)), ("translation", _count(translation)), ("locality", _count(locality))]
    out.append(("borcherds", borcherds_report(seed, triples, weight)))
    return out


def borcherds_report(seed: int = 0, triples: int = 100, weight: int = 3, d: int = 1,
                     grid=range(-3, 4)) -> Report:
    rng = random.Random(seed)
    basis = basis_states(d, weight)
    grid = list(grid)
    ok = []
    for _ in range(triples):
        a, b, c = (rng.choice(basis) for _ in range(3))
        ok.append(all(borcherds_check(a, b, c, m, n, k) for m in grid for n in grid for k in grid))
    return _count(ok)


# -- 6. the differential

def suite_differential(seed: int = 0, samples: int = 50) -> Results:
    rng = random.Random(seed)
    squares = [delta_squared_vanishes(d, 4) for d in (1, 2)]
    basis = basis_states(1, 2) + basis_states(2, 1)
    deriv = []
    for _ in range(samples):
        a = rng.choice(basis)
        b = rng.choice([v for v in basis if _dim(v) == _dim(a)])
        deriv.append(delta_is_derivation(a, b, rng.randint(-2, 2)))
    return [("delta-squared", _count(squares)), ("derivation", _count(deriv))]


def _dim(v: VacVector) -> int:
    return max((g.i for m in v.terms for g in m), default=1)


# -- 7. chiral versus vertex

def suite_chiral(seed: int = 0, weight: int = 3, P: int = 8) -> Results:
    rng = random.Random(seed)
    basis = basis_states(1, weight)
    agree = [chiral_vs_vertex((kind, 1), n, b, P) for kind in GENERATOR_KINDS for n in range(-3, 4) for b in basis]
    small = basis_states(1, 2)
    unit = [unit_epsilon_check(v, P) for v in small]
    unit += [unit_epsilon_check(rng.choice(small) * Fraction(rng.randint(1, 3)) + rng.choice(small), P)
             for _ in range(10)]
    trans = [translation_compatible((kind, 1), n, b, P) for kind in GENERATOR_KINDS for n in range(-2, 3)
             for b in small]
    return [("chiral-vs-vertex", _count(agree)), ("unit", _count(unit)), ("translation", _count(trans))]


# -- 8. coordinate changes

def suite_jets(seed: int = 0, count: int = 20) -> Results:
    rng = random.Random(seed)
    relations, inverse, states, negative = [], [], [], []
    for k in range(count):
        d = 1 if k % 2 == 0 else 2
        J = rng.randint(3, 6) if d == 1 else rng.randint(3, 4)
        phi = random_jet_map(rng, d, J, order=J + JET_WORK_MARGIN)
        relations.append(relations_hold(phi_sharp(phi, J)))
        psi = invert_jet(phi)
        ident = JetMap.identity(d, J, J + JET_WORK_MARGIN)
        inverse.append(phi.compose(psi) == ident and psi.compose(phi) == ident)
        states.append(inverse_round_trip(phi, J) and all(ope_preserved(phi, J).values()))
        negative.append(not relations_hold(phi_sharp(phi, J, drop_correction=True)))
    return [("relations", _count(relations)), ("inverse", _count(inverse)),
            ("generator-states", _count(states)), ("negative-control", _count(negative))]


# -- 9. factorization shadow

def _separated_points(desc, rng, n: int):
    reds = rng.sample(range(-3, 4), n)
    return [desc.scalar(r) + random_ring_elem(desc, rng, nilpotent=True, density=0.3) for r in reds]


def suite_factorization(seed: int = 0, pairs: int = 100, squares: int = 50) -> Results:
    rng = random.Random(seed)
    desc = RingDescriptor((2,))
    hom = []
    for _ in range(pairs):
        pts = _separated_points(desc, rng, 2)
        x, y = random_multipoint(desc, rng, pts, 3), random_multipoint(desc, rng, pts, 3)
        fx, fy, fxy = mp_factorize_kappa(x), mp_factorize_kappa(y), mp_factorize_kappa(x * y)
        hom.append(all(u * v == w for u, v, w in zip(fx, fy, fxy)))
    sq = []
    for _ in range(squares):
        c = desc.scalar(rng.randint(-2, 2)) + random_ring_elem(desc, rng, nilpotent=True, density=0.5)
        far = c + desc.scalar(rng.choice([1, -1, 2, 3]))
        pts = [c, c, far]
        z = random_multipoint(desc, rng, pts, 2)
        A = [mp_diagonal_nu(g) for g in kappa_groups(z, [[0, 1], [2]])]
        B = [expand_at_cluster(z, [0, 1]), expand_at_cluster(z, [2])]
        sq.append(all(p == q for p, q in zip(A, B)))
    return [("kappa-homomorphism", _count(hom)), ("nu-kappa-square", _count(sq))]


SUITES: dict[str, Callable[..., Results]] = {
    "nil-laurent": suite_nil_laurent,
    "hensel": suite_hensel,
    "squares": suite_squares,
    "vacuum": suite_vacuum,
    "vertex": suite_vertex,
    "differential": suite_differential,
    "chiral": suite_chiral,
    "jets": suite_jets,
    "factorization": suite_factorization,
}


def run_suite(name: str, seed: int = 0) -> Results:
    if name == "all":
        out = []
        for key, fn in SUITES.items():
            out += [(f"{key}-{label}", r) for label, r in fn(seed)]
        return out
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from all, {', '.join(SUITES)}")
    return SUITES[name](seed)
