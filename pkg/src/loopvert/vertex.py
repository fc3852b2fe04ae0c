"""Vertex superalgebra structure on the vacuum module.

The field of a normal monomial L_1 ... L_r |0> is the mode-normal-ordered
product of derivatives of the free fields

    a(z) = sum a_m z^(-m-1),   a*(z) = sum a*_m z^(-m),

and the same for b, b*.  A creation letter X_c is the k-th divided derivative
of the generator, k = -c - h with h = 1 for a, b and h = 0 for a*, b*, so

    d^(k) X(z) = sum_m C(-m-h, k) X_m z^(-m-h-k).

u_(n) v collects the modes with sum m_j = n + 1 + sum c_j, creation modes to
the left of annihilation modes with Koszul signs, applied to v.  Every
annihilation mode must meet its partner inside v, which keeps the sum finite.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from .cd import (GenMode, Monomial, VacVector, apply_word, basis_states, is_creator,
                 mode_partner, monomial_parity, monomial_weight)
from .multipoint import gen_binom


def _h(g: GenMode) -> int:
    return 0 if g.starred else 1


def generator_states(d: int) -> list[VacVector]:
    """a_{i,-1}|0>, a*_{i,0}|0>, b_{i,-1}|0>, b*_{i,0}|0> for i = 1..d."""
    out = []
    for i in range(1, d + 1):
        for kind, n in (("a", -1), ("a*", 0), ("b", -1), ("b*", 0)):
            out.append(VacVector({(GenMode(kind, i, n),): 1}))
    return out


def state_weight(v: VacVector) -> int:
    return max((monomial_weight(m) for m in v.terms), default=0)


def state_parity(v: VacVector) -> int | None:
    """0 or 1 for homogeneous states, None for mixed ones (zero counts as even)."""
    ps = {monomial_parity(m) for m in v.terms}
    if len(ps) > 1:
        return None
    return ps.pop() if ps else 0


# -- translation

def _translate_letter(g: GenMode) -> tuple[GenMode, int]:
    """[T, X_m] = -(m + h - 1) X_{m-1}: a_m -> -m a_{m-1}, a*_m -> (1-m) a*_{m-1}."""
    return GenMode(g.kind, g.i, g.n - 1), -(g.n + _h(g) - 1)


@lru_cache(maxsize=None)
def _translate_monomial(m: Monomial) -> tuple:
    total = VacVector()
    for j, g in enumerate(m):
        ng, c = _translate_letter(g)
        if c:
            total = total + VacVector.from_letters(m[:j] + (ng,) + m[j + 1:], c)
    return tuple(total.terms.items())


def translate(v: VacVector) -> VacVector:
    """The translation operator T: a derivation with T|0> = 0."""
    out = VacVector()
    for m, c in v.terms.items():
        out = out + VacVector(dict(_translate_monomial(m))) * c
    return out


def translate_power(v: VacVector, k: int) -> VacVector:
    """Divided power T^(k) v = T^k v / k!."""
    out = v
    for j in range(1, k + 1):
        out = translate(out) * Fraction(1, j)
    return out


# -- n-th products

def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _koszul_sign(order: Sequence[int], letters: Sequence[GenMode]) -> int:
    """Sign of reordering the field factors into ``order``, counting odd swaps."""
    odd_positions = [p for p in order if letters[p].odd]
    inv = 0
    for x in range(len(odd_positions)):
        for y in range(x + 1, len(odd_positions)):
            if odd_positions[x] > odd_positions[y]:
                inv += 1
    return -1 if inv % 2 else 1


@lru_cache(maxsize=None)
def _monomial_product(u: Monomial, n: int, v: Monomial) -> tuple:
    if n >= monomial_weight(u) + monomial_weight(v):
        return ()
    r = len(u)
    if r == 0:
        return ((v, Fraction(1)),) if n == -1 else ()
    target = VacVector({v: 1})
    S = n + 1 + sum(g.n for g in u)
    # per letter: None (creation mode) or one of the annihilation modes meeting v
    options = []
    for g in u:
        anns = sorted({mode_partner(h).n for h in v if mode_partner(h).kind == g.kind and h.i == g.i
                       and not is_creator(GenMode(g.kind, g.i, mode_partner(h).n))})
        options.append([None] + anns)
    out: dict = {}
    for choice in product(*options):
        ann_sum = sum(m for m in choice if m is not None)
        creators = [j for j, m in enumerate(choice) if m is None]
        deficit = sum(u[j].n for j in creators) - (S - ann_sum)
        if deficit < 0:
            continue
        annihilators = [j for j, m in enumerate(choice) if m is not None]
        for deltas in _compositions(deficit, len(creators)):
            modes = list(choice)
            for j, dlt in zip(creators, deltas):
                modes[j] = u[j].n - dlt
            coeff = Fraction(1)
            for j, g in enumerate(u):
                k = -g.n - _h(g)
                coeff *= gen_binom(-modes[j] - _h(g), k)
                if not coeff:
                    break
            if not coeff:
                continue
            letters = [GenMode(g.kind, g.i, modes[j]) for j, g in enumerate(u)]
            order = creators + annihilators
            sign = _koszul_sign(order, letters)
            res = apply_word([letters[p] for p in order], target)
            f = coeff * sign
            for mono, c in res.terms.items():
                out[mono] = out[mono] + c * f if mono in out else c * f
    return tuple((mono, c) for mono, c in out.items() if c)


def nth_product(a: VacVector, n: int, b: VacVector) -> VacVector:
    """a_(n) b, bilinear over the monomial expansion of both states."""
    out: dict = {}
    for mu, cu in a.terms.items():
        for mv, cv in b.terms.items():
            for m, c in _monomial_product(mu, n, mv):
                out[m] = out[m] + c * cu * cv if m in out else c * cu * cv
    return VacVector._raw(out)


def product_bound(a: VacVector, b: VacVector) -> int:
    """a_(n) b = 0 for every n >= this bound (conformal weights are >= 0)."""
    return state_weight(a) + state_weight(b)


# -- the differential

def msv_differential(v: VacVector) -> VacVector:
    """delta = sum_{i,n} a*_{i,n} b_{i,-n}, summed over the finitely many n that act."""
    out = VacVector()
    for m, c in v.terms.items():
        ns = set()
        for g in m:
            if g.kind == "a" and g.n < 0:
                ns.add((g.i, -g.n))
            elif g.kind == "b*":
                ns.add((g.i, g.n))
        single = VacVector({m: c})
        for i, n in sorted(ns):
            out = out + apply_word((GenMode("a*", i, n), GenMode("b", i, -n)), single)
    return out


# -- axiom checkers

def _sign(pa: int, pb: int) -> int:
    return -1 if (pa and pb) else 1


def vacuum_axioms_hold(a: VacVector, window: int = 4) -> bool:
    vac = VacVector.vacuum()
    if nth_product(a, -1, vac) != a:
        return False
    if any(not nth_product(a, n, vac).is_zero() for n in range(0, window + 1)):
        return False
    return translate(vac).is_zero()


def identity_field_holds(v: VacVector, window: int = 4) -> bool:
    vac = VacVector.vacuum()
    return all(nth_product(vac, n, v) == (v if n == -1 else VacVector()) for n in range(-window, window + 1))


def translation_axiom_holds(a: VacVector, tests: Iterable[VacVector], modes: Iterable[int]) -> bool:
    """(Ta)_(n) = -n a_(n-1) and [T, a_(n)] = -n a_(n-1) on test states."""
    Ta = translate(a)
    tests = list(tests)
    for n in modes:
        for c in tests:
            rhs = nth_product(a, n - 1, c) * (-n)
            if nth_product(Ta, n, c) != rhs:
                return False
            if translate(nth_product(a, n, c)) - nth_product(a, n, translate(c)) != rhs:
                return False
    return True


def locality_check(a: VacVector, b: VacVector, N: int, tests: Iterable[VacVector],
                   modes: Iterable[int] = range(-3, 4)) -> bool:
    """sum_j (-1)^j C(N, j) [a_(m+N-j), b_(k+j)] = 0 on every test state."""
    pa, pb = state_parity(a), state_parity(b)
    if pa is None or pb is None:
        raise ValueError("locality is checked on parity-homogeneous states")
    s = _sign(pa, pb)
    modes = list(modes)
    tests = list(tests)
    for c in tests:
        for m in modes:
            for k in modes:
                total = VacVector()
                for j in range(N + 1):
                    x = nth_product(a, m + N - j, nth_product(b, k + j, c))
                    y = nth_product(b, k + j, nth_product(a, m + N - j, c))
                    total = total + (x - y * s) * ((-1) ** j * gen_binom(N, j))
                if not total.is_zero():
                    return False
    return True


def borcherds_sides(a: VacVector, b: VacVector, c: VacVector, m: int, n: int, k: int) -> tuple[VacVector, VacVector]:
    """Both sides of

        sum_j C(m, j) (a_(n+j) b)_(m+k-j) c
          = sum_j (-1)^j C(n, j) [a_(m+n-j) b_(k+j) c - (-1)^n p b_(n+k-j) a_(m+j) c]

    with p = (-1)^(|a||b|).  Each sum is cut where the products vanish.
    """
    pa, pb = state_parity(a), state_parity(b)
    if pa is None or pb is None:
        raise ValueError("Borcherds identity is checked on parity-homogeneous states")
    p = _sign(pa, pb)
    wa, wb, wc = state_weight(a), state_weight(b), state_weight(c)
    lhs = VacVector()
    for j in range(0, max(0, wa + wb - n) + 1):
        ab = nth_product(a, n + j, b)
        if ab.is_zero():
            continue
        lhs = lhs + nth_product(ab, m + k - j, c) * gen_binom(m, j)
    top = n if n >= 0 else max(0, wb + wc - k, wa + wc - m)
    rhs = VacVector()
    for j in range(0, top + 1):
        cn = gen_binom(n, j) * (-1) ** j
        if not cn:
            continue
        first = nth_product(a, m + n - j, nth_product(b, k + j, c))
        second = nth_product(b, n + k - j, nth_product(a, m + j, c))
        rhs = rhs + (first - second * ((-1) ** (n % 2) * p)) * cn
    return lhs, rhs


def borcherds_check(a: VacVector, b: VacVector, c: VacVector, m: int, n: int, k: int) -> bool:
    lhs, rhs = borcherds_sides(a, b, c, m, n, k)
    return lhs == rhs


def skew_symmetry_holds(a: VacVector, b: VacVector, n: int) -> bool:
    """b_(n) a = -p sum_j (-1)^(n+j) T^(j) (a_(n+j) b)."""
    pa, pb = state_parity(a), state_parity(b)
    p = _sign(pa, pb)
    rhs = VacVector()
    for j in range(0, max(0, product_bound(a, b) - n) + 1):
        rhs = rhs + translate_power(nth_product(a, n + j, b), j) * ((-1) ** ((n + j) % 2))
    return nth_product(b, n, a) == rhs * (-p)


def delta_is_derivation(a: VacVector, b: VacVector, n: int) -> bool:
    """delta(a_(n) b) = (delta a)_(n) b + (-1)^|a| a_(n) (delta b)."""
    pa = state_parity(a)
    lhs = msv_differential(nth_product(a, n, b))
    rhs = nth_product(msv_differential(a), n, b) + nth_product(a, n, msv_differential(b)) * (-1 if pa else 1)
    return lhs == rhs


def delta_squared_vanishes(d: int, cap: int) -> bool:
    return all(msv_differential(msv_differential(v)).is_zero() for v in basis_states(d, cap))
