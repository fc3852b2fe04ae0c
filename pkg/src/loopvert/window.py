"""Finite vacuum modules Vac^N_M and the maps between them.

The window algebra CD^N_M is generated by a_n, b_n with -N <= n <= M and by
a*_n, b*_n with -M <= n <= N.  Its vacuum 1^N_M is killed by every b*_n of
the window, so all the b_n of the window act freely; the bosonic letters
keep the creation/annihilation split of the full vacuum module.

Inside Vac the vector 1^N_M is realized by the filled sea
s_M * b*_{-M} ... b*_0 |0> (all directions), the sign s_M being fixed so
that growing M by one step sends 1_M to b_{M+1} 1_{M+1}.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .cd import GenMode, Monomial, VacVector, _enumerate, apply_word, state_sort_key


@dataclass(frozen=True)
class VacWindow:
    M: int
    N: int
    d: int = 1

    def __post_init__(self):
        if self.M < 0 or self.N < 0 or self.d < 1:
            raise ValueError("window bounds must be non-negative and d >= 1")

    def contains(self, other: "VacWindow") -> bool:
        return self.d == other.d and self.M >= other.M and self.N >= other.N

    def vac_letters(self) -> list[GenMode]:
        """Creation modes of Vac that the window algebra reaches."""
        out = []
        for i in range(1, self.d + 1):
            out += [GenMode("a", i, n) for n in range(-self.N, 0)]
            out += [GenMode("b", i, n) for n in range(-self.N, 0)]
            out += [GenMode("a*", i, n) for n in range(-self.M, 1)]
            out += [GenMode("b*", i, n) for n in range(-self.M, 1)]
        return out


def growth_word(M: int, M2: int, d: int) -> tuple[GenMode, ...]:
    """b_{M+1} ... b_{M'} taken over all directions, mode by mode."""
    return tuple(GenMode("b", i, n) for n in range(M + 1, M2 + 1) for i in range(1, d + 1))


def _sea(M: int, d: int) -> Monomial:
    return tuple(sorted((GenMode("b*", i, n) for i in range(1, d + 1) for n in range(-M, 1)),
                        key=lambda g: g.key))


@lru_cache(maxsize=None)
def sea_sign(M: int, d: int) -> Fraction:
    if M == 0:
        return Fraction(1)
    image = apply_word(growth_word(M - 1, M, d), VacVector({_sea(M, d): 1}))
    (mono, c), = image.terms.items()
    assert mono == _sea(M - 1, d)
    return sea_sign(M - 1, d) / c


def window_vacuum(w: VacWindow) -> VacVector:
    """Image of 1^N_M in Vac."""
    return VacVector({_sea(w.M, w.d): sea_sign(w.M, w.d)})


def to_vac(w: VacWindow, native: Monomial) -> VacVector:
    """Image in Vac of a native monomial applied to 1^N_M."""
    return apply_word(native, window_vacuum(w))


def native_from_vac(w: VacWindow, m: Monomial) -> Monomial:
    """The native monomial whose image is +-m (removed sea letters become b_n)."""
    letters = [g for g in m if g.kind != "b*"]
    present = {(g.i, g.n) for g in m if g.kind == "b*"}
    for i in range(1, w.d + 1):
        for n in range(0, w.M + 1):
            if (i, -n) not in present:
                letters.append(GenMode("b", i, n))
    return tuple(sorted(letters, key=lambda g: g.key))


def vac_window_basis(w: VacWindow, weight_cap: int) -> list[Monomial]:
    """Native monomials whose images have degree <= weight_cap, ordered by image."""
    if weight_cap < 0:
        return []
    images = _enumerate(w.vac_letters(), weight_cap)
    return [native_from_vac(w, m) for m in sorted(images, key=state_sort_key)]


def _sorted_with_sign(word: tuple[GenMode, ...]) -> tuple[Monomial | None, int]:
    letters = list(word)
    sign = 1
    for a in range(len(letters)):
        for b in range(len(letters) - 1 - a):
            x, y = letters[b], letters[b + 1]
            if x.key > y.key:
                letters[b], letters[b + 1] = y, x
                if x.odd and y.odd:
                    sign = -sign
    for x, y in zip(letters, letters[1:]):
        if x == y and x.odd:
            return None, 0
    return tuple(letters), sign


def vac_window_transition(w: VacWindow, w2: VacWindow, weight_cap: int) -> dict[Monomial, tuple[Monomial, int]]:
    """u 1^N_M  ->  u b_{M+1}...b_{M'} 1^{N'}_{M'} on the capped native basis.

    All native creation letters super-commute, so the image is the sorted word
    with its Koszul sign.
    """
    if not w2.contains(w):
        raise ValueError("target window must contain the source window")
    X = growth_word(w.M, w2.M, w.d)
    out = {}
    for u in vac_window_basis(w, weight_cap):
        mono, sign = _sorted_with_sign(u + X)
        if mono is None:
            raise ArithmeticError("transition image vanished")
        out[u] = (mono, sign)
    return out


def compose_transitions(first: dict, second: dict) -> dict:
    out = {}
    for u, (m, s) in first.items():
        m2, s2 = second[m]
        out[u] = (m2, s * s2)
    return out


def transition_is_injective(t: dict) -> bool:
    images = [m for m, _ in t.values()]
    return len(set(images)) == len(images)


def transition_matches_vac(w: VacWindow, w2: VacWindow, t: dict) -> bool:
    """Both windows embed into Vac compatibly with the transition."""
    return all(to_vac(w2, m) * s == to_vac(w, u) for u, (m, s) in t.items())
