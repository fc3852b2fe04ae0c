"""Heisenberg-Clifford algebra on modes a, a*, b, b* and its vacuum module.

Relations: [a*_{i,m}, a_{j,n}] = delta_ij delta_{m,-n} and
{b*_{i,m}, b_{j,n}} = delta_ij delta_{m,-n}; every other pair of letters
super-commutes.  Creation modes are a_n, b_n with n < 0 and a*_n, b*_n with
n <= 0; the remaining modes kill the vacuum |0>.

States are written as left-module elements, i.e. words applied to |0>.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from .scalars import format_fraction, join_signed

KINDS = ("a*", "b*", "a", "b")
KIND_ORDER = {k: r for r, k in enumerate(KINDS)}
PARTNER = {"a": "a*", "a*": "a", "b": "b*", "b*": "b"}


class GenMode(NamedTuple):
    kind: str
    i: int
    n: int

    @property
    def odd(self) -> bool:
        return self.kind in ("b", "b*")

    @property
    def starred(self) -> bool:
        return self.kind.endswith("*")

    @property
    def key(self) -> tuple[int, int, int]:
        return (KIND_ORDER[self.kind], self.i, self.n)

    def __str__(self):
        return f"{self.kind}[{self.i},{self.n}]"


def gen(kind: str, i: int, n: int) -> GenMode:
    if kind not in KIND_ORDER:
        raise ValueError(f"unknown generator kind {kind!r}")
    if i < 1:
        raise ValueError(f"direction index must be >= 1, got {i}")
    return GenMode(kind, int(i), int(n))


def is_creator(g: GenMode) -> bool:
    return g.n <= 0 if g.starred else g.n < 0


def degree(g: GenMode) -> int:
    """Grading with every creation mode in degree >= 1: -n for a, b and 1 - n for a*, b*."""
    return 1 - g.n if g.starred else -g.n


def conformal_weight(g: GenMode) -> int:
    return -g.n


def charge(g: GenMode) -> int:
    return {"a*": 1, "a": -1}.get(g.kind, 0)


def commutator_table(g: GenMode, h: GenMode) -> Fraction:
    """The scalar super-bracket [g, h] (an anticommutator when both are odd)."""
    if g.i != h.i or g.n != -h.n or PARTNER[g.kind] != h.kind:
        return Fraction(0)
    if g.kind == "a":
        return Fraction(-1)
    return Fraction(1)


def mode_partner(g: GenMode) -> GenMode:
    """The unique letter with a nonzero bracket against g."""
    return GenMode(PARTNER[g.kind], g.i, -g.n)


def _odd_count(word: Iterable[GenMode]) -> int:
    return sum(1 for g in word if g.odd)


# -- words in the algebra

Word = tuple  # tuple of GenMode


class CDElement:
    """Q-linear combination of words in the modes."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, object] | None = None):
        clean: dict[Word, Fraction] = {}
        for w, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                w = tuple(w)
                clean[w] = clean.get(w, Fraction(0)) + c
        self.terms = {w: c for w, c in clean.items() if c}

    @classmethod
    def word(cls, *letters: GenMode, coeff=1) -> "CDElement":
        return cls({tuple(letters): coeff})

    @classmethod
    def scalar(cls, c) -> "CDElement":
        return cls({(): c})

    def __add__(self, other: "CDElement") -> "CDElement":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, Fraction(0)) + c
        return CDElement(out)

    def __neg__(self):
        return CDElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CDElement({w: c * other for w, c in self.terms.items()})
        out: dict[Word, Fraction] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = out.get(w, Fraction(0)) + c1 * c2
        return CDElement(out)

    def __rmul__(self, other):
        return CDElement({w: c * other for w, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, CDElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for w in sorted(self.terms, key=lambda w: (len(w), [g.key for g in w])):
            c = self.terms[w]
            body = " ".join(str(g) for g in w)
            mag = abs(c)
            if not body:
                body = format_fraction(mag)
            elif mag != 1:
                body = f"{format_fraction(mag)} {body}"
            pieces.append((c < 0, body))
        return join_signed(pieces)

    __repr__ = __str__


def _out_of_order(x: GenMode, y: GenMode) -> bool:
    cx, cy = is_creator(x), is_creator(y)
    if cx != cy:
        return cy
    return x.key > y.key or (x == y and x.odd)


def is_normal_word(word: Word) -> bool:
    return not any(_out_of_order(word[k], word[k + 1]) for k in range(len(word) - 1))


def _rewrite_at(word: Word, k: int) -> list[tuple[Word, Fraction]]:
    """xy -> (+-) yx + [x, y] at position k."""
    x, y = word[k], word[k + 1]
    if x == y and x.odd:
        return []
    sign = Fraction(-1) if (x.odd and y.odd) else Fraction(1)
    out = [(word[:k] + (y, x) + word[k + 2:], sign)]
    br = commutator_table(x, y)
    if br:
        out.append((word[:k] + word[k + 2:], br))
    return out


def normal_order(x: CDElement, strategy: str = "leftmost") -> CDElement:
    """Creation modes to the left, annihilation modes to the right, each block sorted."""
    if strategy == "leftmost":
        out: dict[Word, Fraction] = {}
        for w, c in x.terms.items():
            for nw, nc in _normal_word(w).items():
                out[nw] = out.get(nw, Fraction(0)) + c * nc
        return CDElement(out)
    if strategy != "rightmost":
        raise ValueError(f"unknown strategy {strategy!r}")
    pending = dict(x.terms)
    done: dict[Word, Fraction] = {}
    while pending:
        w, c = pending.popitem()
        ks = [k for k in range(len(w) - 1) if _out_of_order(w[k], w[k + 1])]
        if not ks:
            done[w] = done.get(w, Fraction(0)) + c
            continue
        for nw, nc in _rewrite_at(w, ks[-1]):
            pending[nw] = pending.get(nw, Fraction(0)) + c * nc
    return CDElement(done)


@lru_cache(maxsize=None)
def _normal_word_cached(word: Word) -> tuple:
    for k in range(len(word) - 1):
        if _out_of_order(word[k], word[k + 1]):
            out: dict[Word, Fraction] = {}
            for nw, nc in _rewrite_at(word, k):
                for w2, c2 in _normal_word_cached(nw):
                    out[w2] = out.get(w2, Fraction(0)) + nc * c2
            return tuple((w, c) for w, c in out.items() if c)
    return ((word, Fraction(1)),)


def _normal_word(word: Word) -> dict[Word, Fraction]:
    return dict(_normal_word_cached(tuple(word)))


# -- the vacuum module

Monomial = tuple  # sorted tuple of creation GenModes


class VacVector:
    """Linear combination of normal monomials applied to |0>."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean: dict[Monomial, Fraction] = {}
        for m, c in (terms or {}).items():
            if c.__class__ is not Fraction:
                c = Fraction(c)
            if c:
                m = tuple(m)
                clean[m] = clean[m] + c if m in clean else c
        self.terms = {m: c for m, c in clean.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "VacVector":
        """Trusted constructor: Fraction coefficients, zeros are dropped here."""
        v = cls.__new__(cls)
        v.terms = {m: c for m, c in terms.items() if c}
        v._hash = None
        return v

    @classmethod
    def vacuum(cls) -> "VacVector":
        return cls({(): 1})

    @classmethod
    def zero(cls) -> "VacVector":
        return cls()

    @classmethod
    def from_letters(cls, letters: Sequence[GenMode], coeff=1) -> "VacVector":
        """Creation letters in any order applied to |0>, normalized with signs."""
        v = cls({(): coeff})
        for g in reversed(list(letters)):
            if not is_creator(g):
                raise ValueError(f"{g} is not a creation mode")
            v = apply_letter(g, v)
        return v

    def is_zero(self) -> bool:
        return not self.terms

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self.terms.items())

    def __add__(self, other: "VacVector") -> "VacVector":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return VacVector._raw(out)

    def __neg__(self):
        return VacVector._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] - c if m in out else -c
        return VacVector._raw(out)

    def __mul__(self, c):
        if not isinstance(c, (int, Fraction)):
            return NotImplemented
        return VacVector._raw({m: v * c for m, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, VacVector):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __str__(self):
        return format_state(self)

    def __repr__(self):
        return f"VacVector({format_state(self)!r})"


def monomial_degree(m: Monomial) -> int:
    return sum(degree(g) for g in m)


def monomial_weight(m: Monomial) -> int:
    return sum(conformal_weight(g) for g in m)


def monomial_parity(m: Monomial) -> int:
    return _odd_count(m) % 2


def state_sort_key(m: Monomial):
    return (monomial_degree(m), len(m), [g.key for g in m])


def format_state(v: VacVector) -> str:
    if v.is_zero():
        return "0"
    pieces = []
    for m in sorted(v.terms, key=state_sort_key):
        c = v.terms[m]
        body = " ".join([str(g) for g in m] + ["|0>"])
        mag = abs(c)
        if mag != 1:
            body = f"{format_fraction(mag)} {body}"
        pieces.append((c < 0, body))
    return join_signed(pieces)


@lru_cache(maxsize=None)
def _letter_on_monomial(g: GenMode, m: Monomial) -> tuple:
    if is_creator(g):
        pos = 0
        while pos < len(m) and m[pos].key < g.key:
            pos += 1
        if g.odd and pos < len(m) and m[pos] == g:
            return ()
        while pos < len(m) and m[pos] == g:
            pos += 1
        sign = -1 if (g.odd and _odd_count(m[:pos]) % 2) else 1
        return ((m[:pos] + (g,) + m[pos:], Fraction(sign)),)
    out: dict[Monomial, Fraction] = {}
    odd_before = 0
    for j, h in enumerate(m):
        br = commutator_table(g, h)
        if br:
            sign = -1 if (g.odd and odd_before % 2) else 1
            nm = m[:j] + m[j + 1:]
            out[nm] = out.get(nm, Fraction(0)) + sign * br
        if h.odd:
            odd_before += 1
    return tuple((k, v) for k, v in out.items() if v)


def apply_letter(g: GenMode, v: VacVector) -> VacVector:
    out: dict[Monomial, Fraction] = {}
    for m, c in v.terms.items():
        for nm, nc in _letter_on_monomial(g, m):
            out[nm] = out[nm] + c * nc if nm in out else c * nc
    return VacVector._raw(out)


def apply_word(word: Sequence[GenMode], v: VacVector) -> VacVector:
    for g in reversed(tuple(word)):
        if v.is_zero():
            break
        v = apply_letter(g, v)
    return v


def vac_act(x, v: VacVector) -> VacVector:
    """Module action of a mode, a word, or a CDElement on a state."""
    if isinstance(x, GenMode):
        return apply_letter(x, v)
    if isinstance(x, CDElement):
        total = VacVector()
        for w, c in x.terms.items():
            total = total + apply_word(w, v) * c
        return total
    return apply_word(tuple(x), v)


# -- enumeration of normal monomials

def creators_of_degree(w: int, d: int) -> list[GenMode]:
    out = []
    for i in range(1, d + 1):
        out += [GenMode("a", i, -w), GenMode("a*", i, 1 - w), GenMode("b", i, -w), GenMode("b*", i, 1 - w)]
    return sorted(out, key=lambda g: g.key)


def _enumerate(letters: Sequence[GenMode], cap: int) -> list[Monomial]:
    """Sorted monomials in the given creation letters with total degree <= cap."""
    letters = sorted(letters, key=lambda g: g.key)
    out: list[Monomial] = []

    def rec(start: int, prefix: list[GenMode], budget: int):
        out.append(tuple(prefix))
        for k in range(start, len(letters)):
            g = letters[k]
            w = degree(g)
            if w > budget:
                continue
            prefix.append(g)
            rec(k + 1 if g.odd else k, prefix, budget - w)
            prefix.pop()

    if cap >= 0:
        rec(0, [], cap)
    return sorted(out, key=state_sort_key)


def vac_basis(d: int, cap: int) -> list[Monomial]:
    """All normal monomials of degree <= cap."""
    letters = [g for w in range(1, cap + 1) for g in creators_of_degree(w, d)]
    return _enumerate(letters, cap)


def basis_states(d: int, cap: int) -> list[VacVector]:
    return [VacVector({m: 1}) for m in vac_basis(d, cap)]


def generating_function_counts(d: int, cap: int) -> list[int]:
    """Coefficients of prod_{w>=1} ((1+q^w)/(1-q^w))^(2d) up to q^cap."""
    series = [1] + [0] * cap
    for w in range(1, cap + 1):
        for _ in range(2 * d):
            # multiply by 1/(1 - q^w)
            for k in range(w, cap + 1):
                series[k] += series[k - w]
            # multiply by (1 + q^w)
            for k in range(cap, w - 1, -1):
                series[k] += series[k - w]
    return series
