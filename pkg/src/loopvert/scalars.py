"""Exact coefficient rings Q[e1..em]/(e1^d1, ..., em^dm)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping


class RingMismatchError(ValueError):
    pass


class NotAUnitError(ArithmeticError):
    pass


@dataclass(frozen=True)
class RingDescriptor:
    """Nilpotency orders of the generators: e_i ** orders[i] == 0."""

    orders: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(int(d) for d in self.orders))
        if any(d < 2 for d in self.orders):
            raise ValueError(f"nilpotency orders must be >= 2, got {self.orders}")

    @property
    def nilpotent_count(self) -> int:
        return len(self.orders)

    @property
    def zero_index(self) -> tuple[int, ...]:
        return (0,) * len(self.orders)

    @property
    def nilpotency_bound(self) -> int:
        """Every element of the radical vanishes at this power."""
        return 1 + sum(d - 1 for d in self.orders)

    def indices(self) -> list[tuple[int, ...]]:
        return sorted(product(*(range(d) for d in self.orders)))

    @property
    def dimension(self) -> int:
        n = 1
        for d in self.orders:
            n *= d
        return n

    def zero(self) -> "RingElem":
        return RingElem(self, {})

    def one(self) -> "RingElem":
        return RingElem(self, {self.zero_index: Fraction(1)})

    def scalar(self, c) -> "RingElem":
        return RingElem(self, {self.zero_index: Fraction(c)})

    def gen(self, k: int) -> "RingElem":
        """The nilpotent generator e_{k+1} (0-based k)."""
        idx = [0] * len(self.orders)
        idx[k] = 1
        return RingElem(self, {tuple(idx): Fraction(1)})

    def __str__(self):
        if not self.orders:
            return "Q"
        gens = ",".join(f"e{k + 1}" for k in range(len(self.orders)))
        rels = ",".join(f"e{k + 1}^{d}" for k, d in enumerate(self.orders))
        return f"Q[{gens}]/({rels})"


class RingElem:
    """Element of a truncated nilpotent ring, stored as index -> nonzero Fraction."""

    __slots__ = ("descriptor", "terms", "_hash")

    def __init__(self, descriptor: RingDescriptor, terms: Mapping[tuple[int, ...], object] | None = None):
        self.descriptor = descriptor
        clean: dict[tuple[int, ...], Fraction] = {}
        m = descriptor.nilpotent_count
        for idx, c in (terms or {}).items():
            idx = tuple(idx)
            if len(idx) != m:
                raise ValueError(f"multi-index {idx} has wrong length for {descriptor}")
            if any(e < 0 for e in idx):
                raise ValueError(f"negative exponent in {idx}")
            if any(e >= d for e, d in zip(idx, descriptor.orders)):
                continue
            c = Fraction(c)
            if c:
                clean[idx] = clean.get(idx, Fraction(0)) + c
        self.terms = {k: clean[k] for k in sorted(clean) if clean[k]}
        self._hash = None

    # -- construction helpers
    def _coerce(self, other) -> "RingElem":
        if isinstance(other, RingElem):
            if other.descriptor != self.descriptor:
                raise RingMismatchError(f"{self.descriptor} vs {other.descriptor}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.descriptor.scalar(other)
        return NotImplemented

    @property
    def constant(self) -> Fraction:
        return self.terms.get(self.descriptor.zero_index, Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def is_nilpotent(self) -> bool:
        return self.constant == 0

    def is_unit(self) -> bool:
        return self.constant != 0

    def nilpotent_part(self) -> "RingElem":
        z = self.descriptor.zero_index
        return RingElem(self.descriptor, {k: v for k, v in self.terms.items() if k != z})

    # -- arithmetic
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return RingElem(self.descriptor, out)

    __radd__ = __add__

    def __neg__(self):
        return RingElem(self.descriptor, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        orders = self.descriptor.orders
        out: dict[tuple[int, ...], Fraction] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                if any(e >= d for e, d in zip(k, orders)):
                    continue
                out[k] = out.get(k, Fraction(0)) + v1 * v2
        return RingElem(self.descriptor, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return ring_invert(self) ** (-k)
        result = self.descriptor.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * ring_invert(other)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.descriptor.scalar(other)
        if not isinstance(other, RingElem):
            return NotImplemented
        return self.descriptor == other.descriptor and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.descriptor, tuple(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"RingElem({format_ring_elem(self)!r})"

    def __str__(self):
        return format_ring_elem(self)


def ring_add(a: RingElem, b: RingElem) -> RingElem:
    return a + b


def ring_mul(a: RingElem, b: RingElem) -> RingElem:
    return a * b


def ring_nilpotent_order(a: RingElem) -> int | None:
    """Least k with a**k == 0, or None when a is a unit."""
    if a.is_unit():
        return None
    if a.is_zero():
        return 1
    k, p = 1, a
    while not p.is_zero():
        p = p * a
        k += 1
    return k


def ring_invert(a: RingElem) -> RingElem:
    c = a.constant
    if c == 0:
        raise NotAUnitError(f"{a} has zero constant term")
    n = a.nilpotent_part() * Fraction(-1, 1) * (1 / c)
    total = a.descriptor.one()
    term = a.descriptor.one()
    while True:
        term = term * n
        if term.is_zero():
            break
        total = total + term
    return total * (1 / c)


def monomial_label(idx: Iterable[int]) -> str:
    parts = []
    for k, e in enumerate(idx):
        if e == 1:
            parts.append(f"e{k + 1}")
        elif e > 1:
            parts.append(f"e{k + 1}^{e}")
    return "*".join(parts)


def format_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_ring_elem(a: RingElem) -> str:
    if a.is_zero():
        return "0"
    pieces: list[tuple[bool, str]] = []
    for idx, c in a.terms.items():
        label = monomial_label(idx)
        mag = abs(c)
        if not label:
            body = format_fraction(mag)
        elif mag == 1:
            body = label
        else:
            body = f"{format_fraction(mag)}*{label}"
        pieces.append((c < 0, body))
    return join_signed(pieces)


def join_signed(pieces: list[tuple[bool, str]]) -> str:
    out = ""
    for i, (neg, body) in enumerate(pieces):
        if i == 0:
            out = f"-{body}" if neg else body
        else:
            out += f" - {body}" if neg else f" + {body}"
    return out
