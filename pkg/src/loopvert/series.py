"""Nil-Laurent series: Laurent series over R whose negative coefficients are nilpotent.

Coefficients are exact; each value carries the largest exponent ``prec`` up to
which it is known.  Multiplying by a series with a (nilpotent) polar part
lowers the known range, so products use
``min(prec_a + val_b, prec_b + val_a)`` where ``val`` is the lowest exponent
clipped at zero.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Mapping

from .scalars import NotAUnitError, RingDescriptor, RingElem, RingMismatchError, join_signed, monomial_label, format_fraction


class NotNilLaurentError(ValueError):
    """A negative-degree coefficient is not nilpotent."""


class NilLaurent:
    __slots__ = ("descriptor", "coeffs", "prec")

    def __init__(self, descriptor: RingDescriptor, coeffs: Mapping[int, RingElem] | None = None, prec: int = 0):
        self.descriptor = descriptor
        self.prec = int(prec)
        clean: dict[int, RingElem] = {}
        for e, c in (coeffs or {}).items():
            e = int(e)
            if e > self.prec:
                continue
            if not isinstance(c, RingElem):
                c = descriptor.scalar(c)
            elif c.descriptor != descriptor:
                raise RingMismatchError(f"{c.descriptor} vs {descriptor}")
            if c.is_zero():
                continue
            if e < 0 and not c.is_nilpotent():
                raise NotNilLaurentError(f"coefficient of t^{e} is not nilpotent: {c}")
            clean[e] = c
        self.coeffs = dict(sorted(clean.items()))

    # -- constructors
    @classmethod
    def constant(cls, descriptor: RingDescriptor, c, prec: int) -> "NilLaurent":
        return cls(descriptor, {0: c}, prec)

    @classmethod
    def monomial(cls, descriptor: RingDescriptor, c, exponent: int, prec: int) -> "NilLaurent":
        return cls(descriptor, {exponent: c}, prec)

    # -- structure
    @property
    def valuation(self) -> int:
        """Lowest exponent present, clipped at 0."""
        return min(0, min(self.coeffs, default=0))

    @property
    def lowest(self) -> int | None:
        return min(self.coeffs, default=None)

    def coeff(self, e: int) -> RingElem:
        return self.coeffs.get(e, self.descriptor.zero())

    def is_zero(self) -> bool:
        return not self.coeffs

    def truncate(self, prec: int) -> "NilLaurent":
        return NilLaurent(self.descriptor, self.coeffs, min(prec, self.prec))

    def with_prec(self, prec: int) -> "NilLaurent":
        """Reinterpret the stored coefficients as known up to ``prec`` (no checks)."""
        return NilLaurent(self.descriptor, self.coeffs, prec)

    # -- arithmetic
    def _coerce(self, other):
        if isinstance(other, NilLaurent):
            if other.descriptor != self.descriptor:
                raise RingMismatchError(f"{self.descriptor} vs {other.descriptor}")
            return other
        if isinstance(other, (int, Fraction)):
            return NilLaurent(self.descriptor, {0: self.descriptor.scalar(other)}, _INF)
        if isinstance(other, RingElem):
            if other.descriptor != self.descriptor:
                raise RingMismatchError(f"{self.descriptor} vs {other.descriptor}")
            return NilLaurent(self.descriptor, {0: other}, _INF)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prec = min(self.prec, other.prec)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out[e] + c if e in out else c
        return NilLaurent(self.descriptor, out, prec)

    __radd__ = __add__

    def __neg__(self):
        return NilLaurent(self.descriptor, {e: -c for e, c in self.coeffs.items()}, self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prec = min(self.prec + other.valuation, other.prec + self.valuation)
        return NilLaurent(self.descriptor, _raw_mul(self.coeffs, other.coeffs, prec), prec)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return nl_invert(self) ** (-k)
        result = NilLaurent(self.descriptor, {0: self.descriptor.one()}, _INF)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        """Equality of all coefficients up to the common precision."""
        other = self._coerce(other) if not isinstance(other, NilLaurent) else other
        if other is NotImplemented or not isinstance(other, NilLaurent):
            return NotImplemented
        if other.descriptor != self.descriptor:
            return False
        p = min(self.prec, other.prec)
        return ({e: c for e, c in self.coeffs.items() if e <= p}
                == {e: c for e, c in other.coeffs.items() if e <= p})

    __hash__ = None

    def __repr__(self):
        return f"NilLaurent({format_series(self)!r}, prec={self.prec})"

    def __str__(self):
        return format_series(self)


_INF = 10**9


def _raw_mul(a: Mapping[int, RingElem], b: Mapping[int, RingElem], prec: int) -> dict[int, RingElem]:
    out: dict[int, RingElem] = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = e1 + e2
            if e > prec:
                continue
            p = c1 * c2
            if p.is_zero():
                continue
            out[e] = out[e] + p if e in out else p
    return out


def nl_add(a: NilLaurent, b: NilLaurent) -> NilLaurent:
    return a + b


def nl_mul(a: NilLaurent, b: NilLaurent) -> NilLaurent:
    return a * b


def nl_reduce_red(a: NilLaurent) -> NilLaurent:
    """Image in R_red[[t]]: keep only the rational constant-index part."""
    z = a.descriptor.zero_index
    out = {e: a.descriptor.scalar(c.terms[z]) for e, c in a.coeffs.items() if z in c.terms}
    return NilLaurent(a.descriptor, out, a.prec)


def nl_is_invertible(a: NilLaurent) -> bool:
    if a.prec < 0:
        return False
    return a.coeff(0).is_unit()


def _invert_reduced(a: NilLaurent, prec: int) -> dict[int, RingElem]:
    """Inverse of a rational power series with nonzero constant term, up to t^prec."""
    z = a.descriptor.zero_index
    series = {e: c.terms[z] for e, c in a.coeffs.items() if z in c.terms and e >= 0}
    c0 = series.get(0, Fraction(0))
    if c0 == 0:
        raise NotAUnitError("reduced series has zero constant term")
    inv = [Fraction(1) / c0]
    for n in range(1, prec + 1):
        s = sum((series.get(k, Fraction(0)) * inv[n - k] for k in range(1, n + 1)), Fraction(0))
        inv.append(-s / c0)
    return {e: a.descriptor.scalar(v) for e, v in enumerate(inv) if v}


def nl_invert(a: NilLaurent, exact: bool = False) -> NilLaurent:
    """Inverse via  a * b0 = 1 + c  with c in sqrt(R)((t)), then sum (-c)^k.

    b0 inverts the reduced series; c has only nilpotent coefficients, so
    c**K == 0 for K the nilpotency bound of the ring and the geometric series
    stops after finitely many terms.

    With ``exact`` the stored coefficients of ``a`` are taken as an exact
    Laurent polynomial and the inverse is returned up to ``a.prec``; otherwise
    the unknown tail of ``a`` lowers the precision by twice the polar depth.
    """
    if not nl_is_invertible(a):
        raise NotAUnitError(f"constant coefficient of {a} is not a unit")
    desc = a.descriptor
    K = desc.nilpotency_bound
    depth = -a.valuation
    work = a.prec + 2 * K * depth + 2
    b0 = _invert_reduced(a, work)
    ab0 = _raw_mul(a.coeffs, b0, work)
    one = desc.one()
    ab0[0] = ab0.get(0, desc.zero()) - one
    neg_c = {e: -v for e, v in ab0.items() if not v.is_zero()}
    total = {0: one}
    power = {0: one}
    for _ in range(K + 1):
        power = _raw_mul(power, neg_c, work)
        if not power:
            break
        for e, v in power.items():
            total[e] = total[e] + v if e in total else v
    b = _raw_mul(b0, total, work)
    val_b = min(0, min((e for e, v in b.items() if not v.is_zero()), default=0))
    prec = a.prec if exact else a.prec + 2 * val_b
    return NilLaurent(desc, b, prec)


def mul_exact(a: NilLaurent, b: NilLaurent, prec: int) -> NilLaurent:
    """Product of the stored representatives, truncated at ``prec``."""
    return NilLaurent(a.descriptor, _raw_mul(a.coeffs, b.coeffs, prec), prec)


# -- formatting

def format_term(c: Fraction, idx, exponent: int, var: str = "t") -> tuple[bool, str]:
    label = monomial_label(idx)
    parts = []
    mag = abs(c)
    if mag != 1 or (not label and exponent == 0):
        parts.append(format_fraction(mag))
    if label:
        parts.append(label)
    if exponent == 1:
        parts.append(var)
    elif exponent != 0:
        parts.append(f"{var}^{exponent}")
    return c < 0, "*".join(parts)


def format_series(a: NilLaurent, var: str = "t") -> str:
    """Terms grouped by nilpotent monomial (lowest total degree first), then by exponent."""
    terms = [(sum(idx), idx, e, v) for e, c in a.coeffs.items() for idx, v in c.terms.items()]
    terms.sort(key=lambda x: x[:3])
    pieces = [format_term(v, idx, e, var) for _, idx, e, v in terms]
    return join_signed(pieces) if pieces else "0"


# -- random generation used by property suites

def random_ring_elem(desc: RingDescriptor, rng: random.Random, nilpotent: bool = False,
                     density: float = 0.5, span: int = 3) -> RingElem:
    terms = {}
    for idx in desc.indices():
        if nilpotent and idx == desc.zero_index:
            continue
        if rng.random() < density:
            num = rng.randint(-span, span)
            den = rng.choice([1, 1, 1, 2, 3])
            terms[idx] = Fraction(num, den)
    return RingElem(desc, terms)


def random_nil_laurent(desc: RingDescriptor, rng: random.Random, prec: int,
                       depth: int = 2, unit: bool | None = None) -> NilLaurent:
    coeffs = {}
    for e in range(-depth, prec + 1):
        coeffs[e] = random_ring_elem(desc, rng, nilpotent=e < 0)
    if unit is True and coeffs[0].is_nilpotent():
        coeffs[0] = coeffs[0] + rng.choice([1, -1, 2, Fraction(1, 2)])
    elif unit is False:
        coeffs[0] = coeffs[0].nilpotent_part()
    return NilLaurent(desc, coeffs, prec)
