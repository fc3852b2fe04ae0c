"""Multivariate polynomials with rational coefficients and named variables."""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .scalars import format_fraction, join_signed


class Poly:
    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple[int, ...], object] | None = None):
        self.variables = tuple(variables)
        clean: dict[tuple[int, ...], Fraction] = {}
        for mono, c in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != len(self.variables):
                raise ValueError(f"exponent vector {mono} does not match {self.variables}")
            c = Fraction(c)
            if c:
                clean[mono] = clean.get(mono, Fraction(0)) + c
        self.terms = {m: clean[m] for m in sorted(clean) if clean[m]}

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "Poly":
        idx = list(variables).index(name)
        mono = tuple(1 if k == idx else 0 for k in range(len(variables)))
        return cls(variables, {mono: 1})

    @classmethod
    def const(cls, variables: Sequence[str], c) -> "Poly":
        return cls(variables, {(0,) * len(variables): c})

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.variables != self.variables:
                raise ValueError("polynomials over different variable lists")
            return other
        return Poly.const(self.variables, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return Poly(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.variables, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return Poly(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.const(self.variables, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, tuple(self.terms.items())))

    @property
    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def derivative(self, name: str) -> "Poly":
        k = self.variables.index(name)
        out = {}
        for m, c in self.terms.items():
            if m[k]:
                mm = list(m)
                mm[k] -= 1
                out[tuple(mm)] = c * m[k]
        return Poly(self.variables, out)

    def evaluate(self, values: Sequence, one, mul: Callable | None = None):
        """Substitute values (any ring-like objects) for the variables.

        ``one`` is the ring unit; scalars are multiplied onto it.  ``mul`` lets
        callers supply a truncating product.
        """
        mul = mul or (lambda a, b: a * b)
        total = one * 0
        for m, c in self.terms.items():
            term = one * c
            for v, e in zip(values, m):
                for _ in range(e):
                    term = mul(term, v)
            total = total + term
        return total

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for m in sorted(self.terms, key=lambda m: (sum(m), tuple(-e for e in m))):
            c = self.terms[m]
            factors = []
            for name, e in zip(self.variables, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mag = abs(c)
            if mag != 1 or not factors:
                factors.insert(0, format_fraction(mag))
            pieces.append((c < 0, "*".join(factors)))
        return join_signed(pieces)

    def __repr__(self):
        return f"Poly({str(self)!r}, vars={self.variables})"
