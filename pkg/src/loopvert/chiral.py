"""Two-point delta calculus and the chiral product with a generator in the first slot.

A DeltaElement is a finite sum  sum_{m,p} v_{m,p} t2^p d^(m)delta(t1 - t2),  where
d^(m)delta stands for the class of (t1 - t2)^(-m-1) modulo regular series.
Functions of t1 are absorbed by writing t1 = t2 + u, u = t1 - t2, and dropping
the non-negative powers of u; t2-powers above the precision P are dropped.
"""
from __future__ import annotations

from math import comb
from typing import Iterable, Mapping

from .cd import GenMode, VacVector, apply_letter
from .vertex import nth_product, translate, product_bound, state_weight

GENERATOR_KINDS = ("a", "a*", "b", "b*")


class DeltaElement:
    __slots__ = ("terms", "P")

    def __init__(self, terms: Mapping[tuple[int, int], VacVector] | None = None, P: int = 8):
        self.P = int(P)
        clean = {}
        for (m, p), v in (terms or {}).items():
            if m < 0:
                raise ValueError("delta derivative order must be >= 0")
            if p < 0 or p > self.P or v.is_zero():
                continue
            clean[(m, p)] = clean[(m, p)] + v if (m, p) in clean else v
        self.terms = {k: clean[k] for k in sorted(clean) if not clean[k].is_zero()}

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "DeltaElement") -> "DeltaElement":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return DeltaElement(out, min(self.P, other.P))

    def __neg__(self):
        return DeltaElement({k: -v for k, v in self.terms.items()}, self.P)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "DeltaElement":
        return DeltaElement({k: v * c for k, v in self.terms.items()}, self.P)

    def __eq__(self, other):
        if not isinstance(other, DeltaElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def map_states(self, f) -> "DeltaElement":
        return DeltaElement({k: f(v) for k, v in self.terms.items()}, self.P)

    def __str__(self):
        return format_delta(self)

    def __repr__(self):
        return f"DeltaElement({format_delta(self)!r})"


def format_delta(x: DeltaElement) -> str:
    if x.is_zero():
        return "0"
    parts = []
    for (m, p), v in x.terms.items():
        body = "{" + str(v) + "}"
        if p:
            body += f"*t2^{p}"
        parts.append(f"{body}*d({m})")
    return " + ".join(parts)


def delta_term(v: VacVector, q1: int, q2: int, k: int, P: int) -> DeltaElement:
    """Canonical form of  v * t1^q1 * t2^q2 * (t1 - t2)^k."""
    if q1 < 0 or q2 < 0:
        raise ValueError("only polynomial t1, t2 factors are allowed")
    out = {}
    for j in range(q1 + 1):
        e = j + k
        if e >= 0:
            break
        m = -e - 1
        p = q1 - j + q2
        w = v * comb(q1, j)
        out[(m, p)] = out[(m, p)] + w if (m, p) in out else w
    return DeltaElement(out, P)


def delta_canonicalize(raw: Iterable[tuple[VacVector, int, int, int]], P: int = 8) -> DeltaElement:
    """Sum of raw terms (v, q1, q2, k) meaning v t1^q1 t2^q2 (t1 - t2)^k."""
    total = DeltaElement({}, P)
    for v, q1, q2, k in raw:
        total = total + delta_term(v, q1, q2, k, P)
    return total


def mul_u(x: DeltaElement, k: int = 1) -> DeltaElement:
    """Multiply by (t1 - t2)^k, k >= 0: d^(m)delta -> d^(m-k)delta, vanishing below 0."""
    return DeltaElement({(m - k, p): v for (m, p), v in x.terms.items() if m - k >= 0}, x.P)


def mul_t1(x: DeltaElement, q: int = 1) -> DeltaElement:
    total = DeltaElement({}, x.P)
    for (m, p), v in x.terms.items():
        total = total + delta_term(v, q, p, -m - 1, x.P)
    return total


def mul_t2(x: DeltaElement, q: int = 1) -> DeltaElement:
    return DeltaElement({(m, p + q): v for (m, p), v in x.terms.items()}, x.P)


def d_t1(x: DeltaElement) -> DeltaElement:
    """d/dt1 of t2^p (t1-t2)^(-m-1) = -(m+1) t2^p (t1-t2)^(-m-2)."""
    return DeltaElement({(m + 1, p): v * (-(m + 1)) for (m, p), v in x.terms.items()}, x.P)


def d_t2(x: DeltaElement) -> DeltaElement:
    out = DeltaElement({(m + 1, p): v * (m + 1) for (m, p), v in x.terms.items()}, x.P)
    return out + DeltaElement({(m, p - 1): v * p for (m, p), v in x.terms.items() if p > 0}, x.P)


def total_derivative(x: DeltaElement) -> DeltaElement:
    """d/dt1 + d/dt2: only the t2-polynomial coefficient is differentiated."""
    return d_t1(x) + d_t2(x)


def translate_states(x: DeltaElement) -> DeltaElement:
    return x.map_states(translate)


# -- the chiral product

def generator_state(kind: str, i: int) -> VacVector:
    n = 0 if kind.endswith("*") else -1
    return VacVector({(GenMode(kind, i, n),): 1})


def _mode_for(kind: str, i: int, m: int) -> GenMode:
    """The mode multiplying d^(m-n)delta: X_m for a, b and X*_{m+1} for a*, b*."""
    return GenMode(kind, i, m + 1 if kind.endswith("*") else m)


def mu_generator(n: int, gen: tuple[str, int], b: VacVector, P: int = 8, q: int = 0, p: int = 0) -> DeltaElement:
    """mu((t1 - t2)^n (g t1^q) [x] (b t2^p)) = sum_{m >= n} X_m b t1^q t2^p d^(m-n)delta.

    Modes acting on b vanish once m exceeds the weight of b plus one, so the
    sum is finite.
    """
    kind, i = gen
    top = state_weight(b) + 2
    total = DeltaElement({}, P)
    for m in range(n, max(n, top) + 1):
        v = apply_letter(_mode_for(kind, i, m), b)
        if not v.is_zero():
            total = total + delta_term(v, q, p, -(m - n) - 1, P)
    return total


def mu_vertex(n: int, a: VacVector, b: VacVector, P: int = 8, q: int = 0, p: int = 0) -> DeltaElement:
    """Vertex-side value  sum_j a_(j) b (t2 + u)^q t2^p u^(n-j-1), polar part only."""
    total = DeltaElement({}, P)
    for j in range(n, max(n, product_bound(a, b)) + 1):
        v = nth_product(a, j, b)
        if not v.is_zero():
            total = total + delta_term(v, q, p, n - j - 1, P)
    return total


def mu_vertex_translated(n: int, a: VacVector, b: VacVector, P: int = 8) -> DeltaElement:
    """Vertex side with first slot T a, using (T a)_(j) = -j a_(j-1)."""
    total = DeltaElement({}, P)
    for j in range(n, max(n, product_bound(a, b) + 1) + 1):
        v = nth_product(a, j - 1, b) * (-j)
        if not v.is_zero():
            total = total + delta_term(v, 0, 0, n - j - 1, P)
    return total


def chiral_vs_vertex(gen: tuple[str, int], n: int, b: VacVector, P: int = 8, q: int = 0, p: int = 0) -> bool:
    kind, i = gen
    return mu_generator(n, gen, b, P, q, p) == mu_vertex(n, generator_state(kind, i), b, P, q, p)


def translation_compatible(gen: tuple[str, int], n: int, b: VacVector, P: int = 8) -> bool:
    """T applied to mu(u^n g [x] b) equals mu(u^n g [x] T b) + mu(u^n T g [x] b)."""
    kind, i = gen
    lhs = translate_states(mu_generator(n, gen, b, P))
    rhs = mu_generator(n, gen, translate(b), P) + mu_vertex_translated(n, generator_state(kind, i), b, P)
    return lhs == rhs


def unit_epsilon_check(v: VacVector, P: int = 8, n: int = -1, p: int = 0) -> bool:
    """mu((t1 - t2)^n 1 [x] v t2^p) equals the canonical image of v t2^p (t1 - t2)^n."""
    vac = VacVector.vacuum()
    return mu_vertex(n, vac, v, P, 0, p) == delta_term(v, 0, p, n, P)
