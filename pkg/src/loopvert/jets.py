"""Formal coordinate changes on jets of affine space.

Power series in x_1..x_d are truncated at a total degree; a JetMap is a tuple of
such series with no constant term and an invertible linear part.
"""
from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb
from typing import Mapping, Sequence

from .cd import GenMode, VacVector
from .scalars import format_fraction, join_signed
from .vertex import nth_product, translate_power


class TruncSeries:
    """Power series in d variables modulo total degree > order."""

    __slots__ = ("d", "order", "terms")

    def __init__(self, d: int, order: int, terms: Mapping[tuple[int, ...], object] | None = None):
        self.d = d
        self.order = order
        clean: dict[tuple[int, ...], Fraction] = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != d:
                raise ValueError(f"exponent {e} has wrong length for d={d}")
            if sum(e) > order:
                continue
            if c.__class__ is not Fraction:
                c = Fraction(c)
            if c:
                clean[e] = clean[e] + c if e in clean else c
        self.terms = {e: clean[e] for e in sorted(clean) if clean[e]}

    @classmethod
    def const(cls, d: int, order: int, c) -> "TruncSeries":
        return cls(d, order, {(0,) * d: c})

    @classmethod
    def var(cls, d: int, order: int, i: int) -> "TruncSeries":
        """The coordinate x_{i+1} (0-based i)."""
        return cls(d, order, {tuple(1 if k == i else 0 for k in range(d)): 1})

    def _lift(self, other) -> "TruncSeries":
        if isinstance(other, TruncSeries):
            return other
        return TruncSeries.const(self.d, self.order, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return TruncSeries(self.d, min(self.order, other.order), out)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(self.d, self.order, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TruncSeries(self.d, self.order, {e: c * other for e, c in self.terms.items()})
        order = min(self.order, other.order)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            s1 = sum(e1)
            for e2, c2 in other.terms.items():
                if s1 + sum(e2) > order:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out[e] + c1 * c2 if e in out else c1 * c2
        return TruncSeries(self.d, order, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = TruncSeries.const(self.d, self.order, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._lift(other)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        p = min(self.order, other.order)
        return self.truncate(p).terms == other.truncate(p).terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def truncate(self, order: int) -> "TruncSeries":
        return TruncSeries(self.d, min(order, self.order), self.terms)

    def with_order(self, order: int) -> "TruncSeries":
        return TruncSeries(self.d, order, self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def constant(self) -> Fraction:
        return self.terms.get((0,) * self.d, Fraction(0))

    def derivative(self, i: int) -> "TruncSeries":
        """d/dx_{i+1}; the result is known to one degree less."""
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ee = list(e)
                ee[i] -= 1
                out[tuple(ee)] = c * e[i]
        return TruncSeries(self.d, self.order - 1, out)

    def derivative_multi(self, r: Sequence[int]) -> "TruncSeries":
        out = self
        for i, k in enumerate(r):
            for _ in range(k):
                out = out.derivative(i)
        return out

    def compose(self, subs: Sequence["TruncSeries"]) -> "TruncSeries":
        """f(g_1, ..., g_d) for series g_i without constant term."""
        if len(subs) != self.d:
            raise ValueError("need one substitution per variable")
        if any(g.constant for g in subs):
            raise ValueError("substituted series must vanish at 0")
        d2 = subs[0].d
        order = min(min(g.order for g in subs), self.order)
        cache: dict[tuple[int, int], TruncSeries] = {}

        def power(i, k):
            if (i, k) not in cache:
                cache[(i, k)] = TruncSeries.const(d2, order, 1) if k == 0 else power(i, k - 1) * subs[i]
            return cache[(i, k)]

        total = TruncSeries(d2, order, {})
        for e, c in self.terms.items():
            term = TruncSeries.const(d2, order, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            total = total + term
        return total

    def invert(self) -> "TruncSeries":
        """1/f for a unit f, by the geometric series on the non-constant part."""
        c0 = self.constant
        if not c0:
            raise ArithmeticError("series with zero constant term is not a unit")
        n = (self - c0) * (Fraction(-1) / c0)
        total = TruncSeries.const(self.d, self.order, 1)
        term = total
        for _ in range(self.order):
            term = term * n
            if term.is_zero():
                break
            total = total + term
        return total * (Fraction(1) / c0)

    def __str__(self):
        return format_series_x(self)

    def __repr__(self):
        return f"TruncSeries({str(self)!r}, order={self.order})"


def variable_names(d: int) -> list[str]:
    return [f"x{i + 1}" for i in range(d)] if d > 1 else ["x"]


def format_series_x(f: TruncSeries, names: Sequence[str] | None = None) -> str:
    names = list(names or variable_names(f.d))
    if not f.terms:
        return "0"
    pieces = []
    for e in sorted(f.terms, key=lambda e: (sum(e), tuple(-k for k in e))):
        c = f.terms[e]
        factors = []
        for name, k in zip(names, e):
            if k == 1:
                factors.append(name)
            elif k > 1:
                factors.append(f"{name}^{k}")
        mag = abs(c)
        if mag != 1 or not factors:
            factors.insert(0, format_fraction(mag))
        pieces.append((c < 0, "*".join(factors)))
    return join_signed(pieces)


# -- jet maps

class JetMap:
    __slots__ = ("d", "J", "components")

    def __init__(self, components: Sequence[TruncSeries], J: int):
        comps = list(components)
        if not comps:
            raise ValueError("a jet map needs at least one component")
        self.d = comps[0].d
        self.J = J
        if len(comps) != self.d:
            raise ValueError("number of components must equal the dimension")
        self.components = tuple(comps)
        if any(c.constant for c in self.components):
            raise ValueError("jet map must send 0 to 0")
        if linear_part_det(self) == 0:
            raise ArithmeticError("jet map has a singular linear part")

    @classmethod
    def identity(cls, d: int, J: int, order: int | None = None) -> "JetMap":
        order = J if order is None else order
        return cls([TruncSeries.var(d, order, i) for i in range(d)], J)

    def at_order(self, order: int) -> "JetMap":
        return JetMap([c.with_order(order) for c in self.components], self.J)

    def __call__(self, subs: Sequence[TruncSeries]) -> list[TruncSeries]:
        return [c.compose(subs) for c in self.components]

    def compose(self, other: "JetMap") -> "JetMap":
        """(self o other)(x) = self(other(x))."""
        return JetMap(self(list(other.components)), min(self.J, other.J))

    def jacobian(self) -> list[list[TruncSeries]]:
        """Entries d phi_i / d x_j."""
        return [[c.derivative(j) for j in range(self.d)] for c in self.components]

    def __eq__(self, other):
        if not isinstance(other, JetMap):
            return NotImplemented
        J = min(self.J, other.J)
        return self.d == other.d and all(a.truncate(J) == b.truncate(J)
                                         for a, b in zip(self.components, other.components))

    def __hash__(self):
        return hash(tuple(c.truncate(self.J) for c in self.components))

    def __str__(self):
        return format_jet_map(self)

    def __repr__(self):
        return f"JetMap({format_jet_map(self)!r}, J={self.J})"


def format_jet_map(phi: JetMap) -> str:
    return "(" + ", ".join(format_series_x(c.truncate(phi.J)) for c in phi.components) + ")"


def _linear_matrix(phi: JetMap) -> list[list[Fraction]]:
    d = phi.d
    return [[c.terms.get(tuple(1 if k == j else 0 for k in range(d)), Fraction(0)) for j in range(d)]
            for c in phi.components]


def _det(m: list[list[Fraction]]) -> Fraction:
    m = [row[:] for row in m]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] / m[col][col]
            m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return det


def _inverse_rational(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def linear_part_det(phi: JetMap) -> Fraction:
    return _det(_linear_matrix(phi))


def invert_series_matrix(m: list[list[TruncSeries]]) -> list[list[TruncSeries]]:
    """Inverse of a matrix of power series whose constant part is invertible."""
    n = len(m)
    d, order = m[0][0].d, min(x.order for row in m for x in row)
    one = TruncSeries.const(d, order, 1)
    zero = TruncSeries(d, order, {})
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col].constant), None)
        if piv is None:
            raise ArithmeticError("matrix is not invertible")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col].invert()
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def invert_jet(phi: JetMap) -> JetMap:
    """psi with phi(psi(x)) = x, by the fixed point psi = L^-1 (x - N(psi)).

    Here phi = L x + N(x) with N of order >= 2; each pass fixes one more degree.
    """
    d = phi.d
    order = max(c.order for c in phi.components)
    Linv = _inverse_rational(_linear_matrix(phi))
    xs = [TruncSeries.var(d, order, i) for i in range(d)]
    lin = _linear_matrix(phi)
    nonlinear = []
    for i, c in enumerate(phi.components):
        n = c
        for j in range(d):
            n = n - xs[j] * lin[i][j]
        nonlinear.append(n)

    def apply_Linv(vec):
        return [sum((vec[j] * Linv[i][j] for j in range(d)), TruncSeries(d, order, {})) for i in range(d)]

    psi = apply_Linv(xs)
    for _ in range(order):
        nl = [n.compose(psi) for n in nonlinear]
        psi = apply_Linv([x - v for x, v in zip(xs, nl)])
    return JetMap(psi, phi.J)


def random_jet_map(rng: random.Random, d: int, J: int, order: int | None = None, density: float = 0.5) -> JetMap:
    """Random jet map with invertible linear part and at least one nonlinear term."""
    order = J if order is None else order
    while True:
        comps = []
        for i in range(d):
            terms = {}
            for e in product(range(J + 1), repeat=d):
                s = sum(e)
                if s == 0 or s > J:
                    continue
                if s == 1:
                    if e[i] == 1:
                        terms[e] = rng.choice([1, 2, -1, Fraction(1, 2)])
                    elif rng.random() < 0.3:
                        terms[e] = rng.randint(-2, 2)
                elif rng.random() < density:
                    terms[e] = Fraction(rng.randint(-3, 3), rng.choice([1, 1, 2]))
            comps.append(TruncSeries(d, order, terms))
        if J >= 2 and all(sum(e) < 2 for c in comps for e in c.terms):
            sq = tuple(2 if k == 0 else 0 for k in range(d))
            comps[0] = comps[0] + TruncSeries(d, order, {sq: rng.choice([1, -1, 2])})
        try:
            return JetMap(comps, J)
        except ArithmeticError:
            continue


# -- the jet version of the chiral differential operator algebra
#
# Generated over truncated series in x by odd dx_i, even D_i (= d/dx_i) and odd
# xi_i with [D_i, f] = d_i f and {xi_i, dx_j} = delta_ij.  Normal terms are
# f * dx_S * D^r * xi_T with S, T strictly increasing.

JET_WORK_MARGIN = 4
SHARP_COMPOSITION_ORDER = "contravariant"  # (phi o chi)# = chi# o phi#

JetKey = tuple  # (S, r, T)


@lru_cache(maxsize=None)
def _clifford_nf(word: tuple[tuple[str, int], ...]) -> tuple:
    """Normal form of a word in dx ('d', i) and xi ('x', i): dx's first, increasing."""
    for k in range(len(word) - 1):
        (t1, i1), (t2, i2) = word[k], word[k + 1]
        if t1 == t2:
            if i1 == i2:
                return ()
            if i1 < i2:
                continue
            swapped = word[:k] + (word[k + 1], word[k]) + word[k + 2:]
            return tuple((w, -c) for w, c in _clifford_nf(swapped))
        if t1 == "d":
            continue
        out: dict = {}
        swapped = word[:k] + (word[k + 1], word[k]) + word[k + 2:]
        for w, c in _clifford_nf(swapped):
            out[w] = out.get(w, 0) - c
        if i1 == i2:
            for w, c in _clifford_nf(word[:k] + word[k + 2:]):
                out[w] = out.get(w, 0) + c
        return tuple((w, c) for w, c in out.items() if c)
    dxs = tuple(i for t, i in word if t == "d")
    xis = tuple(i for t, i in word if t == "x")
    return (((dxs, xis), 1),)


def _merge_sorted(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[tuple[int, ...] | None, int]:
    """Sorted concatenation of two odd index lists with its Koszul sign."""
    if set(a) & set(b):
        return None, 0
    inv = sum(1 for x in a for y in b if x > y)
    return tuple(sorted(a + b)), -1 if inv % 2 else 1


def _multi_indices_below(r: tuple[int, ...]):
    return product(*(range(k + 1) for k in r))


class JetCDElement:
    __slots__ = ("d", "terms")

    def __init__(self, d: int, terms: Mapping[JetKey, TruncSeries] | None = None):
        self.d = d
        clean: dict = {}
        for key, f in (terms or {}).items():
            if f.is_zero():
                continue
            clean[key] = clean[key] + f if key in clean else f
        self.terms = {k: clean[k] for k in sorted(clean) if not clean[k].is_zero()}

    # constructors
    @classmethod
    def function(cls, f: TruncSeries) -> "JetCDElement":
        return cls(f.d, {((), (0,) * f.d, ()): f})

    @classmethod
    def generator(cls, kind: str, i: int, d: int, order: int) -> "JetCDElement":
        """kind in x, dx, D, xi; i is 1-based."""
        one = TruncSeries.const(d, order, 1)
        zero_r = (0,) * d
        if kind == "x":
            return cls.function(TruncSeries.var(d, order, i - 1))
        if kind == "dx":
            return cls(d, {((i - 1,), zero_r, ()): one})
        if kind == "D":
            return cls(d, {((), tuple(int(k == i - 1) for k in range(d)), ()): one})
        if kind == "xi":
            return cls(d, {((), zero_r, (i - 1,)): one})
        raise ValueError(f"unknown jet generator {kind!r}")

    @property
    def order(self) -> int:
        return min((f.order for f in self.terms.values()), default=10**9)

    def is_zero(self) -> bool:
        return not self.terms

    def parity_parts(self) -> dict[int, "JetCDElement"]:
        parts: dict[int, dict] = {0: {}, 1: {}}
        for (S, r, T), f in self.terms.items():
            parts[(len(S) + len(T)) % 2][(S, r, T)] = f
        return {p: JetCDElement(self.d, t) for p, t in parts.items()}

    def __add__(self, other: "JetCDElement") -> "JetCDElement":
        out = dict(self.terms)
        for k, f in other.terms.items():
            out[k] = out[k] + f if k in out else f
        return JetCDElement(self.d, out)

    def __neg__(self):
        return JetCDElement(self.d, {k: -f for k, f in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "JetCDElement":
        return JetCDElement(self.d, {k: f * Fraction(c) for k, f in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        out: dict = {}
        for (S1, r1, T1), f in self.terms.items():
            for (S2, r2, T2), g in other.terms.items():
                cliff = _clifford_nf(tuple(("x", i) for i in T1) + tuple(("d", i) for i in S2))
                for k in _multi_indices_below(r1):
                    c = 1
                    for a, b in zip(r1, k):
                        c *= comb(a, b)
                    h = f * g.derivative_multi(k)
                    if h.is_zero():
                        continue
                    r = tuple(a - b + e for a, b, e in zip(r1, k, r2))
                    for (A, B), cc in cliff:
                        S, s1 = _merge_sorted(S1, A)
                        if S is None:
                            continue
                        T, s2 = _merge_sorted(B, T2)
                        if T is None:
                            continue
                        key = (S, r, T)
                        term = h * (c * cc * s1 * s2)
                        out[key] = out[key] + term if key in out else term
        return JetCDElement(self.d, out)

    def truncate(self, J: int) -> "JetCDElement":
        return JetCDElement(self.d, {k: f.truncate(J) for k, f in self.terms.items()})

    def agrees_mod(self, other: "JetCDElement", J: int) -> bool:
        """Equality of all coefficients up to total degree J."""
        if min(self.order, other.order) < J:
            raise ArithmeticError("not enough precision to compare at this jet order")
        diff = (self - other).truncate(J)
        return diff.is_zero()

    def __eq__(self, other):
        if not isinstance(other, JetCDElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __str__(self):
        return format_jet_element(self)

    def __repr__(self):
        return f"JetCDElement({format_jet_element(self)!r})"


def format_jet_element(x: JetCDElement, J: int | None = None) -> str:
    if x.is_zero():
        return "0"
    names = variable_names(x.d)
    suffix = [n[1:] if x.d > 1 else "" for n in names]
    parts = []
    for (S, r, T), f in x.terms.items():
        if J is not None:
            f = f.truncate(J)
            if f.is_zero():
                continue
        factors = [f"dx{suffix[i]}" for i in S]
        for i, k in enumerate(r):
            factors += [f"D{suffix[i]}"] * k
        factors += [f"xi{suffix[i]}" for i in T]
        coeff = format_series_x(f, names)
        if not factors:
            parts.append(f"({coeff})")
        else:
            parts.append(f"({coeff})*" + "*".join(factors))
    return " + ".join(parts) if parts else "0"


def supercommutator(a: JetCDElement, b: JetCDElement) -> JetCDElement:
    total = JetCDElement(a.d)
    for pa, x in a.parity_parts().items():
        for pb, y in b.parity_parts().items():
            if x.is_zero() or y.is_zero():
                continue
            total = total + x * y - (y * x).scale(-1 if pa and pb else 1)
    return total


# -- the coordinate change phi#

class SharpImages:
    """Images of the primed generators x', dx', D', xi' under phi#.

    ``apply`` extends them multiplicatively to any jet element written in
    the primed coordinates.
    """

    def __init__(self, phi: JetMap, J: int, x, dx, D, xi):
        self.phi, self.J = phi, J
        self.x, self.dx, self.D, self.xi = list(x), list(dx), list(D), list(xi)
        self.d = phi.d

    def generator_image(self, kind: str, i: int) -> JetCDElement:
        return {"x": self.x, "dx": self.dx, "D": self.D, "xi": self.xi}[kind][i - 1]

    def apply(self, elem: JetCDElement) -> JetCDElement:
        total = JetCDElement(self.d)
        subs = [f.terms[((), (0,) * self.d, ())] for f in self.x]
        for (S, r, T), f in elem.terms.items():
            term = JetCDElement.function(f.compose(subs))
            for i in S:
                term = term * self.dx[i]
            for i, k in enumerate(r):
                for _ in range(k):
                    term = term * self.D[i]
            for i in T:
                term = term * self.xi[i]
            total = total + term
        return total


def sharp_coefficients(phi: JetMap, J: int):
    """A_ij = (d'_i psi_j)(phi(x)) and the correction C_i[l][j] of D'_i, solved for.

    C is fixed by requiring [D'_i, dx'_m] = 0, which is linear in C with the
    Jacobian as matrix.
    """
    d = phi.d
    W = J + JET_WORK_MARGIN
    ph = phi.at_order(W)
    jac = ph.jacobian()                       # jac[m][j] = d_j phi_m
    jinv = invert_series_matrix(jac)          # jinv[j][m]
    A = [[jinv[j][i] for j in range(d)] for i in range(d)]
    hess = [[[jac[m][j].derivative(k) for k in range(d)] for j in range(d)] for m in range(d)]
    C = []
    for i in range(d):
        Ci = []
        # R[k][m] = -sum_j A_ij d_j d_k phi_m ;  C[k][j] = sum_m R[k][m] jinv[j][m]
        R = [[-sum((A[i][j] * hess[m][j][k] for j in range(d)), TruncSeries(d, W, {})) for m in range(d)]
             for k in range(d)]
        for k in range(d):
            Ci.append([sum((R[k][m] * jinv[j][m] for m in range(d)), TruncSeries(d, W, {})) for j in range(d)])
        C.append(Ci)
    return A, C


def sharp_correction_closed_form(phi: JetMap, J: int):
    """C_i[l][j] = sum_k (d'_i d'_k psi_j)(phi(x)) d_l phi_k(x), psi the inverse jet."""
    d = phi.d
    W = J + JET_WORK_MARGIN
    ph = phi.at_order(W + 2)
    psi = invert_jet(ph)
    comps = list(ph.components)
    jac = ph.jacobian()
    out = []
    for i in range(d):
        Ci = []
        for l in range(d):
            row = []
            for j in range(d):
                acc = TruncSeries(d, W, {})
                for k in range(d):
                    second = psi.components[j].derivative(i).derivative(k).compose(comps)
                    acc = acc + second * jac[k][l]
                row.append(acc.truncate(W))
            Ci.append(row)
        out.append(Ci)
    return out


def phi_sharp(phi: JetMap, J: int | None = None, drop_correction: bool = False) -> SharpImages:
    J = phi.J if J is None else J
    d = phi.d
    W = J + JET_WORK_MARGIN
    ph = phi.at_order(W)
    jac = ph.jacobian()
    A, C = sharp_coefficients(phi, J)
    zr = (0,) * d
    xs = [JetCDElement.function(c) for c in ph.components]
    dxs = [JetCDElement(d, {((j,), zr, ()): jac[i][j] for j in range(d)}) for i in range(d)]
    xis = [JetCDElement(d, {((), zr, (j,)): A[i][j] for j in range(d)}) for i in range(d)]
    Ds = []
    for i in range(d):
        terms = {((), tuple(int(k == j) for k in range(d)), ()): A[i][j] for j in range(d)}
        if not drop_correction:
            for l in range(d):
                for j in range(d):
                    terms[((l,), zr, (j,))] = C[i][l][j]
        Ds.append(JetCDElement(d, terms))
    return SharpImages(phi, J, xs, dxs, Ds, xis)


_EXPECTED = {("D", "x"): 1, ("xi", "dx"): 1, ("x", "D"): -1, ("dx", "xi"): 1}
_JET_KINDS = ("x", "dx", "D", "xi")


def check_relations(images: SharpImages) -> dict[str, bool]:
    """Every super-commutator of two primed generator images, mod degree J + 1."""
    d, J = images.d, images.J
    one = JetCDElement.function(TruncSeries.const(d, J + JET_WORK_MARGIN, 1))
    zero = JetCDElement(d)
    out = {}
    for k1 in _JET_KINDS:
        for k2 in _JET_KINDS:
            for i in range(1, d + 1):
                for j in range(1, d + 1):
                    got = supercommutator(images.generator_image(k1, i), images.generator_image(k2, j))
                    want = one.scale(_EXPECTED.get((k1, k2), 0)) if i == j else zero
                    name = f"[{k1}'{i}, {k2}'{j}]"
                    out[name] = got.order >= J and (got - want).truncate(J).is_zero()
    return out


def relations_hold(images: SharpImages) -> bool:
    return all(check_relations(images).values())


def compose_sharp(phi: JetMap, chi: JetMap, J: int | None = None) -> dict[str, bool]:
    """Compare (phi o chi)# with chi# o phi# on every generator, mod degree J + 1."""
    J = min(phi.J, chi.J) if J is None else J
    W = J + JET_WORK_MARGIN
    both = phi.at_order(W).compose(chi.at_order(W))
    direct = phi_sharp(both, J)
    first, second = phi_sharp(phi, J), phi_sharp(chi, J)
    out = {}
    for kind in _JET_KINDS:
        for i in range(1, phi.d + 1):
            lhs = direct.generator_image(kind, i)
            rhs = second.apply(first.generator_image(kind, i))
            out[f"{kind}'{i}"] = (lhs - rhs).truncate(J).is_zero()
    return out


# -- vertex images of the generators
#
# Dictionary: x_i <-> a*_{i,0}, dx_i <-> b*_{i,0}, D_i <-> -a_{i,-1}, xi_i <-> b_{i,-1}.

def _jet_letter(kind: str, i: int):
    return {"dx": (GenMode("b*", i + 1, 0), 1), "D": (GenMode("a", i + 1, -1), -1),
            "xi": (GenMode("b", i + 1, -1), 1)}[kind]


def function_state(f: TruncSeries, J: int):
    """f(a*_0)|0> with f truncated at degree J."""
    out = VacVector()
    for e, c in f.truncate(J).terms.items():
        letters = tuple(GenMode("a*", i + 1, 0) for i, k in enumerate(e) for _ in range(k))
        out = out + VacVector.from_letters(letters, c)
    return out


def jet_to_state(x: JetCDElement, J: int):
    """The state whose field is the normally ordered image of x under the dictionary."""
    total = VacVector()
    for (S, r, T), f in x.terms.items():
        letters, sign = [], 1
        for i in S:
            g, s = _jet_letter("dx", i)
            letters.append(g)
            sign *= s
        for i, k in enumerate(r):
            for _ in range(k):
                g, s = _jet_letter("D", i)
                letters.append(g)
                sign *= s
        for i in T:
            g, s = _jet_letter("xi", i)
            letters.append(g)
            sign *= s
        for mono, c in function_state(f, J).terms.items():
            total = total + VacVector.from_letters(mono + tuple(letters), c * sign)
    return total


_STATE_OF_JET = {"x": ("a*", 0, 1), "dx": ("b*", 0, 1), "D": ("a", -1, -1), "xi": ("b", -1, 1)}


def vertex_generator_images(phi: JetMap, J: int | None = None) -> dict[tuple[str, int], object]:
    """Images of a_{i,-1}|0>, a*_{i,0}|0>, b_{i,-1}|0>, b*_{i,0}|0>, keyed by (kind, i)."""
    J = phi.J if J is None else J
    im = phi_sharp(phi, J)
    out = {}
    for jkind, (vkind, _, sign) in _STATE_OF_JET.items():
        for i in range(1, phi.d + 1):
            out[(vkind, i)] = jet_to_state(im.generator_image(jkind, i), J) * sign
    return out


def a_star_count(mono) -> int:
    return sum(1 for g in mono if g.kind == "a*")


def truncate_state(v, cap: int):
    """Drop monomials with more than ``cap`` letters a*."""
    return VacVector({m: c for m, c in v.terms.items() if a_star_count(m) <= cap})


def ope_preserved(phi: JetMap, J: int | None = None, modes=range(0, 3)) -> dict[str, bool]:
    """sigma(u)_(n) sigma(w) = u_(n) w for generator states u, w and n >= 0.

    Comparison ignores monomials with more than J - 2 letters a*, where the
    truncated series no longer determine the answer.
    """
    J = phi.J if J is None else J
    images = vertex_generator_images(phi, J)
    states = {key: VacVector({(GenMode(key[0], key[1], 0 if key[0].endswith("*") else -1),): 1})
              for key in images}
    cap = J - 2
    out = {}
    for ku, u in states.items():
        for kw, w in states.items():
            for n in modes:
                got = truncate_state(nth_product(images[ku], n, images[kw]), cap)
                want = truncate_state(nth_product(u, n, w), cap)
                out[f"{ku[0]}{ku[1]}_({n}){kw[0]}{kw[1]}"] = got == want
    return out


def sigma_state(images: dict, v, cap: int):
    """Extend generator images to a state: letters act as (-1)-products of T^(k) images."""
    cache: dict = {}
    total = VacVector()
    for mono, c in v.terms.items():
        w = VacVector.vacuum()
        for g in reversed(mono):
            k = -g.n - (0 if g.starred else 1)
            key = (g.kind, g.i, k)
            if key not in cache:
                cache[key] = truncate_state(translate_power(images[(g.kind, g.i)], k), cap)
            w = truncate_state(nth_product(cache[key], -1, w), cap)
        total = total + w * c
    return truncate_state(total, cap)


def inverse_round_trip(phi: JetMap, J: int | None = None) -> bool:
    """sigma_{phi^-1} undoes sigma_phi on the four generator states (low a*-degree)."""
    J = phi.J if J is None else J
    fwd = vertex_generator_images(phi, J)
    back = vertex_generator_images(invert_jet(phi.at_order(J + JET_WORK_MARGIN)), J)
    cap = J - 2
    for (kind, i), img in fwd.items():
        orig = VacVector({(GenMode(kind, i, 0 if kind.endswith("*") else -1),): 1})
        if truncate_state(sigma_state(back, img, J), cap) != orig:
            return False
    return True


def extension_strategies_agree(images: SharpImages, word: Sequence[tuple[str, int]]) -> bool:
    """phi# of a word of primed generators: letter-by-letter product versus
    normal ordering first and extending over the normal form."""
    d, J = images.d, images.J
    W = J + JET_WORK_MARGIN
    direct = JetCDElement.function(TruncSeries.const(d, W, 1))
    primed = JetCDElement.function(TruncSeries.const(d, W, 1))
    for kind, i in word:
        direct = direct * images.generator_image(kind, i)
        primed = primed * JetCDElement.generator(kind, i, d, W)
    return (direct - images.apply(primed)).truncate(J - len(word)).is_zero()
