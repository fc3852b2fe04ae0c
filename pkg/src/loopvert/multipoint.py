"""Multi-point series  sum_l a_l(t) * P(t)^l,  P = prod_i (t - b_i),  deg a_l < |I|.

Levels l < 0 must carry nilpotent coefficients.  ``prec`` is the highest level
known.  The diagonal map ``mp_diagonal_nu`` rewrites a series whose points all
coincide as a one-point series in (t - b); ``mp_factorize_kappa`` re-expands
around each point separately when the points are pairwise unit-separated.
"""
from __future__ import annotations

import random
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence

from .scalars import NotAUnitError, RingDescriptor, RingElem, RingMismatchError, ring_invert
from .series import NilLaurent, NotNilLaurentError, random_ring_elem

Poly = tuple  # tuple of RingElem, lowest degree first


# -- polynomials over R in t

def poly_trim(p: Sequence[RingElem]) -> Poly:
    p = list(p)
    while p and p[-1].is_zero():
        p.pop()
    return tuple(p)


def poly_add(p: Sequence[RingElem], q: Sequence[RingElem]) -> Poly:
    n = max(len(p), len(q))
    out = []
    for k in range(n):
        if k < len(p) and k < len(q):
            out.append(p[k] + q[k])
        else:
            out.append(p[k] if k < len(p) else q[k])
    return poly_trim(out)


def poly_scale(p: Sequence[RingElem], c: RingElem) -> Poly:
    return poly_trim([x * c for x in p])


def poly_mul(p: Sequence[RingElem], q: Sequence[RingElem]) -> Poly:
    if not p or not q:
        return ()
    desc = p[0].descriptor
    out = [desc.zero()] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        if x.is_zero():
            continue
        for j, y in enumerate(q):
            out[i + j] = out[i + j] + x * y
    return poly_trim(out)


def poly_divmod_monic(p: Sequence[RingElem], m: Sequence[RingElem]) -> tuple[Poly, Poly]:
    """Euclidean division by a monic polynomial m."""
    p = list(p)
    n = len(m) - 1
    if len(p) <= n:
        return (), poly_trim(p)
    desc = m[0].descriptor
    q = [desc.zero()] * (len(p) - n)
    for k in range(len(p) - 1, n - 1, -1):
        c = p[k]
        if c.is_zero():
            continue
        q[k - n] = c
        for j in range(n + 1):
            p[k - n + j] = p[k - n + j] - c * m[j]
    return poly_trim(q), poly_trim(p[:n])


def poly_from_roots(points: Iterable[RingElem], desc: RingDescriptor) -> Poly:
    out: Poly = (desc.one(),)
    for b in points:
        out = poly_mul(out, (-b, desc.one()))
    return out


def poly_shift(p: Sequence[RingElem], c: RingElem) -> Poly:
    """Coefficients of p(s + c) in powers of s."""
    if not p:
        return ()
    desc = p[0].descriptor
    out = [desc.zero()] * len(p)
    for k, a in enumerate(p):
        if a.is_zero():
            continue
        cp = desc.one()
        for j in range(k, -1, -1):
            # term C(k, j) s^j c^(k-j); iterate j downward so cp = c^(k-j)
            out[j] = out[j] + a * cp * comb(k, j)
            cp = cp * c
    return poly_trim(out)


def binomial_series(c: RingElem, l: int, prec: int) -> dict[int, RingElem]:
    """(s + c)^l in powers of s up to s^prec; c must be a unit when l < 0."""
    desc = c.descriptor
    if l >= 0:
        return {k: desc.scalar(comb(l, k)) * c ** (l - k) for k in range(min(l, prec) + 1)}
    cinv = ring_invert(c)
    return {k: desc.scalar(gen_binom(l, k)) * cinv ** (k - l) for k in range(prec + 1)}


def gen_binom(l: int, k: int) -> Fraction:
    """Binomial coefficient C(l, k) for any integer l."""
    num = Fraction(1)
    for j in range(k):
        num *= Fraction(l - j, j + 1)
    return num


# -- the series type

class MultiPointSeries:
    __slots__ = ("descriptor", "points", "coeffs", "prec")

    def __init__(self, descriptor: RingDescriptor, points: Sequence[RingElem],
                 coeffs: Mapping[int, Sequence[RingElem]] | None = None, prec: int = 0):
        self.descriptor = descriptor
        pts = []
        for b in points:
            if not isinstance(b, RingElem):
                b = descriptor.scalar(b)
            elif b.descriptor != descriptor:
                raise RingMismatchError(f"{b.descriptor} vs {descriptor}")
            pts.append(b)
        if not pts:
            raise ValueError("at least one point is required")
        self.points = tuple(pts)
        self.prec = int(prec)
        self.coeffs = _normalize(descriptor, self.points, coeffs or {}, self.prec)

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def valuation(self) -> int:
        return min(0, min(self.coeffs, default=0))

    def level(self, l: int) -> Poly:
        return self.coeffs.get(l, ())

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other: "MultiPointSeries"):
        if other.descriptor != self.descriptor:
            raise RingMismatchError(f"{self.descriptor} vs {other.descriptor}")
        if other.points != self.points:
            raise ValueError("multi-point series with different points")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for l, p in other.coeffs.items():
            out[l] = poly_add(out.get(l, ()), p)
        return MultiPointSeries(self.descriptor, self.points, out, min(self.prec, other.prec))

    def __neg__(self):
        return MultiPointSeries(self.descriptor, self.points,
                                {l: poly_scale(p, -self.descriptor.one()) for l, p in self.coeffs.items()}, self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RingElem)):
            c = other if isinstance(other, RingElem) else self.descriptor.scalar(other)
            return MultiPointSeries(self.descriptor, self.points,
                                    {l: poly_scale(p, c) for l, p in self.coeffs.items()}, self.prec)
        self._check(other)
        prec = min(self.prec + other.valuation, other.prec + self.valuation)
        return MultiPointSeries(self.descriptor, self.points, _raw_mp_mul(self.coeffs, other.coeffs, prec), prec)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, MultiPointSeries):
            return NotImplemented
        if other.descriptor != self.descriptor or other.points != self.points:
            return False
        p = min(self.prec, other.prec)
        return ({l: c for l, c in self.coeffs.items() if l <= p}
                == {l: c for l, c in other.coeffs.items() if l <= p})

    __hash__ = None

    def __repr__(self):
        body = ", ".join(f"{l}: [{', '.join(str(c) for c in p)}]" for l, p in self.coeffs.items())
        return f"MultiPointSeries({{{body}}}, points={[str(b) for b in self.points]}, prec={self.prec})"


def _normalize(desc, points, coeffs, prec) -> dict[int, Poly]:
    P = poly_from_roots(points, desc)
    work: dict[int, Poly] = {}
    for l, p in coeffs.items():
        l = int(l)
        if l > prec:
            continue
        p = tuple(c if isinstance(c, RingElem) else desc.scalar(c) for c in p)
        work[l] = poly_add(work.get(l, ()), p)
    n = len(points)
    out: dict[int, Poly] = {}
    while work:
        l = min(work)
        p = work.pop(l)
        if len(p) > n:
            q, p = poly_divmod_monic(p, P)
            if q and l + 1 <= prec:
                work[l + 1] = poly_add(work.get(l + 1, ()), q)
        if p:
            if l < 0 and any(not c.is_nilpotent() for c in p):
                raise NotNilLaurentError(f"level {l} coefficient is not nilpotent")
            out[l] = p
    return out


def _raw_mp_mul(a: Mapping[int, Poly], b: Mapping[int, Poly], prec: int) -> dict[int, Poly]:
    out: dict[int, Poly] = {}
    for l1, p1 in a.items():
        for l2, p2 in b.items():
            l = l1 + l2
            if l > prec:
                continue
            out[l] = poly_add(out.get(l, ()), poly_mul(p1, p2))
    return out


def mp_add(a: MultiPointSeries, b: MultiPointSeries) -> MultiPointSeries:
    return a + b


def mp_mul(a: MultiPointSeries, b: MultiPointSeries) -> MultiPointSeries:
    return a * b


def mp_from_poly(desc: RingDescriptor, points, poly: Sequence, prec: int) -> MultiPointSeries:
    """An ordinary polynomial in t viewed as a multi-point series."""
    return MultiPointSeries(desc, points, {0: tuple(poly)}, prec)


# -- inversion

def _residue_matrix(a0: Poly, P: Poly, n: int, desc) -> list[list[RingElem]]:
    """Matrix of multiplication by a0 on R[t]/P in the basis 1, t, ..., t^(n-1)."""
    cols = []
    for k in range(n):
        _, r = poly_divmod_monic(poly_mul(a0, (desc.zero(),) * k + (desc.one(),)), P)
        cols.append(list(r) + [desc.zero()] * (n - len(r)))
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def solve_local(matrix: list[list[RingElem]], rhs: list[RingElem]) -> list[RingElem]:
    """Gauss elimination over a local ring: pivots must be units."""
    n = len(matrix)
    m = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col].is_unit()), None)
        if piv is None:
            raise NotAUnitError("matrix is not invertible over the local ring")
        m[col], m[piv] = m[piv], m[col]
        inv = ring_invert(m[col][col])
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and not m[r][col].is_zero():
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def mp_is_invertible(a: MultiPointSeries) -> bool:
    if a.prec < 0:
        return False
    desc = a.descriptor
    P = poly_from_roots(a.points, desc)
    mat = _residue_matrix(a.level(0), P, a.size, desc)
    try:
        solve_local(mat, [desc.one()] + [desc.zero()] * (a.size - 1))
    except NotAUnitError:
        return False
    return True


def mp_invert(a: MultiPointSeries) -> MultiPointSeries:
    """Invert the level-0 residue in R[t]/P, then sum the geometric series of the rest."""
    desc = a.descriptor
    n = a.size
    P = poly_from_roots(a.points, desc)
    mat = _residue_matrix(a.level(0), P, n, desc)
    b0 = poly_trim(solve_local(mat, [desc.one()] + [desc.zero()] * (n - 1)))
    K = desc.nilpotency_bound
    depth = -a.valuation
    work = a.prec + 2 * K * depth + 2
    wa = MultiPointSeries(desc, a.points, a.coeffs, work)
    wb0 = MultiPointSeries(desc, a.points, {0: b0}, work)
    c = wa * wb0 - MultiPointSeries(desc, a.points, {0: (desc.one(),)}, work)
    c = MultiPointSeries(desc, a.points, c.coeffs, work)
    neg_c = -c
    total = MultiPointSeries(desc, a.points, {0: (desc.one(),)}, work)
    power = total
    for _ in range(work + K + 2):
        power = MultiPointSeries(desc, a.points, _raw_mp_mul(power.coeffs, neg_c.coeffs, work), work)
        if power.is_zero():
            break
        total = total + power
    b = MultiPointSeries(desc, a.points, _raw_mp_mul(wb0.coeffs, total.coeffs, work), work)
    val_b = b.valuation
    return MultiPointSeries(desc, a.points, b.coeffs, a.prec + 2 * val_b)


def mp_power(a: MultiPointSeries, l: int) -> MultiPointSeries:
    if l < 0:
        return mp_power(mp_invert(a), -l)
    desc = a.descriptor
    out = MultiPointSeries(desc, a.points, {0: (desc.one(),)}, a.prec)
    for _ in range(l):
        out = out * a
    return out


# -- diagonal and factorization maps

def mp_diagonal_nu(a: MultiPointSeries) -> NilLaurent:
    """All points equal b: rewrite as a one-point series in s = t - b."""
    b = a.points[0]
    if any(p != b for p in a.points):
        raise ValueError("diagonal map needs all points equal")
    n = a.size
    out: dict[int, RingElem] = {}
    for l, p in a.coeffs.items():
        for k, c in enumerate(poly_shift(p, b)):
            if not c.is_zero():
                out[n * l + k] = c
    return NilLaurent(a.descriptor, out, n * (a.prec + 1) - 1)


def mp_diagonal_nu_inverse(s: NilLaurent, n: int, b: RingElem) -> MultiPointSeries:
    desc = s.descriptor
    levels: dict[int, list[RingElem]] = {}
    for e, c in s.coeffs.items():
        l, k = divmod(e, n)
        levels.setdefault(l, [desc.zero()] * n)[k] = c
    coeffs = {l: poly_shift(poly_trim(p), -b) for l, p in levels.items()}
    prec = (s.prec + 1) // n - 1
    return MultiPointSeries(desc, [b] * n, coeffs, prec)


def expand_at_cluster(a: MultiPointSeries, group: Sequence[int]) -> NilLaurent:
    """One-point expansion at a cluster of equal points, done with one-point arithmetic.

    Each level l contributes a_l(s + c) * s^(|G| l) * prod_{j not in G} (s + c - b_j)^l.
    """
    desc = a.descriptor
    c = a.points[group[0]]
    if any(a.points[g] != c for g in group):
        raise ValueError("cluster points must coincide")
    others = [a.points[j] for j in range(a.size) if j not in group]
    for b in others:
        if not (c - b).is_unit():
            raise NotAUnitError("point separation is not a unit")
    g = len(group)
    prec = g * (a.prec + 1) - 1
    total = NilLaurent(desc, {}, prec)
    for l, p in a.coeffs.items():
        shift = g * l
        span = prec - shift
        if span < 0 and l >= 0:
            continue
        term = NilLaurent(desc, dict(enumerate(poly_shift(p, c))), span)
        for b in others:
            term = term * NilLaurent(desc, binomial_series(c - b, l, max(span, 0)), span)
        total = total + NilLaurent(desc, {e + shift: v for e, v in term.coeffs.items()}, prec)
    return total


def mp_factorize_kappa(a: MultiPointSeries) -> list[NilLaurent]:
    """Expansion around each point b_i as a nil-Laurent series in (t - b_i)."""
    return [expand_at_cluster(a, [i]) for i in range(a.size)]


def kappa_groups(a: MultiPointSeries, groups: Sequence[Sequence[int]]) -> list[MultiPointSeries]:
    """Restrict to each group of points using multi-point arithmetic.

    Level l becomes a_l * P_G^l * Q^l with Q the product of the foreign factors,
    which is a unit of the group's algebra when the separations are units.
    """
    desc = a.descriptor
    K = desc.nilpotency_bound
    work = a.prec + 2 * K * (-a.valuation) + 2
    out = []
    for group in groups:
        pts = [a.points[i] for i in group]
        foreign = [a.points[j] for j in range(a.size) if j not in group]
        Q = mp_from_poly(desc, pts, poly_from_roots(foreign, desc), work)
        Qinv = mp_invert(Q) if foreign else Q
        total = MultiPointSeries(desc, pts, {}, a.prec)
        for l, p in a.coeffs.items():
            base = MultiPointSeries(desc, pts, {l: p}, work)
            factor = mp_power(Q if l >= 0 else Qinv, abs(l))
            term = base * factor
            total = total + MultiPointSeries(desc, pts, term.coeffs, a.prec)
        out.append(total)
    return out


def random_multipoint(desc: RingDescriptor, rng: random.Random, points, prec: int,
                      depth: int = 1) -> MultiPointSeries:
    n = len(points)
    coeffs = {}
    for l in range(-depth, prec + 1):
        coeffs[l] = tuple(random_ring_elem(desc, rng, nilpotent=l < 0) for _ in range(n))
    return MultiPointSeries(desc, points, coeffs, prec)
