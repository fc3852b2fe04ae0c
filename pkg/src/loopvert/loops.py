"""Points of loop spaces given by explicit polynomial equations.

A variety is presented by equations f_1..f_e in base coordinates x_1..x_d
and fibre coordinates y_1..y_e, with the Jacobian in y invertible along the
points of interest.  Loop points are tuples of nil-Laurent series.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .polys import Poly
from .scalars import RingElem
from .series import NilLaurent, mul_exact, nl_invert, nl_is_invertible, nl_reduce_red


class NotEtaleError(ArithmeticError):
    """The Jacobian in the fibre variables is not invertible at the point."""


class SeedError(ValueError):
    """The seed does not solve the reduced equations."""


@dataclass(frozen=True)
class EtalePresentation:
    xvars: tuple[str, ...]
    yvars: tuple[str, ...]
    equations: tuple[Poly, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "xvars", tuple(self.xvars))
        object.__setattr__(self, "yvars", tuple(self.yvars))
        object.__setattr__(self, "equations", tuple(self.equations))
        if len(self.equations) != len(self.yvars):
            raise ValueError("need exactly one equation per fibre variable")
        names = self.variables
        for f in self.equations:
            if f.variables != names:
                raise ValueError(f"equation over {f.variables}, expected {names}")

    @property
    def variables(self) -> tuple[str, ...]:
        return self.xvars + self.yvars

    @property
    def jacobian(self) -> list[list[Poly]]:
        return [[f.derivative(y) for y in self.yvars] for f in self.equations]

    @classmethod
    def affine_space(cls, d: int) -> "EtalePresentation":
        return cls(tuple(f"x{i + 1}" for i in range(d)), ())


def _common_prec(series: Sequence[NilLaurent]) -> int:
    return min(s.prec for s in series)


def is_loop_point(series: Sequence[NilLaurent], equations: Sequence[Poly] | EtalePresentation) -> bool:
    """Every equation vanishes on the tuple, on all coefficients that are known."""
    if isinstance(equations, EtalePresentation):
        equations = equations.equations
    equations = list(equations)
    if not equations:
        return True
    if len(series) != len(equations[0].variables):
        raise ValueError(f"{len(series)} series for {len(equations[0].variables)} variables")
    one = NilLaurent.constant(series[0].descriptor, 1, _common_prec(series))
    return all(f.evaluate(series, one).is_zero() for f in equations)


def _solve(matrix: list[list[NilLaurent]], rhs: list[NilLaurent], prec: int) -> list[NilLaurent]:
    """Gauss elimination over R((t))^sqrt with unit pivots, on representatives."""
    n = len(matrix)
    m = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if nl_is_invertible(m[r][col])), None)
        if piv is None:
            raise NotEtaleError("Jacobian is not invertible")
        m[col], m[piv] = m[piv], m[col]
        inv = nl_invert(m[col][col].with_prec(prec), exact=True)
        m[col] = [mul_exact(x, inv, prec) for x in m[col]]
        for r in range(n):
            if r != col and not m[r][col].is_zero():
                f = m[r][col]
                m[r] = [x - mul_exact(f, y, prec) for x, y in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def _margin(values: Sequence[NilLaurent], degree: int) -> int:
    desc = values[0].descriptor
    depth = max((-v.valuation for v in values), default=0)
    return 2 * desc.nilpotency_bound * (depth * max(degree, 1) + 1) + 4


def hensel_lift(pres: EtalePresentation, base: Sequence[NilLaurent], seed: Sequence[NilLaurent],
                prec: int | None = None) -> list[NilLaurent]:
    """Unique solution y of f(base, y) = 0 congruent to ``seed`` modulo nilpotents.

    The stored coefficients of ``base`` are treated as exact Laurent polynomials
    and the lift is returned up to ``prec`` (default: the inputs' common
    precision).  Newton steps y <- y - J^-1 f(y) square the nilpotent error, so
    ceil(log2 K) + 1 steps suffice; the result is then verified and, if
    necessary, iterated further.
    """
    base, seed = list(base), list(seed)
    if len(base) != len(pres.xvars) or len(seed) != len(pres.yvars):
        raise ValueError("arity mismatch between presentation and point")
    if not seed:
        return []
    values = base + seed
    desc = values[0].descriptor
    p = _common_prec(values) if prec is None else prec
    degree = max(f.degree for f in pres.equations)
    W = p + _margin(values, degree)
    xs = [b.with_prec(W) for b in base]
    ys = [s.with_prec(W) for s in seed]
    one = NilLaurent.constant(desc, 1, W)
    mul = lambda a, b: mul_exact(a, b, W)

    def residual(ys):
        return [f.evaluate(xs + ys, one, mul) for f in pres.equations]

    for r in residual(ys):
        if not nl_reduce_red(r).truncate(p).is_zero():
            raise SeedError("seed does not solve the reduced equations")
    jac = pres.jacobian
    steps = math.ceil(math.log2(max(desc.nilpotency_bound, 2))) + 1
    for it in range(steps + W + 2):
        f = residual(ys)
        if it >= steps and all(r.truncate(p).is_zero() for r in f):
            break
        J = [[g.evaluate(xs + ys, one, mul) for g in row] for row in jac]
        delta = _solve(J, f, W)
        ys = [y - d for y, d in zip(ys, delta)]
    else:
        raise ArithmeticError("Newton iteration did not settle")
    return [y.truncate(p) for y in ys]


def theta_projection(pres: EtalePresentation, point: Sequence[NilLaurent]) -> list[RingElem]:
    """Point over R: constant terms of the base coordinates, fibre lifted by Hensel.

    The fibre seed is the constant term of the reduced fibre coordinates; the
    base coordinates lose their polar and positive parts.
    """
    d = len(pres.xvars)
    desc = point[0].descriptor
    xs = [s.coeff(0) for s in point[:d]]
    seeds = [nl_reduce_red(s).coeff(0) for s in point[d:]]
    base = [NilLaurent.constant(desc, x, 0) for x in xs]
    seed = [NilLaurent.constant(desc, y, 0) for y in seeds]
    ys = hensel_lift(pres, base, seed, prec=0)
    return xs + [y.coeff(0) for y in ys]


@dataclass(frozen=True)
class EpsilonProfile:
    """Finitely supported exponents eps_j for j < 0."""

    entries: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for j, e in dict(self.entries).items():
            if j >= 0:
                raise ValueError(f"profile index must be negative, got {j}")
            if e < 0:
                raise ValueError(f"profile entry must be >= 0, got {e}")
            if e:
                clean[int(j)] = int(e)
        object.__setattr__(self, "entries", dict(sorted(clean.items())))

    def __getitem__(self, j: int) -> int:
        return self.entries.get(j, 0)

    def __le__(self, other: "EpsilonProfile") -> bool:
        return all(v <= other[j] for j, v in self.entries.items())

    def __hash__(self):
        return hash(tuple(self.entries.items()))

    @property
    def depth(self) -> int:
        """Largest l with eps_{-l} nonzero (0 for the zero profile)."""
        return max((-j for j in self.entries), default=0)


def epsilon_membership(series: Sequence[NilLaurent], pres: EtalePresentation | None,
                       eps: EpsilonProfile) -> bool:
    """(x_i)_j ** (1 + eps_j) == 0 for every base coordinate x_i and j < 0."""
    d = len(pres.xvars) if pres is not None else len(series)
    for s in series[:d]:
        for j, c in s.coeffs.items():
            if j < 0 and not (c ** (1 + eps[j])).is_zero():
                return False
    return True


# -- coordinate rings of truncated loop spaces and their structure maps

Var = tuple[int, int]  # (direction i, level l)
Monomial = tuple[tuple[Var, int], ...]


@dataclass(frozen=True)
class Presentation:
    """k[generators] / (monomial relations)."""

    generators: tuple[Var, ...]
    relations: tuple[Monomial, ...]

    def simplify(self) -> "Presentation":
        """Drop generators that a degree-one relation sets to zero."""
        dead = {m[0][0] for m in self.relations if len(m) == 1 and m[0][1] == 1}
        gens = tuple(g for g in self.generators if g not in dead)
        rels = tuple(m for m in self.relations if not any(v in dead for v, _ in m))
        return Presentation(gens, rels)

    def __str__(self):
        gens = ", ".join(f"a[{i},{l}]" for i, l in self.generators)
        rels = ", ".join(" ".join(f"a[{i},{l}]^{e}" for (i, l), e in m) for m in self.relations)
        return f"k[{gens}]/({rels})"


def truncated_loop_ring(d: int, eps: EpsilonProfile, n: int) -> Presentation:
    """k[a_l^(i) : -N <= l <= n] / ((a_l^(i))^(1+eps_l), l < 0), N = depth of eps."""
    N = eps.depth
    gens = tuple((i, l) for i in range(1, d + 1) for l in range(-N, n + 1))
    rels = tuple((((i, l), 1 + eps[l]),) for i, l in gens if l < 0)
    return Presentation(gens, rels)


def _divides(m: Monomial, target: Monomial) -> bool:
    t = dict(target)
    return all(t.get(v, 0) >= e for v, e in m)


def minimal_generators(rels: Sequence[Monomial]) -> frozenset:
    rels = [tuple(sorted(m)) for m in rels]
    return frozenset(m for m in rels if not any(o != m and _divides(o, m) for o in rels))


def _image(mono: Monomial, vmap: Mapping[Var, Var | None]) -> Monomial | None:
    out = {}
    for v, e in mono:
        w = vmap.get(v)
        if w is None:
            return None  # the monomial maps to zero
        out[w] = out.get(w, 0) + e
    return tuple(sorted(out.items()))


def _in_ideal(mono: Monomial | None, rels: Sequence[Monomial]) -> bool:
    return mono is None or any(_divides(r, mono) for r in rels)


@dataclass(frozen=True)
class RingMap:
    """A k-algebra map sending each generator to a generator or to zero."""

    source: Presentation
    target: Presentation
    images: Mapping[Var, Var | None]

    def is_well_defined(self) -> bool:
        return all(_in_ideal(_image(r, self.images), self.target.relations) for r in self.source.relations)

    def is_identity(self) -> bool:
        return (self.source == self.target
                and all(self.images.get(g) == g for g in self.source.generators))


def structure_map(src: Presentation, dst: Presentation) -> RingMap:
    """Generators go to themselves when present in the target, otherwise to zero."""
    present = set(dst.generators)
    return RingMap(src, dst, {g: (g if g in present else None) for g in src.generators})


@dataclass(frozen=True)
class TruncationSquare:
    """A(e',n) -> A(e',n') and A(e',n) -> A(e,n), completed by A(e,n) and A(e',n') -> A(e,n')."""

    corner: Presentation      # A(e', n)
    quotient: Presentation    # A(e, n)
    extended: Presentation    # A(e', n')
    opposite: Presentation    # A(e, n')
    to_quotient: RingMap
    to_extended: RingMap
    quotient_to_opposite: RingMap
    extended_to_opposite: RingMap

    def commutes(self) -> bool:
        for g in self.corner.generators:
            q = self.to_quotient.images[g]
            e = self.to_extended.images[g]
            a = None if q is None else self.quotient_to_opposite.images[q]
            b = None if e is None else self.extended_to_opposite.images[e]
            if a != b:
                return False
        return True

    def is_pushout(self) -> bool:
        """The tensor product of the two legs over the corner equals the opposite ring."""
        # glue generators of the two legs along the corner
        parent: dict = {}

        def find(x):
            while parent.get(x, x) != x:
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)

        zero = ("zero",)
        for g in self.corner.generators:
            q = self.to_quotient.images[g]
            e = self.to_extended.images[g]
            union(("Q", q) if q is not None else zero, ("E", e) if e is not None else zero)
        classes = [("Q", g) for g in self.quotient.generators] + [("E", g) for g in self.extended.generators]
        # compare with the opposite ring via the induced map
        induced: dict = {}
        for cls in classes:
            side, g = cls
            leg = self.quotient_to_opposite if side == "Q" else self.extended_to_opposite
            img = leg.images[g]
            root = find(cls)
            if root in induced and induced[root] != img:
                return False
            induced[root] = img
        if find(zero) in induced and induced[find(zero)] is not None:
            return False
        nonzero = {r: v for r, v in induced.items() if r != find(zero)}
        if any(v is None for v in nonzero.values()):
            return False
        if sorted(nonzero.values()) != sorted(set(nonzero.values())):
            return False
        if set(nonzero.values()) != set(self.opposite.generators):
            return False
        rels = []
        for side, pres in (("Q", self.quotient), ("E", self.extended)):
            for m in pres.relations:
                out = {}
                killed = False
                for g, e in m:
                    root = find((side, g))
                    if root == find(zero):
                        killed = True
                        break
                    w = nonzero[root]
                    out[w] = out.get(w, 0) + e
                if not killed:
                    rels.append(tuple(sorted(out.items())))
        return minimal_generators(rels) == minimal_generators(self.opposite.relations)


def truncation_ring_maps(d: int, eps: EpsilonProfile, eps2: EpsilonProfile, n: int, n2: int) -> TruncationSquare:
    """Rings of L^eps_n for eps <= eps2 and n <= n2 with the four structure maps."""
    if not eps <= eps2:
        raise ValueError("profiles must satisfy eps <= eps'")
    if n > n2 or n < 0:
        raise ValueError("need 0 <= n <= n'")
    corner = truncated_loop_ring(d, eps2, n)
    quotient = truncated_loop_ring(d, eps, n)
    extended = truncated_loop_ring(d, eps2, n2)
    opposite = truncated_loop_ring(d, eps, n2)
    return TruncationSquare(corner, quotient, extended, opposite,
                            structure_map(corner, quotient), structure_map(corner, extended),
                            structure_map(quotient, opposite), structure_map(extended, opposite))
