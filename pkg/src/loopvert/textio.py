"""Expression language shared by the CLI and the golden files.

One grammar covers every printed type; the kind of an expression is inferred
from the symbols it uses:

    ring        numbers and nilpotents e1, e2, ...         1 - 1/2*e1*e2
    series      ... and t                                   1 - e1*t^-1
    multipoint  ... and P = prod (t - b_i)                  1 + e1*P^-1
    cd          modes kind[i,n]                             a[1,1] a*[1,-1]
    state       ... ending in |0>                           2 a*[1,0] |0>
    delta       {state}*t2^p*d(m)                           {|0>}*t2^2*d(0)
    jetpoly     x or x1, x2, ...                            x + x^2
    jetmap      tuple of jet polynomials                    (x1 + x2^2, x2)
    jet         (poly)*dx*D*xi words                        (1 + 2*x)*dx
    list        [ring, ...]                                 [0, 1]
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .cd import GenMode


class ParseError(ValueError):
    """Syntax error with a 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.message, self.line, self.column = message, line, column


class ExpressionTypeError(TypeError):
    def __init__(self, expected: str, found: str, detail: str = ""):
        msg = f"expected {expected}, found {found}"
        super().__init__(msg + (f" ({detail})" if detail else ""))
        self.expected, self.found = expected, found


# -- tokens

@dataclass(frozen=True)
class Token:
    kind: str   # NUM IDENT MODE VAC OP END
    text: str
    line: int
    column: int


_MODE_RE = re.compile(r"(a\*|b\*|a|b)\s*\[")
_IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*")
_NUM_RE = re.compile(r"[0-9]+")
_VAC_RE = re.compile(r"\|\s*0\s*>")
_OPS = set("+-*/^()[]{},")


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, col0 = 0, 1, 0
    while pos < len(text):
        ch = text[pos]
        col = pos - col0 + 1
        if ch == "\n":
            line, col0 = line + 1, pos + 1
            pos += 1
            continue
        if ch.isspace():
            pos += 1
            continue
        m = _MODE_RE.match(text, pos)
        if m:
            tokens.append(Token("MODE", m.group(1), line, col))
            pos = m.end() - 1  # leave the bracket for the parser
            continue
        m = _VAC_RE.match(text, pos)
        if m:
            tokens.append(Token("VAC", "|0>", line, col))
            pos = m.end()
            continue
        m = _IDENT_RE.match(text, pos)
        if m:
            tokens.append(Token("IDENT", m.group(0), line, col))
            pos = m.end()
            continue
        m = _NUM_RE.match(text, pos)
        if m:
            tokens.append(Token("NUM", m.group(0), line, col))
            pos = m.end()
            continue
        if ch in _OPS:
            tokens.append(Token("OP", ch, line, col))
            pos += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("END", "", line, len(text) - col0 + 1))
    return tokens


# -- syntax tree

@dataclass(frozen=True)
class Sym:
    name: str
    power: int = 1


@dataclass(frozen=True)
class ModeAtom:
    mode: GenMode


@dataclass(frozen=True)
class VacAtom:
    pass


@dataclass(frozen=True)
class DeltaAtom:
    m: int


@dataclass(frozen=True)
class Group:
    body: "SumNode"
    power: int = 1


@dataclass(frozen=True)
class Braced:
    body: "SumNode"


@dataclass(frozen=True)
class Product:
    coeff: Fraction
    factors: tuple


@dataclass(frozen=True)
class SumNode:
    terms: tuple


@dataclass(frozen=True)
class TupleNode:
    items: tuple


@dataclass(frozen=True)
class ListNode:
    items: tuple


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(message, tok.line, tok.column)

    def accept(self, text: str) -> bool:
        if self.tok.kind == "OP" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            found = self.tok.text or "end of input"
            self.error(f"expected {text!r}, found {found!r}")

    def integer(self, signed: bool = True) -> int:
        sign = 1
        if signed and self.accept("-"):
            sign = -1
        elif signed:
            self.accept("+")
        if self.tok.kind != "NUM":
            self.error("expected an integer")
        v = int(self.tok.text)
        self.i += 1
        return sign * v

    def top(self):
        if self.accept("["):
            items = [self.sum()]
            while self.accept(","):
                items.append(self.sum())
            self.expect("]")
            node = ListNode(tuple(items))
        else:
            node = self.sum()
            if len(node.terms) == 1 and node.terms[0].coeff == 1 and len(node.terms[0].factors) == 1 \
                    and isinstance(node.terms[0].factors[0], TupleNode):
                node = node.terms[0].factors[0]
        if self.tok.kind != "END":
            self.error(f"unexpected {self.tok.text!r}")
        return node

    def sum(self) -> SumNode:
        terms = []
        sign = 1
        if self.accept("-"):
            sign = -1
        else:
            self.accept("+")
        terms.append(self.product(sign))
        while True:
            if self.accept("+"):
                terms.append(self.product(1))
            elif self.accept("-"):
                terms.append(self.product(-1))
            else:
                break
        return SumNode(tuple(terms))

    def _starts_factor(self) -> bool:
        t = self.tok
        return t.kind in ("NUM", "IDENT", "MODE", "VAC") or (t.kind == "OP" and t.text in "({")

    def product(self, sign: int) -> Product:
        coeff = Fraction(sign)
        factors = []
        if not self._starts_factor():
            self.error(f"expected a term, found {self.tok.text or 'end of input'!r}")
        while True:
            f = self.factor()
            if isinstance(f, Fraction):
                coeff *= f
            else:
                factors.append(f)
            if self.accept("*"):
                if not self._starts_factor():
                    self.error("expected a factor after '*'")
                continue
            if self._starts_factor():
                continue
            break
        return Product(coeff, tuple(factors))

    def factor(self):
        t = self.tok
        if t.kind == "NUM":
            self.i += 1
            value = Fraction(int(t.text))
            if self.accept("/"):
                den = self.integer(signed=False)
                if den == 0:
                    self.error("division by zero", t)
                value /= den
            if self.accept("^"):
                value = value ** self.integer()
            return value
        if t.kind == "VAC":
            self.i += 1
            return VacAtom()
        if t.kind == "MODE":
            self.i += 1
            self.expect("[")
            idx = self.integer(signed=False)
            self.expect(",")
            n = self.integer()
            self.expect("]")
            if idx < 1:
                self.error("direction index must be >= 1", t)
            return ModeAtom(GenMode(t.text, idx, n))
        if t.kind == "IDENT":
            self.i += 1
            if t.text == "d" and self.tok.kind == "OP" and self.tok.text == "(":
                self.expect("(")
                m = self.integer(signed=False)
                self.expect(")")
                return DeltaAtom(m)
            power = self.integer() if self.accept("^") else 1
            return Sym(t.text, power)
        if self.accept("("):
            items = [self.sum()]
            while self.accept(","):
                items.append(self.sum())
            self.expect(")")
            if len(items) > 1:
                return TupleNode(tuple(items))
            power = self.integer() if self.accept("^") else 1
            return Group(items[0], power)
        if self.accept("{"):
            body = self.sum()
            self.expect("}")
            return Braced(body)
        self.error(f"unexpected {t.text or 'end of input'!r}")


def parse_ast(text: str):
    """Syntax tree of one expression (positioned ParseError on bad input)."""
    return _Parser(text).top()


# -- sessions and kinds

_RING_RE = re.compile(r"^\s*Q\s*(?:\[(?P<gens>[^\]]*)\]\s*/\s*\((?P<rels>[^)]*)\))?\s*$")


def parse_ring(text: str):
    """'Q' or 'Q[e1,e2]/(e1^3,e2^2)' -> RingDescriptor."""
    from .scalars import RingDescriptor
    m = _RING_RE.match(text)
    if not m:
        raise ParseError("ring must look like Q[e1,e2]/(e1^3,e2^2)", 1, 1)
    if m.group("gens") is None:
        return RingDescriptor(())
    gens = [g.strip() for g in m.group("gens").split(",") if g.strip()]
    orders = {}
    for rel in m.group("rels").split(","):
        rm = re.fullmatch(r"\s*(e\d+)\s*\^\s*(\d+)\s*", rel)
        if not rm:
            raise ParseError(f"relation {rel.strip()!r} is not of the form ek^n", 1, 1)
        orders[rm.group(1)] = int(rm.group(2))
    expected = [f"e{k + 1}" for k in range(len(gens))]
    if gens != expected or set(orders) != set(gens):
        raise ParseError("generators must be e1..em, each with one nilpotency relation", 1, 1)
    return RingDescriptor(tuple(orders[g] for g in gens))


@dataclass
class Session:
    ring: Any = None
    dim: int = 1
    prec: int = 4
    jet: int = 4
    weight: int = 3
    seed: int = 0
    points: tuple = (0, 1)
    delta_prec: int = 8

    def __post_init__(self):
        from .scalars import RingDescriptor
        if self.ring is None:
            self.ring = RingDescriptor((2,))
        elif isinstance(self.ring, str):
            self.ring = parse_ring(self.ring)
        for name in ("dim", "jet", "weight", "delta_prec"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.prec < 0:
            raise ValueError("prec must be non-negative")


_JETGEN_RE = re.compile(r"^(D|dx|xi)(\d*)$")
_XVAR_RE = re.compile(r"^x(\d*)$")
_NIL_RE = re.compile(r"^e(\d+)$")


def _symbol_class(name: str) -> str:
    if _NIL_RE.match(name):
        return "nil"
    if name == "t":
        return "t"
    if name == "t2":
        return "t2"
    if name == "P":
        return "P"
    if _XVAR_RE.match(name):
        return "x"
    if _JETGEN_RE.match(name):
        return "jetgen"
    return "unknown"


def _features(node, acc: set):
    if isinstance(node, SumNode):
        for p in node.terms:
            _features(p, acc)
    elif isinstance(node, Product):
        for f in node.factors:
            _features(f, acc)
    elif isinstance(node, (Group, Braced)):
        _features(node.body, acc)
        if isinstance(node, Braced):
            acc.add("braced")
    elif isinstance(node, (TupleNode, ListNode)):
        for it in node.items:
            _features(it, acc)
        acc.add("tuple" if isinstance(node, TupleNode) else "list")
    elif isinstance(node, Sym):
        acc.add(_symbol_class(node.name))
    elif isinstance(node, ModeAtom):
        acc.add("mode")
    elif isinstance(node, VacAtom):
        acc.add("vac")
    elif isinstance(node, DeltaAtom):
        acc.add("delta")
    return acc


_ALLOWED = {
    "ring": {"nil"},
    "series": {"nil", "t"},
    "multipoint": {"nil", "t", "P"},
    "cd": {"mode"},
    "state": {"mode", "vac"},
    "delta": {"mode", "vac", "braced", "t2", "delta"},
    "jetpoly": {"x"},
    "jetmap": {"x", "tuple"},
    "jet": {"x", "jetgen"},
    "list": {"nil", "list"},
}


def infer_kind(node) -> str:
    feats = _features(node, set())
    if "unknown" in feats:
        raise ExpressionTypeError("a known symbol", _first_unknown(node))
    if isinstance(node, ListNode):
        kind = "list"
    elif isinstance(node, TupleNode):
        kind = "jetmap"
    elif "delta" in feats or "t2" in feats or "braced" in feats:
        kind = "delta"
    elif "vac" in feats:
        kind = "state"
    elif "mode" in feats:
        kind = "cd"
    elif "jetgen" in feats:
        kind = "jet"
    elif "x" in feats:
        kind = "jetpoly"
    elif "P" in feats:
        kind = "multipoint"
    elif "t" in feats:
        kind = "series"
    else:
        kind = "ring"
    extra = feats - _ALLOWED[kind]
    if extra:
        raise ExpressionTypeError(kind, ", ".join(sorted(extra)), "symbols of different kinds are mixed")
    return kind


def _first_unknown(node) -> str:
    stack = [node]
    while stack:
        n = stack.pop()
        if isinstance(n, Sym) and _symbol_class(n.name) == "unknown":
            return f"symbol {n.name!r}"
        if isinstance(n, SumNode):
            stack.extend(n.terms)
        elif isinstance(n, Product):
            stack.extend(n.factors)
        elif isinstance(n, (Group, Braced)):
            stack.append(n.body)
        elif isinstance(n, (TupleNode, ListNode)):
            stack.extend(n.items)
    return "unknown symbol"


# -- evaluation

@dataclass
class Value:
    """A parsed expression together with its inferred kind."""
    kind: str
    value: Any

    def __str__(self):
        return self.text()

    def text(self, session: "Session | None" = None) -> str:
        return format_value(self, session or Session())


def _nonneg(power: int, what: str) -> int:
    if power < 0:
        raise ExpressionTypeError("a non-negative power", f"{what}^{power}")
    return power


def _nil_index(name: str, desc) -> int:
    k = int(_NIL_RE.match(name).group(1))
    if not 1 <= k <= desc.nilpotent_count:
        raise ExpressionTypeError(f"a nilpotent of {desc}", name)
    return k - 1


def _fold(node: SumNode, scalar, atom, mul, power):
    total = None
    for p in node.terms:
        v = scalar(p.coeff)
        for f in p.factors:
            if isinstance(f, Group):
                v = mul(v, power(_fold(f.body, scalar, atom, mul, power), f.power))
            else:
                v = mul(v, atom(f))
        total = v if total is None else total + v
    return total


def _pow_generic(one, mul):
    def power(v, k):
        k = _nonneg(k, "(...)")
        out = one()
        for _ in range(k):
            out = mul(out, v)
        return out
    return power


def _eval_ring(node, s: Session):
    desc = s.ring

    def atom(f):
        if isinstance(f, Sym):
            return desc.gen(_nil_index(f.name, desc)) ** _nonneg(f.power, f.name)
        raise ExpressionTypeError("a ring factor", type(f).__name__)

    mul = lambda a, b: a * b
    return _fold(node, desc.scalar, atom, mul, _pow_generic(desc.one, mul))


def _split_product(p: Product, desc, allowed: set[str]):
    """Ring coefficient, exponents of the named symbols, and the remaining groups."""
    r = desc.scalar(p.coeff)
    powers = {name: 0 for name in allowed}
    groups = []
    for f in p.factors:
        if isinstance(f, Group):
            groups.append(f)
        elif isinstance(f, Sym) and f.name in allowed:
            powers[f.name] += f.power
        elif isinstance(f, Sym):
            r = r * desc.gen(_nil_index(f.name, desc)) ** _nonneg(f.power, f.name)
        else:
            raise ExpressionTypeError("a series factor", type(f).__name__)
    return r, powers, groups


def _eval_series(node, s: Session):
    from .series import NilLaurent, mul_exact, nl_invert
    desc, prec = s.ring, s.prec
    total = NilLaurent(desc, {}, prec)
    for p in node.terms:
        r, powers, groups = _split_product(p, desc, {"t"})
        v = NilLaurent.monomial(desc, r, powers["t"], prec)
        for g in groups:
            base, k = _eval_series(g.body, s), g.power
            if k < 0:
                base, k = nl_invert(base, exact=True), -k
            for _ in range(k):
                v = mul_exact(v, base, prec)
        total = total + v
    return total


def _eval_multipoint(node, s: Session):
    from .multipoint import MultiPointSeries, _raw_mp_mul
    desc, prec = s.ring, s.prec
    pts = tuple(b if not isinstance(b, (int, Fraction)) else desc.scalar(b) for b in s.points)
    total = MultiPointSeries(desc, pts, {}, prec)
    for p in node.terms:
        r, powers, groups = _split_product(p, desc, {"t", "P"})
        k = _nonneg(powers["t"], "t")
        v = MultiPointSeries(desc, pts, {powers["P"]: (desc.zero(),) * k + (r,)}, prec)
        for g in groups:
            base = _eval_multipoint(g.body, s)
            for _ in range(_nonneg(g.power, "(...)")):
                v = MultiPointSeries(desc, pts, _raw_mp_mul(v.coeffs, base.coeffs, prec), prec)
        total = total + v
    return total


def _eval_cd(node, s: Session):
    from .cd import CDElement

    def atom(f):
        if isinstance(f, ModeAtom):
            return CDElement.word(f.mode)
        raise ExpressionTypeError("a mode", type(f).__name__)

    mul = lambda a, b: a * b
    return _fold(node, CDElement.scalar, atom, mul, _pow_generic(lambda: CDElement.scalar(1), mul))


def _eval_state(node, s: Session):
    from .cd import CDElement, VacVector, vac_act
    total = VacVector()
    for p in node.terms:
        if not p.factors or not isinstance(p.factors[-1], VacAtom):
            raise ExpressionTypeError("a state ending in |0>", "a term without |0>")
        if any(isinstance(f, VacAtom) for f in p.factors[:-1]):
            raise ExpressionTypeError("a single |0> per term", "|0> in the middle of a term")
        op = _eval_cd(SumNode((Product(p.coeff, p.factors[:-1]),)), s) if p.factors[:-1] \
            else CDElement.scalar(p.coeff)
        total = total + vac_act(op, VacVector.vacuum())
    return total


def _eval_delta(node, s: Session):
    from .chiral import DeltaElement
    total = DeltaElement({}, s.delta_prec)
    for p in node.terms:
        if not p.factors and p.coeff == 0:
            continue
        states = [f for f in p.factors if isinstance(f, Braced)]
        ds = [f for f in p.factors if isinstance(f, DeltaAtom)]
        t2 = [f for f in p.factors if isinstance(f, Sym) and f.name == "t2"]
        if len(states) != 1 or len(ds) != 1 or len(states) + len(ds) + len(t2) != len(p.factors):
            raise ExpressionTypeError("terms {state}*t2^p*d(m)", "a malformed delta term")
        v = _eval_state(states[0].body, s) * p.coeff
        pw = sum(_nonneg(f.power, "t2") for f in t2)
        total = total + DeltaElement({(ds[0].m, pw): v}, s.delta_prec)
    return total


def _x_index(name: str, d: int) -> int:
    suffix = _XVAR_RE.match(name).group(1)
    if not suffix:
        if d != 1:
            raise ExpressionTypeError(f"indexed variables x1..x{d}", "x")
        return 0
    k = int(suffix)
    if not 1 <= k <= d:
        raise ExpressionTypeError(f"a variable among x1..x{d}", name)
    return k - 1


def _max_index(node) -> int:
    best = 0
    stack = [node]
    while stack:
        n = stack.pop()
        if isinstance(n, Sym):
            m = _XVAR_RE.match(n.name) or _JETGEN_RE.match(n.name)
            if m and m.group(m.re.groups):
                best = max(best, int(m.group(m.re.groups)))
        elif isinstance(n, SumNode):
            stack.extend(n.terms)
        elif isinstance(n, Product):
            stack.extend(n.factors)
        elif isinstance(n, (Group, Braced)):
            stack.append(n.body)
        elif isinstance(n, (TupleNode, ListNode)):
            stack.extend(n.items)
    return best


def _work_order(s: Session) -> int:
    from .jets import JET_WORK_MARGIN
    return s.jet + JET_WORK_MARGIN


def _eval_jetpoly(node, s: Session, d: int):
    from .jets import TruncSeries
    order = _work_order(s)

    def atom(f):
        if isinstance(f, Sym):
            return TruncSeries.var(d, order, _x_index(f.name, d)) ** _nonneg(f.power, f.name)
        raise ExpressionTypeError("a polynomial factor", type(f).__name__)

    mul = lambda a, b: a * b
    scalar = lambda c: TruncSeries.const(d, order, c)
    return _fold(node, scalar, atom, mul, _pow_generic(lambda: scalar(1), mul))


def _eval_jet(node, s: Session, d: int):
    from .jets import JetCDElement, TruncSeries
    order = _work_order(s)

    def scalar(c):
        return JetCDElement.function(TruncSeries.const(d, order, c))

    def atom(f):
        if not isinstance(f, Sym):
            raise ExpressionTypeError("a jet factor", type(f).__name__)
        m = _JETGEN_RE.match(f.name)
        if m is None:
            x = TruncSeries.var(d, order, _x_index(f.name, d)) ** _nonneg(f.power, f.name)
            return JetCDElement.function(x)
        kind, suffix = m.group(1), m.group(2)
        if not suffix and d != 1:
            raise ExpressionTypeError(f"indexed generators {kind}1..{kind}{d}", kind)
        i = int(suffix) if suffix else 1
        if not 1 <= i <= d:
            raise ExpressionTypeError(f"a generator index <= {d}", f.name)
        g = JetCDElement.generator(kind, i, d, order)
        out = scalar(1)
        for _ in range(_nonneg(f.power, f.name)):
            out = out * g
        return out

    mul = lambda a, b: a * b
    return _fold(node, scalar, atom, mul, _pow_generic(lambda: scalar(1), mul))


def _is_bare_group(node) -> bool:
    if not isinstance(node, SumNode) or len(node.terms) != 1:
        return False
    p = node.terms[0]
    return p.coeff == 1 and len(p.factors) == 1 and isinstance(p.factors[0], Group) and p.factors[0].power == 1


def evaluate(node, s: Session | None = None, expected: str | None = None) -> Value:
    s = s or Session()
    kind = infer_kind(node)
    if expected is not None and kind != expected:
        numeric = not (_features(node, set()) - {"tuple", "list"})
        widening = {("series", "ring"), ("multipoint", "ring"), ("multipoint", "series"), ("jetmap", "jetpoly"),
                    ("jet", "jetpoly")}
        if (expected, kind) not in widening and not (numeric and expected != "list"):
            raise ExpressionTypeError(expected, kind)
        if numeric and expected == "state":
            from .cd import VacVector
            return Value("state", VacVector.vacuum() * _eval_ring(node, Session(ring=s.ring)).constant)
        kind = expected
    if kind == "ring":
        return Value(kind, _eval_ring(node, s))
    if kind == "series":
        return Value(kind, _eval_series(node, s))
    if kind == "multipoint":
        return Value(kind, _eval_multipoint(node, s))
    if kind == "cd":
        return Value(kind, _eval_cd(node, s))
    if kind == "state":
        return Value(kind, _eval_state(node, s))
    if kind == "delta":
        return Value(kind, _eval_delta(node, s))
    if kind == "jetpoly":
        d = max(s.dim, _max_index(node))
        if expected is None and d == 1 and _is_bare_group(node):
            # "(x + x^2)" is how one-component maps print; read it back as one when it is one
            try:
                return evaluate(node, s, "jetmap")
            except (ArithmeticError, ValueError):
                pass
        return Value(kind, _eval_jetpoly(node, s, d))
    if kind == "jet":
        return Value(kind, _eval_jet(node, s, max(s.dim, _max_index(node))))
    if kind == "jetmap":
        from .jets import JetMap
        items = node.items if isinstance(node, TupleNode) else (node,)
        d = len(items)
        comps = [_eval_jetpoly(it, s, d) for it in items]
        return Value(kind, JetMap(comps, s.jet))
    if kind == "list":
        return Value(kind, [_eval_ring(it, s) for it in node.items])
    raise AssertionError(kind)


def parse_expression(text: str, session: Session | None = None, expected: str | None = None) -> Value:
    return evaluate(parse_ast(text), session, expected)


# -- printing

def format_multipoint(a) -> str:
    from .scalars import format_fraction, monomial_label, join_signed
    pieces = []
    rows = []
    for l, p in a.coeffs.items():
        for k, c in enumerate(p):
            for idx, v in c.terms.items():
                rows.append((l, k, sum(idx), idx, v))
    for l, k, _, idx, v in sorted(rows, key=lambda r: r[:4]):
        parts = []
        label = monomial_label(idx)
        mag = abs(v)
        if mag != 1 or (not label and k == 0 and l == 0):
            parts.append(format_fraction(mag))
        if label:
            parts.append(label)
        if k:
            parts.append("t" if k == 1 else f"t^{k}")
        if l:
            parts.append("P" if l == 1 else f"P^{l}")
        pieces.append((v < 0, "*".join(parts)))
    return join_signed(pieces) if pieces else "0"


def format_value(v: Value, s: Session | None = None) -> str:
    from .jets import format_jet_element, format_jet_map, format_series_x
    from .series import format_series
    s = s or Session()
    k, x = v.kind, v.value
    if k == "series":
        return format_series(x)
    if k == "multipoint":
        return format_multipoint(x)
    if k == "jetpoly":
        return format_series_x(x.truncate(s.jet))
    if k == "jetmap":
        return format_jet_map(x)
    if k == "jet":
        return format_jet_element(x, s.jet)
    if k == "list":
        return "[" + ", ".join(str(e) for e in x) + "]"
    return str(x)


# -- reports and documents

@dataclass(frozen=True)
class Report:
    passed: int
    total: int

    @property
    def ok(self) -> bool:
        return self.passed == self.total

    def __str__(self):
        return f"{'PASS' if self.ok else 'FAIL'} {self.passed}/{self.total}"


_REPORT_RE = re.compile(r"^(PASS|FAIL) (\d+)/(\d+)$")
_LABEL_RE = re.compile(r"^([A-Za-z][\w']*(?:-[\w']+)*): (.*)$")


def parse_report(text: str) -> Report:
    m = _REPORT_RE.match(text.strip())
    if not m:
        raise ParseError("expected 'PASS k/n' or 'FAIL k/n'", 1, 1)
    r = Report(int(m.group(2)), int(m.group(3)))
    if (m.group(1) == "PASS") != r.ok:
        raise ParseError("report verdict disagrees with its counts", 1, 1)
    return r


def parse_document(text: str, session: Session | None = None) -> list[tuple[str | None, Any]]:
    """Line-based output: each line is [label: ] (report | expression)."""
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        label = None
        m = _LABEL_RE.match(line)
        body = line
        if m:
            label, body = m.group(1), m.group(2)
        if _REPORT_RE.match(body.strip()):
            out.append((label, parse_report(body)))
            continue
        try:
            out.append((label, parse_expression(body, session)))
        except ParseError as e:
            offset = len(line) - len(body)
            raise ParseError(e.message, lineno, e.column + offset) from None
    return out


def format_document(doc, session: Session | None = None) -> str:
    lines = []
    for label, item in doc:
        body = item.text(session) if isinstance(item, Value) else str(item)
        lines.append(f"{label}: {body}" if label else body)
    return "\n".join(lines) + ("\n" if lines else "")


# -- JSON

def _fr(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}" if c.denominator != 1 else str(c.numerator)


def _ring_terms(a) -> list:
    return [{"monomial": list(idx), "coeff": _fr(c)} for idx, c in a.terms.items()]


def _state_terms(v) -> list:
    return [{"letters": [str(g) for g in m], "coeff": _fr(c)} for m, c in v.terms.items()]


def _poly_terms(f) -> list:
    return [{"exponent": list(e), "coeff": _fr(c)} for e, c in f.terms.items()]


def to_json(item, session: Session | None = None) -> dict:
    s = session or Session()
    if isinstance(item, Report):
        return {"type": "report", "passed": item.passed, "total": item.total, "ok": item.ok}
    k, x = item.kind, item.value
    if k == "ring":
        return {"type": k, "ring": str(x.descriptor), "terms": _ring_terms(x)}
    if k == "series":
        return {"type": k, "ring": str(x.descriptor), "prec": x.prec,
                "terms": [{"exponent": e, "coeff": _ring_terms(c)} for e, c in sorted(x.coeffs.items())]}
    if k == "multipoint":
        return {"type": k, "ring": str(x.descriptor), "prec": x.prec, "points": [str(b) for b in x.points],
                "terms": [{"level": l, "t_power": j, "coeff": _ring_terms(c)}
                          for l, p in sorted(x.coeffs.items()) for j, c in enumerate(p) if not c.is_zero()]}
    if k == "cd":
        return {"type": k, "terms": [{"word": [str(g) for g in w], "coeff": _fr(c)} for w, c in x.terms.items()]}
    if k == "state":
        return {"type": k, "terms": _state_terms(x)}
    if k == "delta":
        return {"type": k, "P": x.P,
                "terms": [{"m": m, "p": p, "state": _state_terms(v)} for (m, p), v in x.terms.items()]}
    if k == "jetpoly":
        return {"type": k, "dim": x.d, "jet": s.jet, "terms": _poly_terms(x.truncate(s.jet))}
    if k == "jetmap":
        return {"type": k, "dim": x.d, "jet": x.J, "terms": [_poly_terms(c.truncate(x.J)) for c in x.components]}
    if k == "jet":
        return {"type": k, "dim": x.d, "jet": s.jet,
                "terms": [{"dx": [i + 1 for i in S], "D": list(r), "xi": [i + 1 for i in T],
                           "coeff": _poly_terms(f.truncate(s.jet))}
                          for (S, r, T), f in x.terms.items() if not f.truncate(s.jet).is_zero()]}
    if k == "list":
        return {"type": k, "terms": [to_json(Value("ring", e), s) for e in x]}
    raise AssertionError(k)


def document_to_json(doc, session: Session | None = None) -> dict:
    return {"type": "document",
            "terms": [{"label": label, "value": to_json(item, session)} for label, item in doc]}


def from_json(data: dict, session: Session | None = None):
    """Inverse of to_json (reports, and every expression kind)."""
    from .chiral import DeltaElement
    from .jets import JetCDElement, JetMap, TruncSeries
    from .multipoint import MultiPointSeries
    from .scalars import RingElem
    from .series import NilLaurent
    s = session or Session()
    k = data["type"]
    if k == "report":
        return Report(data["passed"], data["total"])
    if k == "document":
        return [(t["label"], from_json(t["value"], s)) for t in data["terms"]]

    def ring(terms, desc):
        return RingElem(desc, {tuple(t["monomial"]): Fraction(t["coeff"]) for t in terms})

    def state(terms):
        return sum((parse_expression(" ".join(t["letters"]) + " |0>", s, "state").value * Fraction(t["coeff"])
                    for t in terms), parse_expression("0 |0>", s, "state").value)

    def poly(terms, d, order):
        return TruncSeries(d, order, {tuple(t["exponent"]): Fraction(t["coeff"]) for t in terms})

    if k == "ring":
        desc = parse_ring(data["ring"])
        return Value(k, ring(data["terms"], desc))
    if k == "series":
        desc = parse_ring(data["ring"])
        return Value(k, NilLaurent(desc, {t["exponent"]: ring(t["coeff"], desc) for t in data["terms"]}, data["prec"]))
    if k == "multipoint":
        desc = parse_ring(data["ring"])
        pts = [parse_expression(b, Session(ring=desc), "ring").value for b in data["points"]]
        coeffs: dict = {}
        for t in data["terms"]:
            p = list(coeffs.get(t["level"], ()))
            p += [desc.zero()] * (t["t_power"] + 1 - len(p))
            p[t["t_power"]] = ring(t["coeff"], desc)
            coeffs[t["level"]] = tuple(p)
        return Value(k, MultiPointSeries(desc, pts, coeffs, data["prec"]))
    if k == "cd":
        from .cd import CDElement
        out = CDElement()
        for term in data["terms"]:
            word = parse_expression(" ".join(term["word"]), s, "cd").value if term["word"] else CDElement.scalar(1)
            out = out + word * Fraction(term["coeff"])
        return Value(k, out)
    if k == "state":
        return Value(k, state(data["terms"]))
    if k == "delta":
        return Value(k, DeltaElement({(t["m"], t["p"]): state(t["state"]) for t in data["terms"]}, data["P"]))
    if k == "jetpoly":
        return Value(k, poly(data["terms"], data["dim"], _work_order(s)))
    if k == "jetmap":
        return Value(k, JetMap([poly(c, data["dim"], _work_order(s)) for c in data["terms"]], data["jet"]))
    if k == "jet":
        d = data["dim"]
        return Value(k, JetCDElement(d, {(tuple(i - 1 for i in t["dx"]), tuple(t["D"]), tuple(i - 1 for i in t["xi"])):
                                          poly(t["coeff"], d, _work_order(s)) for t in data["terms"]}))
    if k == "list":
        return Value(k, [from_json(t, s).value for t in data["terms"]])
    raise ValueError(f"unknown JSON type {k!r}")
