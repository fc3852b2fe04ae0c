"""Command-line workbench.

Exit codes: 0 success, 1 a check failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import re
import sys

from .cd import basis_states, normal_order
from .chiral import GENERATOR_KINDS, chiral_vs_vertex, mu_generator
from .jets import check_relations, invert_jet, phi_sharp
from .loops import EtalePresentation, hensel_lift, theta_projection
from .multipoint import mp_factorize_kappa
from .polys import Poly
from .series import nl_invert
from .suites import SUITES, borcherds_report, run_suite
from .textio import (ExpressionTypeError, ParseError, Report, Session, Value, document_to_json,
                     format_document, parse_ast, parse_expression, parse_ring, _fold, _nonneg)
from .vertex import locality_check, msv_differential, nth_product, translate, translate_power


def _read(text: str) -> str:
    if text == "-":
        return sys.stdin.read().strip()
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            return fh.read().strip()
    return text


def parse_poly(text: str, variables: tuple[str, ...]) -> Poly:
    """Polynomial with rational coefficients in the named variables."""
    node = parse_ast(text)

    def atom(f):
        name = getattr(f, "name", None)
        if name not in variables:
            raise ExpressionTypeError(f"a variable among {', '.join(variables)}", repr(name or f))
        return Poly.var(variables, name) ** _nonneg(f.power, name)

    mul = lambda a, b: a * b

    def power(v, k):
        out = Poly.const(variables, 1)
        for _ in range(_nonneg(k, "(...)")):
            out = out * v
        return out

    return _fold(node, lambda c: Poly.const(variables, c), atom, mul, power)


_GEN_RE = re.compile(r"^(a\*|b\*|a|b)(\d+)$")


def parse_generator(text: str) -> tuple[str, int]:
    m = _GEN_RE.match(text.strip())
    if not m:
        raise ParseError("generator must look like a1, a*1, b2 or b*1", 1, 1)
    return m.group(1), int(m.group(2))


_PRIMED_RE = re.compile(r"^(x|dx|D|xi)'(\d+)$")


# -- commands; each returns a document: list of (label, Value | Report)

def cmd_normal_form(a, s):
    x = parse_expression(_read(a.expr), s, "cd").value
    return [(None, Value("cd", normal_order(x, a.strategy)))]


def cmd_nl_invert(a, s):
    x = parse_expression(_read(a.expr), s, "series").value
    return [(None, Value("series", nl_invert(x, exact=True)))]


def cmd_mp_factorize(a, s):
    x = parse_expression(_read(a.expr), s, "multipoint").value
    return [(f"point{i + 1}", Value("series", f)) for i, f in enumerate(mp_factorize_kappa(x))]


def _presentation(a, s):
    xv = tuple(v.strip() for v in a.xvars.split(",") if v.strip())
    yv = tuple(v.strip() for v in a.yvars.split(",") if v.strip())
    eqs = tuple(parse_poly(e, xv + yv) for e in a.eq)
    return EtalePresentation(xv, yv, eqs)


def _series_list(items, s):
    return [parse_expression(_read(t), s, "series").value for t in items]


def cmd_hensel_lift(a, s):
    pres = _presentation(a, s)
    ys = hensel_lift(pres, _series_list(a.base, s), _series_list(a.seed_point, s))
    return [(y, Value("series", v)) for y, v in zip(pres.yvars, ys)]


def cmd_theta(a, s):
    pres = _presentation(a, s)
    return [(None, Value("list", theta_projection(pres, _series_list(a.point, s))))]


def _state(text, s):
    return parse_expression(_read(text), s, "state").value


def cmd_nth_product(a, s):
    return [(None, Value("state", nth_product(_state(a.a, s), a.n, _state(a.b, s))))]


def cmd_translate(a, s):
    return [(None, Value("state", translate_power(_state(a.a, s), a.power) if a.power != 1
                         else translate(_state(a.a, s))))]


def cmd_delta(a, s):
    return [(None, Value("state", msv_differential(_state(a.a, s))))]


def cmd_locality(a, s):
    x, y = _state(a.a, s), _state(a.b, s)
    tests = basis_states(s.dim, min(s.weight, 2))
    ok = [locality_check(x, y, a.N, [t], modes=range(-2, 3)) for t in tests]
    return [(None, Report(sum(ok), len(ok)))]


def cmd_borcherds(a, s):
    return [(None, borcherds_report(s.seed, a.random, s.weight, d=s.dim))]


def cmd_mu(a, s):
    gen = parse_generator(a.gen)
    return [(None, Value("delta", mu_generator(a.n, gen, _state(a.b, s), s.delta_prec, a.q, a.p)))]


def cmd_chiral_compare(a, s):
    basis = basis_states(s.dim, s.weight)
    kinds = [parse_generator(a.gen)] if a.gen else [(k, i) for i in range(1, s.dim + 1) for k in GENERATOR_KINDS]
    ok = [chiral_vs_vertex(g, n, b, s.delta_prec) for g in kinds for n in range(-3, 4) for b in basis]
    return [(None, Report(sum(ok), len(ok)))]


def _jetmap(text, s):
    return parse_expression(_read(text), s, "jetmap").value


def cmd_jet_invert(a, s):
    return [(None, Value("jetmap", invert_jet(_jetmap(a.map, s))))]


def cmd_phi_sharp(a, s):
    phi = _jetmap(a.map, s)
    im = phi_sharp(phi, s.jet)
    if a.generator:
        m = _PRIMED_RE.match(a.generator)
        if not m or not 1 <= int(m.group(2)) <= phi.d:
            raise ParseError(f"generator must be one of x'i, dx'i, D'i, xi'i with i <= {phi.d}", 1, 1)
        wanted = [(m.group(1), int(m.group(2)))]
    else:
        wanted = [(k, i) for k in ("x", "dx", "D", "xi") for i in range(1, phi.d + 1)]
    return [(f"{k}'{i}", Value("jet", im.generator_image(k, i))) for k, i in wanted]


def cmd_check_relations(a, s):
    phi = _jetmap(a.map, s)
    res = check_relations(phi_sharp(phi, s.jet, drop_correction=a.drop_correction))
    return [(None, Report(sum(res.values()), len(res)))]


def cmd_suite(a, s):
    return run_suite(a.name, s.seed)


COMMANDS = {
    "normal-form": cmd_normal_form, "nl-invert": cmd_nl_invert, "mp-factorize": cmd_mp_factorize,
    "hensel-lift": cmd_hensel_lift, "theta": cmd_theta, "nth-product": cmd_nth_product,
    "translate": cmd_translate, "delta": cmd_delta, "locality": cmd_locality, "borcherds": cmd_borcherds,
    "mu": cmd_mu, "chiral-compare": cmd_chiral_compare, "jet-invert": cmd_jet_invert,
    "phi-sharp": cmd_phi_sharp, "check-relations": cmd_check_relations, "suite": cmd_suite,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", default="Q[e1]/(e1^2)", help="coefficient ring, e.g. Q[e1,e2]/(e1^3,e2^2)")
    common.add_argument("--dim", type=int, default=1, help="number of directions d")
    common.add_argument("--prec", type=int, default=4, help="series precision")
    common.add_argument("--jet", type=int, default=4, help="jet order J")
    common.add_argument("--weight", type=int, default=3, help="weight cap for state bases")
    common.add_argument("--seed", type=int, default=0, help="random seed")
    common.add_argument("--points", default="0,1", help="marked points for multi-point series")
    common.add_argument("--delta-prec", type=int, default=8, help="t2 precision of delta elements")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(prog="loopvert", description="Loop spaces, chiral differential operators "
                                "and their vertex-algebra checks, computed exactly.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    c = add("normal-form", "normal-order a word of modes")
    c.add_argument("expr")
    c.add_argument("--strategy", choices=("leftmost", "rightmost"), default="leftmost")
    add("nl-invert", "invert a nil-Laurent series").add_argument("expr")
    add("mp-factorize", "expand a multi-point series at each point").add_argument("expr")
    for name, what in (("hensel-lift", "lift a loop point along nilpotents"),
                       ("theta", "project a loop point to an R-point")):
        c = add(name, what)
        c.add_argument("--xvars", default="x")
        c.add_argument("--yvars", default="y")
        c.add_argument("--eq", action="append", required=True, help="one equation per fibre variable")
        if name == "hensel-lift":
            c.add_argument("--base", action="append", required=True)
            c.add_argument("--seed-point", dest="seed_point", action="append", required=True)
        else:
            c.add_argument("--point", action="append", required=True)
    c = add("nth-product", "n-th product a_(n) b")
    c.add_argument("a")
    c.add_argument("n", type=int)
    c.add_argument("b")
    c = add("translate", "translation operator (divided power with --power)")
    c.add_argument("a")
    c.add_argument("--power", type=int, default=1)
    add("delta", "the differential sum_n a*_n b_-n").add_argument("a")
    c = add("locality", "locality of two states on the test basis")
    c.add_argument("a")
    c.add_argument("b")
    c.add_argument("--N", type=int, default=2)
    add("borcherds", "Borcherds identity on random triples").add_argument("--random", type=int, default=100)
    c = add("mu", "chiral product with a generator in the first slot")
    c.add_argument("gen")
    c.add_argument("n", type=int)
    c.add_argument("b")
    c.add_argument("--q", type=int, default=0, help="power of t1 on the generator")
    c.add_argument("--p", type=int, default=0, help="power of t2 on the second state")
    add("chiral-compare", "chiral product versus vertex side").add_argument("--gen", default=None)
    add("jet-invert", "inverse of a jet map").add_argument("map")
    c = add("phi-sharp", "images of the primed generators")
    c.add_argument("map")
    c.add_argument("--generator", default=None, help="one of x'i, dx'i, D'i, xi'i")
    c = add("check-relations", "primed relations on the phi# images")
    c.add_argument("map")
    c.add_argument("--drop-correction", action="store_true", help="negative control")
    add("suite", "run a property suite").add_argument("name", choices=("all",) + tuple(SUITES))
    return p


def session_from_args(a) -> Session:
    ring = parse_ring(a.ring)
    pts = []
    sess = Session(ring=ring, dim=a.dim, prec=a.prec, jet=a.jet, weight=a.weight, seed=a.seed,
                   delta_prec=a.delta_prec)
    for t in a.points.split(","):
        pts.append(parse_expression(t, sess, "ring").value)
    sess.points = tuple(pts)
    return sess


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    a = parser.parse_args(argv)
    try:
        s = session_from_args(a)
        doc = COMMANDS[a.command](a, s)
    except (ParseError, ExpressionTypeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ArithmeticError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if a.json:
        out.write(json.dumps(document_to_json(doc, s), indent=2, sort_keys=True) + "\n")
    else:
        out.write(format_document(doc, s))
    failed = any(isinstance(item, Report) and not item.ok for _, item in doc)
    return 1 if failed else 0


def main(argv=None) -> None:
    sys.exit(run(argv))
