"""Command-line front end: ``tatekit <group> <command> ...``.

Exit codes: 0 success, 1 a checked property was violated, 2 usage or input error.
Arguments that take a series accept the text form (``"1 - t1^-2*t2 + O(t1^4)"``),
a JSON object, or ``@path`` to read either from a file.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from typing import Optional, Sequence

from . import lattice as lat
from . import poly
from .basefield import QQ, FieldSpec, finite_ext, finite_prime
from .errors import TatekitError
from .geometry import (
    OpenProfile,
    adele_line,
    adele_plane_smooth,
    cusp_is_beilinson_realizable,
    hensel_coefficient_field,
    parshin_cover,
    semigroup_gaps,
    strictness_witnesses,
)
from .liftings import NOT_A_TATE_MORPHISM, PRESETS, LiftingSpec, falsify_tate, lift, twisted
from .operators import apply, classify_tate, classify_yekutieli, compare_routes, decompose, format_operator, idempotent_suite
from .plot import plot_support
from .serialize import parse_series, program_from_json, program_to_json, series_from_json, series_to_json
from .series import format_series, lex_valuation, residue, lift_std, s_add, s_inv, s_mul, polynomial
from .suites import SUITES, RunConfig, run_suite


class Out:
    """Collects text lines and a JSON payload; prints one of them."""

    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.lines: list = []
        self.data: dict = {}

    def say(self, line: str = "") -> None:
        self.lines.extend(str(line).split("\n"))

    def emit(self) -> None:
        if self.as_json:
            print(json.dumps(self.data, indent=2, sort_keys=True))
        else:
            print("\n".join(self.lines))


# ---------------------------------------------------------------- argument parsing helpers


def parse_field(text: str) -> FieldSpec:
    """``Q``, ``F5`` or ``F5:x^2-2``."""
    t = text.strip()
    if t.upper() == "Q":
        return QQ
    if t.upper().startswith("F"):
        head, _, modulus = t[1:].partition(":")
        try:
            p = int(head)
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad field {text!r}") from None
        if not modulus:
            return finite_prime(p)
        try:
            return finite_ext(p, poly.parse_poly(modulus, p))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    raise argparse.ArgumentTypeError(f"bad field {text!r}; use Q, F5 or F5:x^2-2")


def _read(arg: str) -> str:
    if arg.startswith("@"):
        with open(arg[1:], encoding="utf-8") as fh:
            return fh.read()
    return arg


def _json_or_none(text: str):
    s = text.strip()
    if s.startswith("{"):
        from .serialize import loads

        return loads(s)
    return None


def read_series(arg: str, spec: FieldSpec, n: Optional[int]):
    text = _read(arg)
    obj = _json_or_none(text)
    if obj is not None:
        return series_from_json(obj, spec=spec)
    if n is None:
        n = max([int(k) for k in re.findall(r"t(\d+)", text)] or [1])
    return parse_series(text, spec, n)


def read_lattice(arg: str):
    """JSON, or the shorthands ``std:N:I`` (``t_N^I O``) and ``diag[:BASE:SLOPE]``."""
    text = _read(arg).strip()
    if text.startswith("std:"):
        _, n, i = text.split(":")
        return lat.standard(int(n), int(i))
    if text.startswith("diag"):
        parts = text.split(":")[1:]
        return lat.diagonal(*(int(p) for p in parts))
    obj = _json_or_none(text)
    if obj is None:
        raise argparse.ArgumentTypeError(f"bad lattice {arg!r}")
    return lat.from_json(obj)


def read_program(arg: str):
    from .serialize import loads

    return program_from_json(loads(_read(arg)))


def _series_out(out: Out, a, label: str = "result") -> None:
    out.say(format_series(a))
    out.data[label] = series_to_json(a)


def _box(a: int, b: int) -> tuple:
    return range(-a, a + 1), range(-b, b + 1)


# ---------------------------------------------------------------- command handlers


def cmd_series(args, out: Out) -> int:
    spec = args.field
    a = read_series(args.a, spec, args.n)
    if args.cmd in ("add", "mul"):
        b = read_series(args.b, spec, a.n)
        _series_out(out, s_add(a, b) if args.cmd == "add" else s_mul(a, b))
    elif args.cmd == "inv":
        prec = [int(x) for x in args.prec.split(",")]
        _series_out(out, s_inv(a, prec))
    elif args.cmd == "val":
        v = lex_valuation(a)
        out.say(str(list(v)))
        out.data["valuation"] = list(v)
    elif args.cmd == "residue":
        _series_out(out, residue(a))
    elif args.cmd == "lift":
        _series_out(out, lift_std(a))
    return 0


def cmd_lattice(args, out: Out) -> int:
    A = read_lattice(args.a)
    if args.cmd == "check":
        ok, why = lat.is_lattice(A)
        out.say(f"{lat.describe(A)}: {'lattice' if ok else 'not a lattice (' + why + ')'}")
        out.data.update({"lattice": ok, "reason": why})
        return 0 if ok else 1
    if args.cmd == "sandwich":
        m, M = lat.sandwich(A)
        out.say(f"t{A.n}^{M} O  <=  {lat.describe(A)}  <=  t{A.n}^{m} O")
        out.data.update({"m": m, "M": M})
        return 0
    if args.cmd == "plot":
        a, b = args.box
        pic = plot_support(A, _box(a, b), fmt=args.format)
        out.say(pic.rstrip("\n"))
        out.data["plot"] = pic
        return 0
    B = read_lattice(args.b)
    if args.cmd == "contains":
        r = lat.contains(A, B)
        out.say(str(r).lower())
        out.data["contains"] = r
    elif args.cmd in ("meet", "join"):
        C = lat.canonical(lat.meet(A, B) if args.cmd == "meet" else lat.join(A, B))
        out.say(lat.describe(C))
        out.data["result"] = lat.to_json(C)
    elif args.cmd == "quotient":
        rows = lat.quotient(A, B)
        for q in rows:
            out.say(f"a{A.n}={q.row}: {lat.describe(q.big)} / {lat.describe(q.small)}")
        if not rows:
            out.say("0")
        out.data["rows"] = [{"row": q.row, "big": lat.to_json(q.big), "small": lat.to_json(q.small)} for q in rows]
    return 0


def cmd_op(args, out: Out) -> int:
    if args.cmd == "suite":
        reports = idempotent_suite(args.n, QQ, seed=_seed(args), samples=args.samples)
        for r in reports:
            out.say("\n".join(r.lines()))
        out.data["reports"] = [{"name": r.name, "checks": r.checks, "violations": r.violations} for r in reports]
        return 0 if all(r.ok for r in reports) else 1
    f, spec, n = read_program(args.program)
    if args.cmd == "apply":
        _series_out(out, apply(f, read_series(args.x, spec, n)))
    elif args.cmd == "classify":
        tate = classify_tate(f, n, spec)
        yek = classify_yekutieli(f, n, spec, radius=args.radius)
        out.say(f"operator: {format_operator(f)}")
        out.say("normal-form classifier:")
        out.say(tate.describe())
        for i, a in enumerate(tate.axes, start=1):
            for sign, w in (("plus", a.plus_witness), ("minus", a.minus_witness)):
                if w is not None:
                    out.say(f"  witness axis {i} {sign}: {w}")
        out.say(f"probe classifier (radius {args.radius}):")
        out.say(yek.describe())
        c = compare_routes(tate, yek)
        out.say(f"agree {c['agree']}, contradict {c['contradict']}, unknown {c['unknown']}")
        out.data.update({"tate": tate.verdicts(), "yekutieli": yek.verdicts(), "compare": c})
        return 1 if c["contradict"] else 0
    elif args.cmd == "decompose":
        fp, fm = decompose(f, args.axis)
        out.say(f"P{args.axis}+ part: {format_operator(fp)}")
        out.say(f"P{args.axis}- part: {format_operator(fm)}")
        out.data.update({"plus": program_to_json(fp, spec, n), "minus": program_to_json(fm, spec, n)})
    return 0


def _lifting_spec(args) -> LiftingSpec:
    if args.mode == "standard" or args.Q == "standard":
        return LiftingSpec()
    return twisted(args.Q, args.radius)


def cmd_lifting(args, out: Out) -> int:
    if args.cmd == "lift":
        spec = _lifting_spec(args)
        _series_out(out, lift(spec, read_series(args.a, args.field, 1)))
        return 0
    spec = LiftingSpec() if args.Q == "standard" else twisted(args.Q, args.radius)
    v = falsify_tate(spec, args.radius)
    for line in v.lines():
        out.say(line)
    out.data.update({"verdict": v.verdict, "lattice_m": v.lattice_m, "witnesses": [[w.m, w.index, list(w.exponent)] for w in v.witnesses]})
    if args.plot:
        images = {}
        for i, d in spec.gens:
            for e, c in lift(spec, polynomial(QQ, 1, {(d,): 1})).terms:
                images[e] = c
        img = polynomial(QQ, 2, images)
        out.say(plot_support(img, (range(-args.radius - 2, args.radius + 3), range(0, 2)), fmt=args.plot).rstrip("\n"))
    return 0


def cmd_adele(args, out: Out) -> int:
    if args.cmd == "line":
        A = adele_line(args.p, poly.parse_poly(args.f, args.p))
        for line in A.describe():
            out.say(line)
        out.data.update(A.to_json())
    else:
        P = adele_plane_smooth(args.field)
        for line in P.describe():
            out.say(line)
        out.data.update(P.to_json())
    return 0


def cmd_hensel(args, out: Out) -> int:
    m = hensel_coefficient_field(args.p, poly.parse_poly(args.f, args.p), args.prec)
    f = poly.format_poly(m.f)
    out.say(f"kappa = F_{args.p}[x]/({f}), pi = {f}, precision pi^{m.N}")
    out.say(f"a = {poly.format_poly(m.a)}  (mod pi^{m.N})")
    out.say(f"pi-adic digits of a: {format_series(m.digits, 'pi')}".replace("pi1", "pi"))
    out.say(f"v_pi(f(a)) per Newton step: {list(m.error_exponents)}")
    for k, row in enumerate(m.table):
        out.say(f"x^{k} -> {format_series(row, 'pi')}".replace("pi1", "pi"))
    out.data.update({"a": list(m.a), "digits": series_to_json(m.digits), "errors": list(m.error_exponents), "table": [series_to_json(r) for r in m.table]})
    return 0


def cmd_demo(args, out: Out) -> int:
    if args.cmd == "cusp":
        out.say(f"semigroup <2, 3>, gaps {sorted(semigroup_gaps((2, 3)))}")
        verdicts = []
        for v in range(args.upto + 1):
            r = cusp_is_beilinson_realizable(lat.standard(1, v))
            out.say("\n".join(r.lines()))
            verdicts.append([v, r.verdict])
        T, _, (m, M) = strictness_witnesses()["tate_not_standard"]
        out.say(f"Tate lattice not standard: {lat.describe(T)} lies strictly between t2^{M} O and t2^{m} O")
        out.data.update({"verdicts": verdicts, "gaps": sorted(semigroup_gaps((2, 3)))})
    elif args.cmd == "parshin":
        # U_i = {a1 >= -i} for i below the threshold: the opens shrink as i falls.
        V = OpenProfile(threshold=args.threshold, base=0, slope=-1)
        a, b = args.box
        rep = parshin_cover(V, _box(a, b))
        for line in rep.lines():
            out.say(line)
        if args.plot:
            box = (range(args.threshold - 10, args.threshold + 4), range(-4, 12))
            out.say(plot_support(V, box, fmt=args.plot, axes=(2, 1), title="V = sum U_i t2^i").rstrip("\n"))
        out.data.update({"factored": len(rep.factors), "failures": [list(e) for e in rep.failures]})
        return 0 if rep.ok else 1
    elif args.cmd == "yekutieli":
        spec = twisted("neg-identity", args.radius)
        v = falsify_tate(spec, args.radius)
        for line in v.lines():
            out.say(line)
        images = {}
        for i, d in spec.gens:
            images.update(dict(lift(spec, polynomial(QQ, 1, {(d,): 1})).terms))
        out.say(plot_support(polynomial(QQ, 2, images), (range(-args.radius - 2, args.radius + 3), range(0, 2)), fmt=args.plot or "ascii").rstrip("\n"))
        out.data.update({"verdict": v.verdict})
        return 0 if v.verdict == NOT_A_TATE_MORPHISM else 1
    return 0


def _seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("TATEKIT_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise TatekitError(f"TATEKIT_SEED must be an integer, got {env!r}") from None
    return 0


def cmd_suite(args, out: Out) -> int:
    cfg = RunConfig(seed=_seed(args), fmt="json" if args.json else "text")
    res = run_suite(args.name, cfg)
    text = res.json() if args.json else res.text()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)
    out.as_json, out.lines = False, []
    return res.exit_code


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tatekit", description="Iterated Laurent series, monomial lattices and operator ideals.")
    p.add_argument("--json", action="store_true", help="print machine-readable JSON")
    top = p.add_subparsers(dest="group", required=True)

    def field_arg(sp):
        sp.add_argument("--field", type=parse_field, default=QQ, help="Q, F5 or F5:x^2-2 (default Q)")

    s = top.add_parser("series", help="arithmetic on truncated series")
    ss = s.add_subparsers(dest="cmd", required=True)
    for name in ("add", "mul"):
        sp = ss.add_parser(name)
        sp.add_argument("a")
        sp.add_argument("b")
    sp = ss.add_parser("inv")
    sp.add_argument("a")
    sp.add_argument("--prec", required=True, help="comma-separated cutoffs, one per axis")
    for name in ("val", "residue", "lift"):
        ss.add_parser(name).add_argument("a")
    for sp in ss.choices.values():
        field_arg(sp)
        sp.add_argument("--n", type=int, help="arity (default: highest variable index)")

    s = top.add_parser("lattice", help="monomial subspaces and lattices")
    ss = s.add_subparsers(dest="cmd", required=True)
    for name in ("contains", "meet", "join", "quotient"):
        sp = ss.add_parser(name)
        sp.add_argument("a")
        sp.add_argument("b")
    for name in ("sandwich", "check"):
        ss.add_parser(name).add_argument("a")
    sp = ss.add_parser("plot")
    sp.add_argument("a")
    sp.add_argument("--box", type=int, nargs=2, default=(3, 3), metavar=("A", "B"), help="a1 in [-A, A], a2 in [-B, B]")
    sp.add_argument("--format", choices=("ascii", "svg"), default="ascii")

    s = top.add_parser("op", help="operators on V(n)")
    ss = s.add_subparsers(dest="cmd", required=True)
    sp = ss.add_parser("apply")
    sp.add_argument("program", help="operator program JSON (field, n, op)")
    sp.add_argument("x")
    sp = ss.add_parser("classify")
    sp.add_argument("program")
    sp.add_argument("--radius", type=int, default=8)
    sp = ss.add_parser("decompose")
    sp.add_argument("program")
    sp.add_argument("--axis", type=int, required=True)
    sp = ss.add_parser("suite")
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--seed", type=int)

    s = top.add_parser("lifting", help="coefficient-field liftings")
    ss = s.add_subparsers(dest="cmd", required=True)
    sp = ss.add_parser("lift")
    sp.add_argument("a")
    sp.add_argument("--mode", choices=("standard", "twisted"), default="standard")
    field_arg(sp)
    sp = ss.add_parser("falsify")
    sp.add_argument("--plot", choices=("ascii", "svg"))
    for sp in ss.choices.values():
        sp.add_argument("--Q", choices=sorted(PRESETS) + ["standard"], default="neg-identity")
        sp.add_argument("--radius", type=int, default=10)

    s = top.add_parser("adele", help="adele factors of the line and the plane")
    ss = s.add_subparsers(dest="cmd", required=True)
    sp = ss.add_parser("line")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--f", required=True, help="monic irreducible, e.g. x^2-2 or 3,0,1")
    field_arg(ss.add_parser("plane"))

    sp = top.add_parser("hensel", help="coefficient field of a completion of F_p[x]")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--f", required=True)
    sp.add_argument("--prec", type=int, required=True)

    s = top.add_parser("demo", help="worked examples")
    ss = s.add_subparsers(dest="cmd", required=True)
    ss.add_parser("cusp").add_argument("--upto", type=int, default=6)
    sp = ss.add_parser("parshin")
    sp.add_argument("--box", type=int, nargs=2, default=(3, 3), metavar=("A", "B"))
    sp.add_argument("--threshold", type=int, default=0)
    sp.add_argument("--plot", choices=("ascii", "svg"))
    sp = ss.add_parser("yekutieli")
    sp.add_argument("--radius", type=int, default=5)
    sp.add_argument("--plot", choices=("ascii", "svg"))

    s = top.add_parser("suite", help="deterministic property suites")
    ss = s.add_subparsers(dest="cmd", required=True)
    sp = ss.add_parser("run")
    sp.add_argument("name", nargs="?", default="all", help=f"one of {', '.join(SUITES)}, all")
    sp.add_argument("--seed", type=int, help="overrides TATEKIT_SEED (default 0)")
    sp.add_argument("--output", help="also write the report to this file")
    return p


HANDLERS = {
    "series": cmd_series,
    "lattice": cmd_lattice,
    "op": cmd_op,
    "lifting": cmd_lifting,
    "adele": cmd_adele,
    "hensel": cmd_hensel,
    "demo": cmd_demo,
    "suite": cmd_suite,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = Out(args.json)
    try:
        code = HANDLERS[args.group](args, out)
    except (TatekitError, argparse.ArgumentTypeError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if out.lines or out.data:
        out.emit()
    return code


if __name__ == "__main__":
    sys.exit(main())
