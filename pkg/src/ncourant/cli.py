"""Command-line entry point.

Exit codes: 0 when a command succeeds or a check passes, 1 when a check
fails, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .algebra import Tensor, mul
from .bisymplectic import canonical_omega, casimir_check, check_bisymplectic, hamiltonian, pairing
from .courant import (
    build_standard,
    check_a2_dlr,
    check_courant,
    check_dder_dlr,
    check_lambda,
    check_master,
    check_standard,
    twist,
)
from .doubleder import contract, reduced_contract
from .errors import NCError
from .forms import dr_d, dr_normalize, univ_d
from .frontend import parse_expr, parse_quiver, render, render_quiver
from .polyvec import check_double_poisson, sn_bracket
from .quiver import jordan, kronecker, standard_double, two_loops
from .report import combine

BUILTIN = {
    "jordan": jordan,
    "kronecker": kronecker,
    "two-loops": two_loops,
}

SUITES = ("double-poisson", "bisymplectic", "casimir", "courant", "dlr", "master", "lambda")


class UsageError(Exception):
    pass


def load_quiver(source: str | None, standard: bool = False):
    if source is None:
        raise UsageError("a quiver is required (--quiver FILE or a builtin name)")
    if os.path.exists(source):
        with open(source, encoding="utf-8") as fh:
            q = parse_quiver(fh.read())
    elif source in BUILTIN:
        q = BUILTIN[source]()
    elif source.startswith("kronecker:") and source[10:].isdigit():
        q = kronecker(int(source[10:]))
    else:
        raise UsageError(f"no such quiver file or builtin: {source!r}")
    if standard:
        q = standard_double(q)
    return q


def _doubled(q):
    if not q.is_doubled:
        raise NCError("invalid-quiver", "this command needs a doubled quiver (add 'double weight N' or use --standard)")
    return canonical_omega(q)


def _emit(args, command: str, payload: dict):
    if args.json:
        print(json.dumps({"schema": 1, "command": command, **payload}, sort_keys=True, indent=2, ensure_ascii=False))
    else:
        print(payload["result"])
        for key in sorted(k for k in payload if k != "result"):
            print(f"{key}: {payload[key]}")
    return 0


def _emit_report(args, rep):
    if args.json:
        print(rep.to_json())
    else:
        print(rep.summary())
        for ce in rep.counterexamples:
            print("  counterexample:", json.dumps(ce, sort_keys=True, ensure_ascii=False))
        for n in rep.notes:
            print("  note:", n)
    return 0 if rep.passed else 1


# ---------------------------------------------------------------------------
# commands


def cmd_quiver(args, q):
    return _emit(args, "quiver", {"result": render_quiver(q).rstrip("\n")})


def cmd_parse(args, q):
    x = parse_expr(args.expr, q)
    return _emit(args, "parse", {"result": render(x), "kind": _kind(x)})


def cmd_mul(args, q):
    x = parse_expr(args.x, q)
    y = parse_expr(args.y, q)
    return _emit(args, "mul", {"result": render(mul(x, y))})


def cmd_d(args, q):
    x = parse_expr(args.expr, q)
    if args.dr:
        return _emit(args, "d", {"result": render(dr_d(dr_normalize(x)))})
    return _emit(args, "d", {"result": render(univ_d(x))})


def cmd_bracket(args, q):
    x = parse_expr(args.x, q)
    y = parse_expr(args.y, q)
    if _kind(x) == "poly" or _kind(y) == "poly":
        return _emit(args, "bracket", {"result": render(sn_bracket(x, y)), "bracket": "schouten"})
    bs = _doubled(q)
    out = bs.bracket(x, y)
    payload = {"result": render(out), "bracket": "omega"}
    if args.assoc:
        payload["associated"] = render(out.mult())
    return _emit(args, "bracket", payload)


def cmd_contract(args, q):
    theta = parse_expr(args.theta, q)
    alpha = parse_expr(args.alpha, q)
    if args.reduced:
        return _emit(args, "contract", {"result": render(reduced_contract(theta, alpha))})
    return _emit(args, "contract", {"result": render(contract(theta, alpha))})


def cmd_hamiltonian(args, q):
    bs = _doubled(q)
    h = hamiltonian(bs, parse_expr(args.expr, q))
    return _emit(args, "hamiltonian", {"result": render(h), "polyvector": render(h.to_polyvec())})


def cmd_pairing(args, q):
    bs = _doubled(q)
    t = pairing(bs, args.p, args.q, convention=args.convention)
    return _emit(args, "pairing", {"result": render(t), "convention": args.convention})


def cmd_standard(args, q):
    cd = build_standard(q)
    rep = check_standard(cd)
    if args.json:
        d = rep.to_dict()
        d["S"] = render(cd.S)
        d["Q"] = render(cd.Q)
        print(json.dumps(d, sort_keys=True, indent=2, ensure_ascii=False))
        return 0 if rep.passed else 1
    print(f"S: {render(cd.S)}")
    print(f"Q: {render(cd.Q)}")
    return _emit_report(args, rep)


def cmd_twist(args, q):
    cd = build_standard(q)
    phi = parse_expr(args.form, q)
    tw = twist(cd, phi)
    rep = tw.twist_report
    if args.json:
        d = rep.to_dict()
        d["S"] = render(tw.S)
        print(json.dumps(d, sort_keys=True, indent=2, ensure_ascii=False))
        return 0 if rep.passed else 1
    print(f"S: {render(tw.S)}")
    return _emit_report(args, rep)


def cmd_check(args, q):
    wb = args.weight_bound
    suite = args.suite
    if suite == "double-poisson":
        bs = _doubled(q)
        rep = check_double_poisson(bs.bracket, 3 if wb is None else wb)
    elif suite == "bisymplectic":
        rep = check_bisymplectic(_doubled(q), 2 if wb is None else wb)
    elif suite == "casimir":
        rep = casimir_check(q)
    elif suite == "courant":
        cd = build_standard(q)
        rep = combine("courant", [check_standard(cd), check_courant(cd, max_len=2 if wb is None else wb)])
    elif suite == "dlr":
        cd = build_standard(q)
        rep = combine("dlr", [check_a2_dlr(cd.bisympl), check_dder_dlr(q)])
    elif suite == "lambda":
        rep = check_lambda(build_standard(q))
    else:
        cd = build_standard(q)
        if args.form is not None:
            cd = twist(cd, parse_expr(args.form, q))
        rep = check_master(cd)
    return _emit_report(args, rep)


def _kind(x) -> str:
    if isinstance(x, Tensor):
        return f"tensor{x.arity}:{x.alphabet.kind}"
    return x.alphabet.kind


# ---------------------------------------------------------------------------
# argument parsing


def _common(sup: bool) -> argparse.ArgumentParser:
    default = argparse.SUPPRESS if sup else None
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--quiver", default=default, help="quiver file, or one of: jordan, kronecker[:K], two-loops")
    p.add_argument("--standard", action="store_true", default=argparse.SUPPRESS if sup else False,
                   help="work in the standard weight-2 double of the quiver")
    p.add_argument("--weight-bound", type=int, default=default, help="weight bound for check suites")
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS if sup else False,
                   help="machine-readable output")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ncourant", parents=[_common(False)],
                                     description="Exact calculus of double brackets on quivers.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = [_common(True)]

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=common, help=help_)
        p.set_defaults(fn=fn)
        return p

    add("quiver", cmd_quiver, "print the canonical quiver description")
    add("parse", cmd_parse, "parse and render an expression").add_argument("expr")
    p = add("mul", cmd_mul, "multiply two elements")
    p.add_argument("x")
    p.add_argument("y")
    p = add("d", cmd_d, "differential of an element or form")
    p.add_argument("expr")
    p.add_argument("--dr", action="store_true", help="differential on cyclic classes")
    p = add("bracket", cmd_bracket, "double bracket: canonical bracket of a double, or Schouten on polyvectors")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--assoc", action="store_true", help="also print the associated single bracket")
    p = add("contract", cmd_contract, "contract a double derivation (a D-linear polyvector) into a form")
    p.add_argument("theta")
    p.add_argument("alpha")
    p.add_argument("--reduced", action="store_true", help="multiply the two slots back together")
    add("hamiltonian", cmd_hamiltonian, "Hamiltonian double derivation of an element").add_argument("expr")
    p = add("pairing", cmd_pairing, "pairing of two weight-1 arrows")
    p.add_argument("p")
    p.add_argument("q")
    p.add_argument("--convention", choices=("graded", "epsilon"), default="graded")
    add("standard", cmd_standard, "standard Courant data of a weight-0 quiver")
    add("twist", cmd_twist, "twist the standard data by a 3-form over the quiver").add_argument("form")
    p = add("check", cmd_check, "run an identity-check suite")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--form", help="3-form twist for the master suite")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        q = load_quiver(args.quiver, args.standard)
        return args.fn(args, q)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"ncourant: error: {exc}", file=sys.stderr)
        return 2
    except NCError as exc:
        print(f"ncourant: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
