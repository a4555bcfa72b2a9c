"""Command-line front end: every subcommand prints one canonical JSON document.

Exit codes: 0 the requested certificate or check succeeded, 1 it failed,
2 precondition or schema violation, 3 a scan cap was exhausted or a count
stayed inconclusive.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import local_action
from .constructions import equations, forms, trees
from .differentials import DifferentialForm, classify
from .errors import CharpError, EliminationError, PreconditionError, ScanCapError, SchemaError
from .field import make_field
from .hurwitz import deserialize, serialize, tree_to_json, validate
from .poly import INF, Polynomial, point_to_json

EXIT_OK, EXIT_FAIL, EXIT_PRECONDITION, EXIT_CAP = 0, 1, 2, 3


def _dump(doc, stream=None):
    stream = stream or sys.stdout
    stream.write(json.dumps(doc, sort_keys=True, indent=2, default=str) + "\n")


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"expected a fraction a/b, got {text!r}") from exc


def _check_prime(p):
    if p < 3 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
        raise PreconditionError(f"p={p} must be an odd prime")


# -- subcommands ----------------------------------------------------------------------

def cmd_construct(args):
    p, h = args.p, args.h
    _check_prime(p)
    if h == p:
        raise PreconditionError(f"h = p = {p} is not a conductor (p divides h)")
    if h % 2 == 0:
        raise PreconditionError(f"h={h} is even; by Hasse-Arf the conductor of a dihedral action is odd")
    if h < p:
        if args.delta_mid is not None:
            raise PreconditionError("--delta-mid applies only to h > p")
        tree = trees.build_small_h_tree(p, h)
    else:
        tree = trees.build_large_h_tree(p, h, args.delta_mid or Fraction(1, 2))
    report = validate(tree)
    if args.out:
        Path(args.out).write_bytes(serialize(tree))
        _dump({"report": report.to_json(), "tree": args.out})
    else:
        _dump({"report": report.to_json(), "tree": tree_to_json(tree)})
    return EXIT_OK if report.liftable else EXIT_FAIL


def cmd_validate(args):
    tree = deserialize(Path(args.path).read_bytes())
    report = validate(tree)
    _dump(report.to_json())
    return EXIT_OK if report.all_pass else EXIT_FAIL


def _count_status(rep):
    return EXIT_CAP if rep.status == "inconclusive" else EXIT_OK


def cmd_search(args):
    rep = equations.count_good(args.p, args.h, args.type, max_ext=args.max_ext, jobs=args.jobs)
    _dump(
        {
            "solutions": [r.to_json() for r in rep.records],
            "summary": {
                "good": rep.count,
                "trivial": rep.trivial,
                "stabilized": rep.status != "inconclusive",
                "status": rep.status,
                "degree": rep.degree,
                "reason": rep.reason,
            },
        }
    )
    return _count_status(rep)


def cmd_count(args):
    rep = equations.count_good(args.p, args.h, args.type, max_ext=args.max_ext, jobs=args.jobs)
    _dump(rep.to_json())
    return _count_status(rep)


def cmd_feasible(args):
    wit = forms.residue_feasible(args.p, args.type, max_ext=args.max_ext)
    doc = {"p": args.p, "type": list(args.type), "max_ext": args.max_ext, "witness": wit and wit.to_json()}
    if len(args.type) == 4:
        doc["obstruction"] = forms.single_zero_obstruction(args.p, args.type).to_json()
    _dump(doc)
    return EXIT_OK if wit is not None else EXIT_FAIL


def cmd_local_action(args):
    _check_prime(args.p)
    rep = local_action.verify_dihedral(args.p, args.h, args.prec)
    _dump(rep.to_json())
    return EXIT_OK if rep.all_pass else EXIT_FAIL


def cmd_classify_form(args):
    _check_prime(args.p)
    F = make_field(args.p, args.k)
    den = Polynomial(F, [F.from_code(c % F.order) for c in args.den])
    if den.is_zero():
        raise PreconditionError("the denominator must be nonzero")
    omega = DifferentialForm.from_parts(Polynomial(F, [F.from_code(c % F.order) for c in args.num]), den)
    if omega.is_zero():
        raise PreconditionError("cannot classify the zero form")
    doc = {
        "form": {"num": omega.num.to_json(), "den": omega.den.to_json()},
        "class": classify(omega).value,
        "divisor": [{"point": point_to_json(P), "order": o} for P, o in omega.divisor()],
        "residues": [{"point": point_to_json(P), "residue": a.to_json()} for P, a in omega.residues()],
        "ord_inf": omega.ord_at(INF),
    }
    _dump(doc)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog="charp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build and validate a tree with different 0")
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--h", type=int, required=True)
    c.add_argument("--delta-mid", type=_fraction, default=None, help="different at the central vertex (h > p)")
    c.add_argument("--out", help="write the tree here instead of embedding it in the output")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("validate", help="check a serialized tree")
    v.add_argument("path")
    v.set_defaults(func=cmd_validate)

    for name, func, text in (
        ("search", cmd_search, "list the projective solutions of the z-system"),
        ("count", cmd_count, "count good solutions over increasing extensions"),
    ):
        s = sub.add_parser(name, help=text)
        s.add_argument("--p", type=int, required=True)
        s.add_argument("--h", type=int, required=True)
        s.add_argument("--type", type=_int_list, required=True, help="residues a_1,...,a_alpha")
        s.add_argument("--max-ext", type=int, default=6)
        s.add_argument("--jobs", type=int, default=1)
        s.set_defaults(func=func)

    f = sub.add_parser("feasible", help="search for a logarithmic form with one zero and given residues")
    f.add_argument("--p", type=int, required=True)
    f.add_argument("--type", type=_int_list, required=True)
    f.add_argument("--max-ext", type=int, default=1)
    f.set_defaults(func=cmd_feasible)

    la = sub.add_parser("local-action", help="check the order-two relations on power series")
    la.add_argument("--p", type=int, required=True)
    la.add_argument("--h", type=int, required=True)
    la.add_argument("--prec", type=int, default=None, help="precision N (default 2ph+1)")
    la.set_defaults(func=cmd_local_action)

    cf = sub.add_parser("classify-form", help="exact, logarithmic or neither, with divisor and residues")
    cf.add_argument("--p", type=int, required=True)
    cf.add_argument("--k", type=int, default=1)
    cf.add_argument("--num", type=_int_list, required=True, help="coefficient codes, constant term first")
    cf.add_argument("--den", type=_int_list, required=True)
    cf.set_defaults(func=cmd_classify_form)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        _dump({"error": "schema", "pointer": exc.pointer, "reason": exc.reason}, sys.stderr)
        return EXIT_PRECONDITION
    except PreconditionError as exc:
        _dump({"error": "precondition", "reason": str(exc)}, sys.stderr)
        return EXIT_PRECONDITION
    except ScanCapError as exc:
        _dump({"error": "cap", "reason": str(exc)}, sys.stderr)
        return EXIT_CAP
    except EliminationError as exc:
        _dump({"error": "elimination", "reason": str(exc), "state": exc.state}, sys.stderr)
        return EXIT_FAIL
    except (CharpError, OSError) as exc:
        _dump({"error": type(exc).__name__, "reason": str(exc)}, sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
