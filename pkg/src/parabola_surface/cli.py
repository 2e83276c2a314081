"""Command-line entry point.

Every artifact is a JSON document ``{"schema", "command", "config", "result"}``
or a CSV table preceded by ``# schema:`` and ``# config:`` comment lines.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

import mpmath

from . import __version__
from . import acceptance, asymptotics, farey, homology, hyperbolic, surface, veech
from .errors import ToolkitError, UsageError
from .exact import frac_str
from .quadrature import QuadConfig

SCHEMA = "parabola-surface/1"


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _int_list(text: str) -> List[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"expected a rational like 5/4, got {text!r}") from exc


def _point(text: str):
    try:
        x, y = (float(t) for t in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected x,y, got {text!r}") from exc
    return (x, y)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=256, help="working precision in bits (default 256)")
    common.add_argument("--quad-tol", type=float, default=1e-10, help="quadrature agreement tolerance (default 1e-10)")
    common.add_argument("--seed", type=int, default=1, help="seed for randomized checks (default 1)")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--out", help="write the artifact here instead of stdout")

    p = argparse.ArgumentParser(prog="parabola-surface", description="Verification toolkit for the surfaces S_c.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("surface", parents=[common], help="cylinder tables and direction classes")
    s.add_argument("--c", type=_rational, default=Fraction(1))
    s.add_argument("--n", type=int, default=10, help="largest cylinder index")
    s.add_argument("--direction", help="classify the direction p,q at c=1 instead")

    h = sub.add_parser("homology", parents=[common], help="act on a homology class")
    h.add_argument("--word", default="")
    h.add_argument("--x", default="horiz:1", help="class as horiz:n, slope:n or inline JSON")
    h.add_argument("--c", type=_rational, default=Fraction(1))
    h.add_argument("--N", type=int, default=8, help="indices checked by the integral reconstruction")
    h.add_argument("--reconstruct", action="store_true", help="also run the integral reconstruction")

    a = sub.add_parser("asymptotics", parents=[common], help="m^{3/2} laws for a hyperbolic word")
    a.add_argument("--word", default="DE'")
    a.add_argument("--m", type=_int_list, default=acceptance.ACCEPTANCE_M)
    a.add_argument("--A", default="horiz:1")
    a.add_argument("--B", default=None, help="second cylinder; omit with --x for a homology run")
    a.add_argument("--x", default=None, help="track Ĝ*^m x instead of an intersection area")
    a.add_argument("--N", type=int, default=40)
    a.add_argument("--coords", default="alpha1,beta1")
    a.add_argument("--nonrecurrence", type=int, default=None, metavar="M",
                   help="partial sum of Area(Ĝ^m A ∩ A) for m ≤ M")

    f = sub.add_parser("farey", parents=[common], help="G-sequence toward θ")
    f.add_argument("--theta", default="sqrt:2")
    f.add_argument("--depth", type=int, default=12)

    y = sub.add_parser("hyperbolic", parents=[common], help="Klein-model checks")
    y.add_argument("--word", default="DE'")
    y.add_argument("--c", type=_rational, default=Fraction(1))
    y.add_argument("--X", type=_point, default=(0.0, 0.0))
    y.add_argument("--Y", type=_point, default=(0.5, 0.0))
    y.add_argument("--point", type=_point, default=(0.3, 0.4), help="where to check contraction derivatives")

    v = sub.add_parser("verify-all", parents=[common], help="run every acceptance criterion")
    v.add_argument("--only", type=_int_list, default=None, help="criterion numbers to run")
    return p


def _config(args: argparse.Namespace) -> dict:
    cfg = {}
    for k, v in sorted(vars(args).items()):
        if k in ("out",):
            continue
        if isinstance(v, Fraction):
            v = frac_str(v)
        elif isinstance(v, tuple):
            v = list(v)
        cfg[k] = v
    return cfg


# ---------------------------------------------------------------------------
# Subcommands; each returns (result, csv_rows or None, exit_code)
# ---------------------------------------------------------------------------

def _parse_class(text: str) -> homology.HomologyClass:
    text = text.strip()
    if text.startswith("{"):
        try:
            return homology.HomologyClass.from_json(text)
        except (ValueError, json.JSONDecodeError) as exc:
            raise UsageError(f"bad class JSON: {exc}") from exc
    try:
        fam, n = text.split(":")
        n = int(n)
    except ValueError as exc:
        raise UsageError(f"bad class {text!r}; use horiz:n, slope:n or JSON") from exc
    if fam in ("horiz", "horizontal"):
        return homology.HomologyClass.horizontal(n)
    if fam in ("slope", "slopeone"):
        return homology.HomologyClass.slope_one(n)
    raise UsageError(f"bad class family {fam!r}")


def _word(text: str) -> veech.GroupWord:
    try:
        return veech.word(text)
    except veech.WordSyntaxError as exc:
        raise UsageError(str(exc)) from exc


def _vec(v):
    return [frac_str(x) for x in v]


def _matrix(m):
    return [[frac_str(x) for x in row] for row in m]


def cmd_surface(args):
    if args.direction:
        try:
            p, q = (int(t) for t in args.direction.split(","))
        except ValueError as exc:
            raise UsageError(f"bad direction {args.direction!r}; use p,q") from exc
        d = surface.classify_direction(p, q)
        return {"p": d.p, "q": d.q, "verdict": d.verdict.value}, None, 0
    rows = list(csv.reader(io.StringIO(surface.cylinders_to_csv(surface.cylinder_table(args.c, args.n)))))
    return {"cylinders": [dict(zip(rows[0], r)) for r in rows[1:]]}, rows, 0


def cmd_homology(args):
    w = _word(args.word)
    x = _parse_class(args.x)
    y = homology.act_word(w, x)
    result = {
        "word": str(w),
        "c": frac_str(args.c),
        "matrix": _matrix(veech.eval_word(w, args.c)),
        "input": x.to_json_obj(),
        "image": y.to_json_obj(),
        "hol_input": _vec(homology.hol(args.c, x)),
        "hol_image": _vec(homology.hol(args.c, y)),
        "psi_image": {"first": [frac_str(v) for v in homology.psi(y).first],
                      "second": [frac_str(v) for v in homology.psi(y).second]},
    }
    if args.reconstruct:
        result["reconstruction_max_error"] = homology.reconstruct(x, args.N, QuadConfig(tol=args.quad_tol))
    rows = [["index", "alpha", "beta"]] + [[n, frac_str(y.a(n)), frac_str(y.b(n))] for n in range(1, y.max_index + 1)]
    return result, rows, 0


def cmd_asymptotics(args):
    w = _word(args.word)
    if args.nonrecurrence is not None:
        rep = asymptotics.nonrecurrence_sum(w, args.A, args.nonrecurrence, args.precision)
        result = {"M": rep.M, "partial_sum": float(rep.partial_sum), "bound": rep.bound, "bounded": rep.bounded,
                  "monotone": rep.monotone, "increments_within_from": rep.increments_within_from}
        return result, [["M", "partial_sum", "bound"], [rep.M, repr(float(rep.partial_sum)), repr(rep.bound)]], 0
    if args.x is not None:
        run = asymptotics.homology_asymptotics(w, _parse_class(args.x), args.m, args.N,
                                               [c for c in args.coords.split(",") if c], args.precision)
    else:
        B = args.B if args.B is not None else args.A
        run = asymptotics.intersection_asymptotics(w, args.A, B, args.m, args.precision)
    rows = list(csv.reader(io.StringIO(run.to_csv())))
    return run.to_json_obj(), rows, 0


def cmd_farey(args):
    seq = farey.gsequence(args.theta, args.depth, args.precision)
    wit = farey.recurrence_witness(seq.theta, args.depth)
    ov = farey.cf_overlap(seq.theta, args.depth)
    result = seq.to_json_obj()
    result["running_min_witness"] = [w[2] for w in wit]
    result["cf_convergents"] = [{"fraction": str(f), "parity": farey.parity_class(f), "in_sequence": ok}
                                for f, ok in zip(ov.convergents, ov.found)]
    rows = [["i", "fraction", "k", "witness", "running_min"]] + [
        [i, str(e.fraction), "" if e.k is None else e.k, repr(e.witness), repr(w[2])]
        for (i, e), w in zip(enumerate(seq.entries, 1), wit)]
    return result, rows, 0


def cmd_hyperbolic(args):
    w = _word(args.word)
    cfg = QuadConfig(tol=min(args.quad_tol, 1e-10))
    chk = hyperbolic.contraction_derivative_check(*args.point)
    scans = hyperbolic.eigenvalue_bound_scan([w])
    result = {
        "word": str(w),
        "c": frac_str(args.c),
        "translation_length": hyperbolic.translation_length(w, args.c, args.precision),
        "distance_cross_ratio": hyperbolic.klein_distance_cr(args.X, args.Y),
        "distance_integral": hyperbolic.klein_distance_integral(args.X, args.Y, cfg),
        "contraction_derivatives": {"point": list(chk.point), "closed_form": list(chk.closed_form),
                                    "finite_difference": list(chk.finite_difference)},
        "eigenvalue_scan": {"lambda_1": scans[0].lambda_1, "max_modulus": scans[0].max_modulus,
                            "argmax_c": frac_str(scans[0].argmax_c), "holds": scans[0].holds},
    }
    rows = [["quantity", "value"]] + [[k, repr(v)] for k, v in result.items() if isinstance(v, float)]
    return result, rows, 0


def cmd_verify_all(args):
    results = []
    for number, fn in enumerate(acceptance.CRITERIA, 1):
        if args.only and number not in args.only:
            continue
        res = acceptance.run_criterion(fn, args.seed)
        print(res.line(), file=sys.stderr)
        results.append(res)
    ok = all(r.passed for r in results)
    result = {"all_passed": ok, "criteria": [r.to_json_obj() for r in results]}
    rows = [["number", "name", "passed"]] + [[r.number, r.name, r.passed] for r in results]
    return result, rows, 0 if ok else 1


COMMANDS = {
    "surface": cmd_surface,
    "homology": cmd_homology,
    "asymptotics": cmd_asymptotics,
    "farey": cmd_farey,
    "hyperbolic": cmd_hyperbolic,
    "verify-all": cmd_verify_all,
}


def _jsonable(v):
    if isinstance(v, Fraction):
        return frac_str(v)
    if isinstance(v, mpmath.mpf):
        return float(v)
    raise TypeError(f"cannot serialize {type(v).__name__}")


def render(args, result, rows) -> str:
    cfg = _config(args)
    if args.format == "csv":
        if rows is None:
            raise UsageError(f"{args.command} has no CSV form")
        buf = io.StringIO()
        buf.write(f"# schema: {SCHEMA}\n")
        buf.write(f"# config: {json.dumps(cfg, sort_keys=True)}\n")
        csv.writer(buf, lineterminator="\n").writerows(rows)
        return buf.getvalue()
    doc = {"schema": SCHEMA, "command": args.command, "config": cfg, "result": result}
    return json.dumps(doc, sort_keys=True, indent=2, default=_jsonable) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    random.seed(args.seed)
    try:
        with mpmath.workprec(args.precision):
            result, rows, code = COMMANDS[args.command](args)
        text = render(args, result, rows)
    except ToolkitError as exc:
        print(json.dumps({"error": exc.code, "message": str(exc)}), file=sys.stderr)
        return 2
    except ValueError as exc:
        print(json.dumps({"error": UsageError.code, "message": str(exc)}), file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
