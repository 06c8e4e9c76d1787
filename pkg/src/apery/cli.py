"""Command-line front end: ``apery <command> ...``.

Exit status is 0 when every requested check passes, 1 when a named check
fails and 2 on usage errors (unknown case, bad flag or value).
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

import mpmath

from . import casebook
from .diffop import DiffOperator
from .errors import AmbiguousFit, CaseFormatError, CaseLoadError, DomainError
from .lattice import is_reflexive, is_tempered_2d, newton_polytope, normalized_volume
from .numerics import thnf
from .opfit import fit_operator
from .recognize import BASIS_LABELS, ConstantBasis, recognize_constant
from .sequences import apery_limit, solve_homogeneous, solve_inhomogeneous


class UsageError(Exception):
    pass


def _fixed(x, digits):
    return mpmath.nstr(x, digits, min_fixed=-math.inf, max_fixed=math.inf)


def _case(case_id):
    try:
        return casebook.get_case(case_id)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc


def _case_sequence(case, n):
    """``n`` terms of the case's period sequence (or homogeneous solution)."""
    if case.phi is not None:
        return case.period_sequence(n - 1)
    return solve_homogeneous(case.expected_operator, n - 1)


def cmd_periods(args, out):
    case = _case(args.case)
    if case.phi is None:
        raise UsageError(f"case {case.id} has no Laurent polynomial")
    if args.terms < 1:
        raise UsageError("--terms must be positive")
    u = case.period_sequence(args.terms - 1, prune=not args.no_prune)
    print(" ".join(str(x) for x in u), file=out)
    return 0


def _read_stdin_sequence(stream):
    try:
        return [Fraction(tok) for tok in stream.read().split()]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse sequence from stdin: {exc}") from exc


def cmd_fit(args, out):
    r, d, g = args.order, args.degree, args.guard
    need = (r + 1) * (d + 1) + g
    if args.stdin:
        u = _read_stdin_sequence(sys.stdin)
    elif args.case:
        u = _case_sequence(_case(args.case), args.terms or need)
    else:
        raise UsageError("give a case id or --stdin")
    try:
        L = fit_operator(u, r, d, g)
    except AmbiguousFit as exc:
        print(f"check failed: operator-fit ({exc})", file=out)
        return 1
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    if L is None:
        print(f"NotFound: no operator of order {r} and degree {d}", file=out)
        return 1
    print(L.to_text(), file=out)
    return 0


def cmd_limit(args, out):
    case = _case(args.case)
    L = case.expected_operator
    if L is None:
        raise UsageError(f"case {case.id} has no operator")
    if args.terms < 25:
        raise UsageError("--terms must be at least 25")
    a = solve_homogeneous(L, args.terms - 1)
    b = solve_inhomogeneous(L, [0, 1], args.terms - 1)
    res = apery_limit(a, b, args.precision)
    digits = int(args.precision * math.log10(2))
    print(_fixed(res.value, digits), file=out)
    print(f"error_estimate {mpmath.nstr(res.error_estimate, 5)}", file=out)
    if case.expected_limit:
        want = casebook.evaluate_expression(case.expected_limit, args.precision)
        if abs(res.value - want) > max(10 * res.error_estimate, mpmath.ldexp(1, -args.precision + 8)):
            print(f"check failed: limit-expected ({case.expected_limit})", file=out)
            return 1
    return 0


def cmd_thnf(args, out):
    case = _case(args.case)
    try:
        if case.id in ("v16", "v18"):
            if args.coeff != 0:
                raise UsageError(f"only V(0) is available for {case.id}")
            res = thnf.thnf_value_at_zero(case.id, args.digits)
        else:
            res = thnf.thnf_coefficient(case.id, args.coeff, args.digits)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    val = mpmath.mpmathify(res.value)
    if isinstance(val, mpmath.mpc):
        print(f"{_fixed(val.real, args.digits)} + {_fixed(val.imag, args.digits)}*i", file=out)
    else:
        print(_fixed(val, args.digits), file=out)
    print(f"error_estimate {mpmath.nstr(res.error, 5)}", file=out)
    return 0


def _read_value(text):
    path = Path(text)
    if path.exists() and path.is_file():
        text = path.read_text().strip()
    text = text.strip()
    digits = len(text.lstrip("+-").replace(".", "").lstrip("0")) or 1
    try:
        with mpmath.workprec(int(digits * 3.33) + 16):
            val = mpmath.mpf(text)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"cannot parse value {text!r}") from exc
    return val, digits


def cmd_recognize(args, out):
    val, digits = _read_value(args.value)
    labels = [s.strip() for s in args.basis.split(",") if s.strip()]
    unknown = [l for l in labels if l not in BASIS_LABELS]
    if unknown or not labels:
        raise UsageError(f"unknown basis labels {unknown}; known: {', '.join(BASIS_LABELS)}")
    prec = int(digits * math.log2(10))
    n = len(labels) + 1
    # a plain decimal supports heights up to 2^(prec / (10 n))
    allowed = int(2 ** (prec / (10 * n)))
    height = args.height if args.height is not None else min(10 ** 4, allowed)
    if height < 1:
        raise UsageError("value has too few digits for any relation with this basis")
    basis = ConstantBasis.from_labels(labels, prescreen=False)
    try:
        with mpmath.workprec(prec):
            rec = recognize_constant(+val, basis, height, prec)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    if rec is None:
        print(f"check failed: recognition (no relation with height <= {height})", file=out)
        return 1
    if rec.ambiguous:
        print("check failed: recognition (ambiguous)", file=out)
        for c in rec.alternatives:
            print("  relation " + " ".join(map(str, c)), file=out)
        return 1
    print(rec.expression(), file=out)
    return 0


def cmd_polytope(args, out):
    case = _case(args.case)
    if case.phi is None:
        raise UsageError(f"case {case.id} has no Laurent polynomial")
    P = newton_polytope(case.phi)
    if args.check == "reflexive":
        ok = is_reflexive(P)
        print(f"reflexive {'yes' if ok else 'no'}", file=out)
    elif args.check == "volume":
        try:
            print(f"normalized_volume {normalized_volume(P)}", file=out)
        except DomainError as exc:
            raise UsageError(str(exc)) from exc
        ok = True
    else:
        try:
            rep = is_tempered_2d(case.phi)
        except DomainError as exc:
            raise UsageError(str(exc)) from exc
        for e in rep.edges:
            coeffs = " ".join(str(c) for c in e.coefficients)
            print(f"edge {e.start} -> {e.end}: [{coeffs}] {'cyclotomic' if e.cyclotomic else 'not cyclotomic'}", file=out)
        ok = rep.tempered
        print(f"tempered {'yes' if ok else 'no'}", file=out)
    if not ok:
        print(f"check failed: {args.check}", file=out)
    return 0 if ok else 1


def _verify_one(case_id, options):
    return casebook.verify_case(casebook.get_case(case_id), options)


def cmd_verify(args, out):
    ids = casebook.case_ids() if args.case == "all" else [_case(args.case).id]
    opts = casebook.VerifyOptions(terms=args.terms, precision=args.precision, tolerance=args.tolerance)
    if args.jobs < 1:
        raise UsageError("--jobs must be positive")
    if args.jobs > 1 and len(ids) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(_verify_one, ids, [opts] * len(ids)))
    else:
        reports = [_verify_one(i, opts) for i in ids]
    for rep in reports:
        status = "PASS" if rep.passed else "FAIL"
        extra = f"  alpha = {rep.recognized}" if rep.recognized else ""
        print(f"{status} {rep.case}{extra}", file=out)
        for name in rep.failed_checks():
            print(f"  check failed: {name}", file=out)
    if args.report:
        doc = {
            "options": {"terms": opts.terms, "precision": opts.precision, "tolerance": opts.tolerance},
            "passed": all(r.passed for r in reports),
            "cases": [r.to_dict(timings=args.timings) for r in reports],
        }
        Path(args.report).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return 0 if all(r.passed for r in reports) else 1


def build_parser():
    p = argparse.ArgumentParser(prog="apery", description="Period sequences, Picard-Fuchs operators and Apery limits.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("periods", help="constant-term period sequence of a case")
    s.add_argument("case")
    s.add_argument("--terms", type=int, default=10)
    s.add_argument("--no-prune", action="store_true")
    s.set_defaults(func=cmd_periods)

    s = sub.add_parser("fit", help="fit an operator to a sequence")
    s.add_argument("case", nargs="?")
    s.add_argument("--stdin", action="store_true", help="read the sequence from standard input")
    s.add_argument("--order", type=int, required=True)
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--guard", type=int, default=10)
    s.add_argument("--terms", type=int, default=None)
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("limit", help="Apery limit of a case's operator")
    s.add_argument("case")
    s.add_argument("--terms", type=int, default=400)
    s.add_argument("--precision", type=int, default=256)
    s.set_defaults(func=cmd_limit)

    s = sub.add_parser("thnf", help="Taylor coefficient v_k (or V(0)) of the normal function")
    s.add_argument("case")
    s.add_argument("--coeff", type=int, default=0)
    s.add_argument("--digits", type=int, default=30)
    s.set_defaults(func=cmd_thnf)

    s = sub.add_parser("recognize", help="recognize a decimal as a combination of basis constants")
    s.add_argument("--value", required=True, help="decimal string or a file containing one")
    s.add_argument("--basis", default="one,zeta2,zeta3,pi3_sqrt3,log2")
    s.add_argument("--height", type=int, default=None)
    s.set_defaults(func=cmd_recognize)

    s = sub.add_parser("polytope", help="Newton polytope checks")
    s.add_argument("case")
    s.add_argument("--check", choices=("reflexive", "tempered", "volume"), required=True)
    s.set_defaults(func=cmd_polytope)

    s = sub.add_parser("verify", help="run the verification pipeline")
    s.add_argument("case", help="case id or 'all'")
    s.add_argument("--report", default=None, help="write the JSON report here")
    s.add_argument("--precision", type=int, default=256)
    s.add_argument("--terms", type=int, default=500)
    s.add_argument("--tolerance", type=float, default=1e-20)
    s.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes (default: CPU count)")
    s.add_argument("--timings", action="store_true", help="include stage timings in the report")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (CaseFormatError, CaseLoadError) as exc:
        print(f"case error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
