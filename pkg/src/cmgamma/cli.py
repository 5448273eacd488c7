"""Command-line front end: evaluation, identity checks, proof replay, scans.

Exit-code contract (stable for CI): 0 = pass, 1 = verification failure,
2 = usage or domain error.  All payloads are deterministic for fixed flags:
no timestamps, sorted JSON keys, fixed decimal formatting.

The default precision comes from --prec, else the CMGAMMA_PREC environment
variable, else 128 bits (256 for scans).
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import bounds, replay, scan
from .constants import SCALE_P, SCALE_Q, load_constants
from .errors import CmGammaError, ConstantsFormatError
from .polygamma import (PrecisionPolicy, polygamma,
                        polygamma_quadrature_crosscheck)
from .reporting import frac_str

_EVAL_FUNCTIONS = ("psi1", "psi2", "polygamma", "p", "Q", "B", "g", "H")

USAGE_EXIT = 2
FAIL_EXIT = 1


def _default_prec(args, fallback: int) -> int:
    if getattr(args, "prec", None):
        return args.prec
    env = os.environ.get("CMGAMMA_PREC")
    if env:
        try:
            return max(8, int(env))
        except ValueError:
            raise CmGammaError(f"CMGAMMA_PREC={env!r} is not an integer")
    return fallback


def _parse_x(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise CmGammaError(f"cannot parse {text!r} as an exact rational")


def _load(args):
    path = getattr(args, "constants", None)
    return load_constants(path)


def _print_exact(label: str, value: Fraction) -> None:
    approx = float(value)
    print(f"{label} = {frac_str(value)} (~ {approx:.12g})")


def cmd_eval(args) -> int:
    prec = _default_prec(args, 128)
    consts = _load(args)
    fn = args.function
    if fn == "polygamma" and args.order is None:
        raise CmGammaError("eval polygamma requires --order M")
    x = _parse_x(args.x)
    if fn == "p":
        _print_exact(f"p({frac_str(x)})", bounds.p_eval(x, consts))
        return 0
    if fn == "Q":
        _print_exact(f"Q({frac_str(x)})", bounds.q_eval(x, consts))
        return 0
    if fn == "B":
        exact = bounds.bound_exact(x, consts)
        _print_exact(f"B({frac_str(x)})", exact)
        print(f"  = p(x)/({SCALE_P} x^4 (x+1)^10)")
        return 0
    if fn in ("psi1", "psi2", "polygamma"):
        m = {"psi1": 1, "psi2": 2}.get(fn, args.order)
        ball = polygamma(m, x, prec)
        print(f"psi^({m})({frac_str(x)}) = {ball}  [{prec}-bit target]")
        if args.crosscheck:
            est = polygamma_quadrature_crosscheck(m, x, min(prec, 256))
            print(f"  quadrature estimate (non-certified): {est}")
        return 0
    if fn == "g":
        ball = bounds.g_eval(x, prec, constants=consts)
        print(f"g({frac_str(x)}) = {ball}  [{prec}-bit target]")
        return 0
    if fn == "H":
        ball = bounds.h_eval(x, prec, constants=consts)
        print(f"H({frac_str(x)}) = {ball}  [{prec}-bit target]")
        print(f"  rational part Q(x)/({SCALE_Q} x^2 (1+x)^10 (2+x)^10) = "
              f"{frac_str(bounds.remainder_exact(x, consts))}")
        return 0
    raise CmGammaError(f"unknown function {fn!r}")


def cmd_identity_check(args) -> int:
    consts = _load(args)
    which = args.which
    if which in ("expansion", "remark2"):
        rep = bounds.pf_expansion_identity_check(consts)
        print(rep.detail)
        ok = rep.expansion_equal if which == "expansion" else rep.remark_equal
        return 0 if ok else FAIL_EXIT
    if which == "telescoping":
        if args.x is None:
            raise CmGammaError("identity-check telescoping requires --x")
        prec = _default_prec(args, 192)
        rep = bounds.telescoping_identity_check(_parse_x(args.x), prec,
                                                constants=consts)
        print(rep.detail())
        return 0 if rep.passed else FAIL_EXIT
    raise CmGammaError(f"unknown identity {which!r}")


def cmd_replay_proof(args) -> int:
    try:
        consts = _load(args)
        report = replay.replay_proof(consts)
    except ConstantsFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    if args.emit:
        doc = report.to_json()
        if args.emit == "-":
            sys.stdout.write(doc)
        else:
            try:
                with open(args.emit, "w", encoding="utf-8") as fh:
                    fh.write(doc)
            except OSError as exc:
                print(f"error: cannot write {args.emit}: {exc}", file=sys.stderr)
                return USAGE_EXIT
            print(f"certificate written to {args.emit}")
    else:
        sys.stdout.write(report.to_text())
    if not report.overall:
        bad = report.first_failure()
        print(f"FAILED at step {bad.step}: {bad.name}", file=sys.stderr)
        return FAIL_EXIT
    return 0


def _parse_grid(text: str | None) -> scan.GridSpec:
    if not text:
        return scan.default_grid()
    if text.startswith("geometric:"):
        parts = text.split(":")[1:]
        if len(parts) != 3:
            raise CmGammaError("expected geometric:START:RATIO:COUNT")
        return scan.GridSpec.geometric(Fraction(parts[0]), Fraction(parts[1]),
                                       int(parts[2]))
    if text.startswith("span:"):
        parts = text.split(":")[1:]
        if len(parts) != 3:
            raise CmGammaError("expected span:START:STOP:COUNT")
        return scan.GridSpec.geometric_span(Fraction(parts[0]), Fraction(parts[1]),
                                            int(parts[2]))
    return scan.GridSpec.explicit([_parse_x(tok) for tok in text.split(",")])


def cmd_cm_scan(args) -> int:
    prec = _default_prec(args, 256)
    consts = _load(args)
    grid = _parse_grid(args.grid)
    policy = PrecisionPolicy(target_bits=prec)
    report = scan.cm_scan(args.kind, args.kmax, grid, policy, consts)
    if args.format == "json":
        out = report.to_json()
    elif args.format == "csv":
        out = report.to_csv()
    else:
        out = report.to_text()
    if args.output and args.output != "-":
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(out)
        except OSError as exc:
            print(f"error: cannot write {args.output}: {exc}", file=sys.stderr)
            return USAGE_EXIT
    else:
        sys.stdout.write(out)
    return FAIL_EXIT if report.failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cmgamma",
        description="Certified tri-/tetra-gamma bound evaluation and "
                    "complete-monotonicity verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate a function with a certified enclosure")
    p_eval.add_argument("function", choices=_EVAL_FUNCTIONS)
    p_eval.add_argument("x", help="evaluation point (exact rational, e.g. 1/4)")
    p_eval.add_argument("--prec", type=int, help="target precision in bits")
    p_eval.add_argument("--order", type=int, help="derivative order for 'polygamma'")
    p_eval.add_argument("--crosscheck", action="store_true",
                        help="also print the non-certified quadrature estimate")
    p_eval.add_argument("--constants", help=argparse.SUPPRESS)
    p_eval.set_defaults(func=cmd_eval)

    p_id = sub.add_parser("identity-check", help="exact or enclosure identity checks")
    p_id.add_argument("which", choices=("expansion", "remark2", "telescoping"))
    p_id.add_argument("--x", help="evaluation point (telescoping only)")
    p_id.add_argument("--prec", type=int)
    p_id.add_argument("--constants", help=argparse.SUPPRESS)
    p_id.set_defaults(func=cmd_identity_check)

    p_replay = sub.add_parser("replay-proof",
                              help="replay the positivity-chain proof and emit a certificate")
    p_replay.add_argument("--emit", metavar="PATH",
                          help="write the JSON certificate to PATH ('-' for stdout)")
    p_replay.add_argument("--constants", metavar="PATH",
                          help="alternate constants file (testing hook)")
    p_replay.set_defaults(func=cmd_replay_proof)

    p_scan = sub.add_parser("cm-scan", help="grid scan of (-1)^k f^(k)(x) signs")
    p_scan.add_argument("kind", choices=("g", "H"))
    p_scan.add_argument("--kmax", type=int, default=8)
    p_scan.add_argument("--grid",
                        help="'x1,x2,...' | geometric:START:RATIO:COUNT | "
                             "span:START:STOP:COUNT (default span:1/16:64:25)")
    p_scan.add_argument("--prec", type=int, help="target precision in bits")
    p_scan.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p_scan.add_argument("--output", metavar="PATH", help="write report to PATH")
    p_scan.add_argument("--constants", help=argparse.SUPPRESS)
    p_scan.set_defaults(func=cmd_cm_scan)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalize other codes
        return USAGE_EXIT if exc.code not in (0,) else 0
    try:
        return args.func(args)
    except CmGammaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
