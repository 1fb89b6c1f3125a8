"""Command line front end: eval, reduce, diff, verify, series.

All outputs are machine readable (JSON on stdout; errors as JSON on stderr).
Exit codes: 0 success, 1 verification failures, 2 malformed arguments (from
argparse), 3 evaluation errors such as pole proximity.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .core import DEFAULT_POLICY, TolerancePolicy
from .eisenstein import DEFAULT_TRUNCATION, q_coefficients
from .errors import WPFieldError
from .reduction import (
    e2_anywhere,
    e4_anywhere,
    e6_anywhere,
    invariants_anywhere,
    reduce_point,
    reduce_tau,
    wp_anywhere,
    wp_prime_anywhere,
    zeta_anywhere,
)
from .symbolic import differentiate, expr_to_text, parse_expr
from .verify import load_tolerance_config, run_identity_suite

TOL_FILE_ENV = "WPFIELD_TOL_FILE"

_EVAL_FUNCTIONS = ("wp", "wp1", "zeta", "e2", "e4", "e6", "g2", "g3", "delta")
_NEEDS_Z = frozenset({"wp", "wp1", "zeta"})


def _parse_complex(text: str) -> complex:
    """Parse 'RE,IM' (or a bare real part) into a complex number."""
    parts = text.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise ValueError(f"expected RE,IM but got {text!r}")


def _pair(value: complex) -> list[float]:
    return [value.real, value.imag]


def _print_json(obj) -> None:
    print(json.dumps(obj))


def _cmd_eval(args) -> int:
    tau, z, fn = args.tau, args.z, args.fn
    tail = DEFAULT_TRUNCATION.tail_bound
    if fn in _NEEDS_Z:
        evaluator = {"wp": wp_anywhere, "wp1": wp_prime_anywhere, "zeta": zeta_anywhere}[fn]
        res = evaluator(tau, z)
        value, est = res.value, res.est_error
    else:
        scale = abs(reduce_tau(tau)[0].scale(tau))
        if fn == "e2":
            value, est = e2_anywhere(tau), tail / scale**2
        elif fn == "e4":
            value, est = e4_anywhere(tau), tail / scale**4
        elif fn == "e6":
            value, est = e6_anywhere(tau), tail / scale**6
        else:
            inv = invariants_anywhere(tau)
            g2_est = (4.0 * math.pi**4 / 3.0) * tail / scale**4
            g3_est = (8.0 * math.pi**6 / 27.0) * tail / scale**6
            if fn == "g2":
                value, est = inv.g2, g2_est
            elif fn == "g3":
                value, est = inv.g3, g3_est
            else:
                value = inv.delta
                est = 3.0 * abs(inv.g2) ** 2 * g2_est + 54.0 * abs(inv.g3) * g3_est
        est = max(est, DEFAULT_POLICY.series_tail_bound)
    out = {"fn": fn, "tau": _pair(tau), "re": value.real, "im": value.imag, "est_error": est}
    if z is not None:
        out["z"] = _pair(z)
    _print_json(out)
    return 0


def _cmd_reduce(args) -> int:
    tau, z = args.tau, args.z
    rr = reduce_point(tau, z)
    out = {
        "gamma": {"a": rr.gamma.a, "b": rr.gamma.b, "c": rr.gamma.c, "d": rr.gamma.d},
        "tau_star": _pair(rr.tau_star),
        "m": rr.m,
        "n": rr.n,
        "z_star": _pair(rr.z_star) if rr.z_star is not None else None,
        "scale": _pair(rr.scale),
    }
    _print_json(out)
    return 0


def _cmd_diff(args) -> int:
    expr = parse_expr(args.expr)
    print(expr_to_text(differentiate(expr, args.var)))
    return 0


def _cmd_verify(args) -> int:
    tol_file = args.tol_file or os.environ.get(TOL_FILE_ENV)
    if tol_file:
        policy, overrides = load_tolerance_config(tol_file)
    else:
        policy, overrides = TolerancePolicy(), {}
    only = args.cases.split(",") if args.cases else None
    report = run_identity_suite(
        seed=args.seed, policy=policy, only=only, case_tolerances=overrides
    )
    if args.json:
        _print_json(report.to_json_dict())
    elif args.csv:
        sys.stdout.write(report.to_csv())
    else:
        print(report.to_text())
    return 0 if report.all_passed else 1


_WP0_TERM = "u*q^{m}/(1-u*q^{m})^2 + (q^{m}/u)/(1-q^{m}/u)^2 - 2*q^{m}/(1-q^{m})^2"
_ZETA0_TERM = "-q^{n}*u/(1-q^{n}*u) + (q^{n}/u)/(1-q^{n}/u)"


def _cmd_series(args) -> int:
    fn, order = args.fn, args.order
    if order < 0:
        raise WPFieldError(f"order must be >= 0, got {order}")
    if fn in ("e2", "e4", "e6"):
        _print_json({"fn": fn, "order": order, "coefficients": q_coefficients(fn, order)})
        return 0
    # wp0/zeta0 coefficients are rational functions of u, not numbers; print
    # the exact m-indexed summands instead (q^m collected per index m).
    if fn == "wp0":
        terms = [{"m": 0, "term": "u/(1-u)^2"}]
        terms += [{"m": m, "term": _WP0_TERM.format(m=m)} for m in range(1, order + 1)]
        out = {
            "fn": fn,
            "order": order,
            "prefactor": "(2*pi*i)^2",
            "constant": "1/12",
            "terms": terms,
        }
    else:
        terms = [{"n": 0, "term": "-u/(1-u)"}]
        terms += [{"n": n, "term": _ZETA0_TERM.format(n=n)} for n in range(1, order + 1)]
        out = {
            "fn": fn,
            "order": order,
            "prefactor": "2*pi*i",
            "affine_part": "eta1*z - pi*i",
            "terms": terms,
        }
    _print_json(out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wpfield",
        description="Weierstrass field evaluator, reducer, differentiator, verifier.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate a field function at (tau, z)")
    p_eval.add_argument("--fn", required=True, choices=_EVAL_FUNCTIONS)
    p_eval.add_argument(
        "--tau", required=True, type=_parse_complex, help="tau as RE,IM with IM > 0"
    )
    p_eval.add_argument(
        "--z", type=_parse_complex, help="z as RE,IM (required for wp, wp1, zeta)"
    )
    p_eval.set_defaults(run=_cmd_eval)

    p_red = sub.add_parser("reduce", help="reduce tau (and optionally z) to the base domain")
    p_red.add_argument(
        "--tau", required=True, type=_parse_complex, help="tau as RE,IM with IM > 0"
    )
    p_red.add_argument("--z", type=_parse_complex, help="z as RE,IM")
    p_red.set_defaults(run=_cmd_reduce)

    p_diff = sub.add_parser("diff", help="differentiate an expression symbolically")
    p_diff.add_argument("--expr", required=True, help="expression in the text serialization")
    p_diff.add_argument("--var", required=True, choices=("z", "tau"))
    p_diff.set_defaults(run=_cmd_diff)

    p_ver = sub.add_parser("verify", help="run the seeded identity suite")
    p_ver.add_argument("--seed", type=int, default=42)
    p_ver.add_argument(
        "--tol-file", help=f"tolerance config path (default: ${TOL_FILE_ENV} if set)"
    )
    p_ver.add_argument("--cases", help="comma-separated case-name subset")
    fmt = p_ver.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="emit the report as JSON")
    fmt.add_argument("--csv", action="store_true", help="emit the report as CSV")
    p_ver.set_defaults(run=_cmd_verify)

    p_ser = sub.add_parser("series", help="print q-expansion data")
    p_ser.add_argument("--fn", required=True, choices=("wp0", "zeta0", "e2", "e4", "e6"))
    p_ser.add_argument("--order", type=int, required=True)
    p_ser.set_defaults(run=_cmd_series)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "eval" and args.fn in _NEEDS_Z and args.z is None:
        parser.error(f"--z is required for --fn {args.fn}")
    try:
        return args.run(args)
    except WPFieldError as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 3
    except ValueError as exc:
        json.dump({"error": "ValueError", "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
