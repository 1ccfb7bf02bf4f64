"""Command-line interface.

Subcommands:

* ``eval -e EXPR [--space SPACE]`` evaluate a symbolic expression
* ``hrr --max-n N --max-k K``      Euler-characteristic table check
* ``tower-check --config FILE``    randomized push-forward identity runs
* ``err-transfer --series LIST --which {O,O-1} --order N``
* ``solve-r --target-o LIST --target-o1 LIST --order N``
* ``numeric --scenario FILE [--out DIR]``  scenario runner with reports

Exit status: 0 when every requested check passes, 1 when a computation
ran but an assertion failed, 2 for unusable input (missing files, JSON or
expression syntax errors, bad configuration).

All numeric output is printed with 12 significant digits; exact rational
values print as p/q.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from ..exact_algebra import UnivariateSeries, render_rational
from ..rr_engine import (
    NoSolutionError,
    err_transfer_O,
    err_transfer_Ominus1,
    hrr_table,
    solve_R,
)
from .evaluate import EvalError, evaluate_expression, format_value
from .expr import ExprSyntaxError
from .scenarios import ScenarioError, run_scenario, render_report, sig

USAGE_ERROR = 2
CHECK_FAILED = 1


def _parse_series_flag(text: str, flag: str) -> UnivariateSeries:
    """Parse '[1, 0, -1/2]' or '1,0,-1/2' into a series of rationals."""
    body = text.strip()
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    try:
        coeffs = [Fraction(part.strip()) for part in body.split(",") if part.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise ScenarioError(f"{flag}: cannot parse series {text!r}: {exc}") from exc
    if not coeffs:
        raise ScenarioError(f"{flag}: empty series {text!r}")
    return UnivariateSeries(coeffs, len(coeffs) - 1)


def _cmd_eval(args: argparse.Namespace) -> int:
    value = evaluate_expression(args.expr, args.space)
    print(format_value(value))
    return 0


def _cmd_hrr(args: argparse.Namespace) -> int:
    rows = hrr_table(args.max_n, args.max_k)
    width = max(len(render_rational(chi)) for _, _, chi, _, _ in rows)
    for n, k, chi, expected, ok in rows:
        status = "ok" if ok else "MISMATCH"
        print(
            f"n={n} k={k:>3} chi={render_rational(chi):>{width}} "
            f"expected={expected:>{width}} {status}"
        )
    failed = [r for r in rows if not r[4]]
    print(f"{len(rows) - len(failed)}/{len(rows)} rows match")
    return CHECK_FAILED if failed else 0


def _cmd_tower_check(args: argparse.Namespace) -> int:
    result = run_scenario(args.config, args.out)
    if result.mode != "tower-check":
        raise ScenarioError(
            f"{args.config}: expected a tower-check scenario, got mode {result.mode!r}"
        )
    for case in result.report["cases"]:
        status = "ok" if case["passed"] else "FAILED"
        print(f"[{case['index']}] {case['label']}: {status}")
    print(f"report: {result.out_dir / 'report.json'}")
    return 0 if result.passed else CHECK_FAILED


def _cmd_err_transfer(args: argparse.Namespace) -> int:
    series = _parse_series_flag(args.series, "--series")
    op = err_transfer_O if args.which == "O" else err_transfer_Ominus1
    image = op(series, args.order).series_in_u
    for k in range(image.order + 1):
        print(f"u^{k}: {render_rational(image.coefficient(k))}")
    return 0


def _cmd_solve_r(args: argparse.Namespace) -> int:
    target_o = _parse_series_flag(args.target_o, "--target-o")
    target_o1 = _parse_series_flag(args.target_o1, "--target-o1")
    try:
        sol = solve_R(target_o, target_o1, args.order)
    except NoSolutionError as exc:
        print(f"no solution: {exc}", file=sys.stderr)
        return CHECK_FAILED
    for k in range(2 * args.order + 2):
        even = render_rational(sol.r_even.coefficient(k))
        odd = render_rational(sol.r_odd.coefficient(k))
        print(f"x^{k}: even {even}, odd {odd}")
    back_o = err_transfer_O(sol.combined(), args.order).series_in_u
    back_o1 = err_transfer_Ominus1(sol.combined(), args.order).series_in_u
    ok = all(
        back_o.coefficient(m) == target_o.coefficient(m)
        and back_o1.coefficient(m) == target_o1.coefficient(m)
        for m in range(args.order + 1)
    )
    print(f"round trip: {'ok' if ok else 'FAILED'}")
    return 0 if ok else CHECK_FAILED


def _cmd_numeric(args: argparse.Namespace) -> int:
    result = run_scenario(args.scenario, args.out)
    sys.stdout.write(result.report_text)
    return 0 if result.passed else CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chernlab",
        description="Exact characteristic-class calculus and a numeric curvature lab.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate a symbolic expression")
    p_eval.add_argument("-e", "--expr", required=True, help="expression to evaluate")
    p_eval.add_argument(
        "--space",
        help="ambient space expression, e.g. 'P(2)' or "
        "'proj_bundle(universal2(6), bundle(2, [c1, c2]))'",
    )
    p_eval.set_defaults(fn=_cmd_eval)

    p_hrr = sub.add_parser("hrr", help="Euler characteristic table for O(k) twists")
    p_hrr.add_argument("--max-n", type=int, default=4)
    p_hrr.add_argument("--max-k", type=int, default=5)
    p_hrr.set_defaults(fn=_cmd_hrr)

    p_tower = sub.add_parser("tower-check", help="randomized push-forward identity")
    p_tower.add_argument("--config", required=True, help="JSON scenario file")
    p_tower.add_argument("--out", help="report directory (default: reports/<name>)")
    p_tower.set_defaults(fn=_cmd_tower_check)

    p_err = sub.add_parser("err-transfer", help="apply a transfer operator")
    p_err.add_argument("--series", required=True, help="series literal, e.g. '[0, 1, 0, -1/6]'")
    p_err.add_argument("--which", choices=("O", "O-1"), default="O")
    p_err.add_argument("--order", type=int, default=3, help="output order in u")
    p_err.set_defaults(fn=_cmd_err_transfer)

    p_solve = sub.add_parser("solve-r", help="recover a series from transfer targets")
    p_solve.add_argument("--target-o", required=True, help="target u-series for O")
    p_solve.add_argument("--target-o1", required=True, help="target u-series for O(-1)")
    p_solve.add_argument("--order", type=int, default=3)
    p_solve.set_defaults(fn=_cmd_solve_r)

    p_num = sub.add_parser("numeric", help="run a JSON scenario and write a report")
    p_num.add_argument("--scenario", required=True, help="JSON scenario file")
    p_num.add_argument("--out", help="report directory (default: reports/<name>)")
    p_num.set_defaults(fn=_cmd_numeric)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ExprSyntaxError, EvalError, ScenarioError) as exc:
        print(str(exc), file=sys.stderr)
        return USAGE_ERROR
    except FileNotFoundError as exc:
        print(f"file not found: {exc.filename}", file=sys.stderr)
        return USAGE_ERROR
    except json.JSONDecodeError as exc:
        print(f"invalid JSON: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
