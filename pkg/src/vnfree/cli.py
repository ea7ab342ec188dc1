"""``vnfree`` command-line front end.

Exit codes: 0 on success, 1 on a parse error, 2 on a domain error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, TextIO

from vnfree.algebra import format_number
from vnfree.dsl import AlgebraValue, Value, render, run
from vnfree.errors import DomainError, ParseError, TypeMismatch, VnfreeError
from vnfree.fdim import fdim
from vnfree.groups import builtin_group, group_algebra, load_group_table
from vnfree.verify import VerifyConfig, format_report, run_verify

EXIT_OK, EXIT_PARSE, EXIT_DOMAIN = 0, 1, 2

_BUILTIN_NAMES = ("Z2", "Z3", "Z4", "Z5", "Z6", "S3", "D4", "Q8", "A4", "S4", "Z")


def _groups(table: Optional[str]):
    if not table:
        return {}
    return {g.name: g for g in load_group_table(table)}


def _streams(out, err):
    return out or sys.stdout, err or sys.stderr


def _report_error(exc: VnfreeError, err: TextIO) -> int:
    print(f"error: {type(exc).__name__}: {exc}", file=err)
    return EXIT_PARSE if isinstance(exc, ParseError) else EXIT_DOMAIN


def _evaluate(text: str, strict: bool, table: Optional[str]) -> Value:
    return run(text, strict=strict, groups=_groups(table))


def cmd_eval(expr: str, json_out: bool = False, strict: bool = False,
             table: Optional[str] = None, out: Optional[TextIO] = None,
             err: Optional[TextIO] = None) -> int:
    out, err = _streams(out, err)
    try:
        value = _evaluate(expr, strict, table)
    except VnfreeError as exc:
        return _report_error(exc, err)
    print(render(value, "json" if json_out else "text"), file=out)
    return EXIT_OK


def cmd_fdim(expr: str, table: Optional[str] = None, out: Optional[TextIO] = None,
             err: Optional[TextIO] = None) -> int:
    out, err = _streams(out, err)
    try:
        value = _evaluate(expr, False, table)
        if not isinstance(value, AlgebraValue):
            raise TypeMismatch("fdim needs an expression that evaluates to an algebra")
    except VnfreeError as exc:
        return _report_error(exc, err)
    print(format_number(fdim(value.algebra)), file=out)
    return EXIT_OK


def cmd_repl(strict: bool = False, json_out: bool = False, table: Optional[str] = None,
             inp: Optional[TextIO] = None, out: Optional[TextIO] = None,
             err: Optional[TextIO] = None) -> int:
    out, err = _streams(out, err)
    try:
        groups = _groups(table)
    except VnfreeError as exc:
        return _report_error(exc, err)
    inp = inp or sys.stdin
    interactive = inp.isatty()
    while True:
        if interactive:
            print("vnfree> ", end="", file=out, flush=True)
        line = inp.readline()
        if not line:
            return EXIT_OK
        line = line.strip()
        if not line:
            continue
        if line in (":quit", ":q"):
            return EXIT_OK
        try:
            value = run(line, strict=strict, groups=groups)
        except VnfreeError as exc:
            _report_error(exc, err)
            continue
        print(render(value, "json" if json_out else "text"), file=out, flush=True)


def cmd_verify(config: VerifyConfig, out: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    reports = run_verify(config)
    print(format_report(config, reports), file=out)
    return EXIT_OK if all(r.ok for r in reports) else EXIT_DOMAIN


def cmd_groups(table: Optional[str] = None, out: Optional[TextIO] = None,
               err: Optional[TextIO] = None) -> int:
    out, err = _streams(out, err)
    try:
        groups = load_group_table(table) if table else [builtin_group(n) for n in _BUILTIN_NAMES]
    except VnfreeError as exc:
        return _report_error(exc, err)
    print("name\torder\tirrep_dims\tfdim", file=out)
    for g in groups:
        dims = ",".join(map(str, g.irrep_dims)) or "-"
        order = format_number(g.order) if not g.is_finite else str(g.order)
        print(f"{g.name}\t{order}\t{dims}\t{format_number(fdim(group_algebra(g)))}", file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vnfree",
        description="Exact calculator for free products of hyperfinite tracial von Neumann algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate one expression")
    p.add_argument("--json", action="store_true", help="emit JSON")
    p.add_argument("--strict", action="store_true",
                   help="refuse free products not covered by a stated result")
    p.add_argument("--table", metavar="FILE", help="extra group table for LG(...)")
    p.add_argument("expr", nargs="+", help="expression (words are joined by spaces)")

    p = sub.add_parser("fdim", help="free dimension of an expression")
    p.add_argument("--table", metavar="FILE")
    p.add_argument("expr", nargs="+")

    p = sub.add_parser("repl", help="read-eval-print loop; ':quit' exits")
    p.add_argument("--json", action="store_true")
    p.add_argument("--strict", action="store_true")
    p.add_argument("--table", metavar="FILE")

    p = sub.add_parser("verify", help="randomised property checks")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--cases", type=int, default=1000)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--max-summands", type=int, default=4)
    p.add_argument("--max-matrix-size", type=int, default=4)
    p.add_argument("--weight-denominator-bound", type=int, default=12)

    p = sub.add_parser("groups", help="list group descriptors with free dimensions")
    p.add_argument("--table", metavar="FILE")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "eval":
        return cmd_eval(" ".join(args.expr), args.json, args.strict, args.table)
    if args.command == "fdim":
        return cmd_fdim(" ".join(args.expr), args.table)
    if args.command == "repl":
        return cmd_repl(args.strict, args.json, args.table)
    if args.command == "verify":
        try:
            config = VerifyConfig(args.seed, args.cases, args.max_summands,
                                  args.max_matrix_size, args.weight_denominator_bound,
                                  args.strict)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_DOMAIN
        return cmd_verify(config)
    return cmd_groups(args.table)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
