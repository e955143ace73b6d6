"""Batch command line: check, run, compile, decompile, eval.

Exit codes: 0 success, 1 parse error, 2 validation or type error,
3 nonconforming data. Any path argument may be ``-`` for stdin/stdout.
"""

from __future__ import annotations

import argparse
import sys

from . import ma2vcp, vcp2ma
from .ma import MaTypeError, eval_expr, parse_ma, print_ma, typecheck
from .ops import ConditionViolated, run_script, validate_and_apply_schema
from .script import parse_script, print_script
from .text import parse_type, parse_value, print_type, print_value
from .values import NoSuchPath, ParseError, VcpError, conforms

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_VALIDATION = 2
EXIT_DATA = 3


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load_schema(args):
    if not args.schema:
        raise _Fail(EXIT_PARSE, "missing --schema")
    try:
        return parse_type(_read(args.schema))
    except ParseError as err:
        raise _Fail(EXIT_PARSE, f"schema: {err}")


def _load_data(args, schema):
    if not args.data:
        raise _Fail(EXIT_PARSE, "missing --data")
    try:
        value = parse_value(_read(args.data))
    except ParseError as err:
        raise _Fail(EXIT_PARSE, f"data: {err}")
    if not conforms(value, schema):
        raise _Fail(EXIT_DATA, "data does not conform to the schema")
    return value


def _load_script(args):
    if not args.script:
        raise _Fail(EXIT_PARSE, "missing --script")
    try:
        return parse_script(_read(args.script))
    except ParseError as err:
        raise _Fail(EXIT_PARSE, f"script: {err}")


def _load_expr(args):
    if not args.expr:
        raise _Fail(EXIT_PARSE, "missing --expr")
    try:
        return parse_ma(_read(args.expr))
    except ParseError as err:
        raise _Fail(EXIT_PARSE, f"expression: {err}")


def _cmd_check(args) -> int:
    schema = _load_schema(args)
    script = _load_script(args)
    lines = []
    try:
        for op in script:
            schema = validate_and_apply_schema(schema, op)
            if args.trace:
                lines.append(print_type(schema))
    except (ConditionViolated, NoSuchPath) as err:
        raise _Fail(EXIT_VALIDATION, str(err))
    if not args.trace:
        lines.append(print_type(schema))
    _write(args.out, "".join(line + "\n" for line in lines))
    return EXIT_OK


def _cmd_run(args) -> int:
    schema = _load_schema(args)
    script = _load_script(args)
    data = _load_data(args, schema)
    try:
        _, result = run_script(schema, data, script)
    except (ConditionViolated, NoSuchPath) as err:
        raise _Fail(EXIT_VALIDATION, str(err))
    _write(args.out, print_value(result) + "\n")
    return EXIT_OK


def _cmd_compile(args) -> int:
    schema = _load_schema(args)
    script = _load_script(args)
    try:
        expr = vcp2ma.compile_script(schema, script)
    except (ConditionViolated, NoSuchPath) as err:
        raise _Fail(EXIT_VALIDATION, str(err))
    _write(args.out, print_ma(expr) + "\n")
    return EXIT_OK


def _cmd_decompile(args) -> int:
    schema = _load_schema(args)
    expr = _load_expr(args)
    try:
        script = ma2vcp.translate(expr, schema)
    except MaTypeError as err:
        raise _Fail(EXIT_VALIDATION, str(err))
    _write(args.out, print_script(script))
    return EXIT_OK


def _cmd_eval(args) -> int:
    schema = _load_schema(args)
    expr = _load_expr(args)
    try:
        typecheck(expr, schema)
    except MaTypeError as err:
        raise _Fail(EXIT_VALIDATION, str(err))
    data = _load_data(args, schema)
    _write(args.out, print_value(eval_expr(expr, data)) + "\n")
    return EXIT_OK


_COMMANDS = {
    "check": _cmd_check,
    "run": _cmd_run,
    "compile": _cmd_compile,
    "decompile": _cmd_decompile,
    "eval": _cmd_eval,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vcp", description="schema-tree query engine for complex-value databases"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("check", "validate a script and print the resulting schema"),
        ("run", "run a script on data and print the resulting value"),
        ("compile", "compile a script to an algebra expression"),
        ("decompile", "translate an algebra expression to a script"),
        ("eval", "evaluate an algebra expression on data"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--schema", help="schema file ('-' for stdin)")
        p.add_argument("--data", help="data file")
        p.add_argument("--script", help="script file")
        p.add_argument("--expr", help="expression file")
        p.add_argument("--trace", action="store_true", help="print the schema after each step")
        p.add_argument("--out", help="output file (default stdout)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _Fail as err:
        print(f"vcp: {err}", file=sys.stderr)
        return err.code
    except OSError as err:
        print(f"vcp: {err}", file=sys.stderr)
        return EXIT_PARSE
    except VcpError as err:
        print(f"vcp: {err}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
