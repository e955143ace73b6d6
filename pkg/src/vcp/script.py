"""Line-oriented script format for operation sequences.

One operation per line, ``#`` starts a comment, blank lines are skipped::

    newconst <node> <attr> <const>     const: INT | STRING | {} | <>
    instuple <node> <attr>
    insset <node>
    rename <edge> <attr>
    elimset <node>
    elimtuple <node>
    delete <edge>
    copy <edge> -> <node>
    move <edge> -> <node>
    select <node> <attrA> <attrB>

``copy`` dispatches on the source spelling: a path ending in ``*`` copies
a set edge, otherwise a tuple edge. ``move`` is a macro for copy followed
by deletion of the source; moving a set edge deletes the tuple edge the
source set hangs on. Printing emits primitive operations only.
"""

from __future__ import annotations

import re

from . import ops
from .ops import VcpOp
from .paths import Star, is_ident, parse_path, print_path
from .text import parse_value, print_value
from .values import ParseError, is_const

_WORD = re.compile(r'"(?:[^"\\\n]|\\.)*"|\S+')


def parse_script(text: str) -> list[VcpOp]:
    out: list[VcpOp] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            out.extend(parse_line(line))
        except ParseError as err:
            raise ParseError(f"line {lineno}: {err}") from None
    return out


def parse_line(line: str) -> list[VcpOp]:
    words = _WORD.findall(line)
    kw, args = words[0], words[1:]

    def arity(n: int):
        if len(args) != n:
            raise ParseError(f"'{kw}' takes {n} argument(s), got {len(args)}")

    if kw == "newconst":
        arity(3)
        const = parse_value(args[2])
        if not is_const(const):
            raise ParseError(f"not a constant: {args[2]}")
        return [ops.NewConst(parse_path(args[0]), _attr(args[1]), const)]
    if kw == "instuple":
        arity(2)
        return [ops.InsertTuple(parse_path(args[0]), _attr(args[1]))]
    if kw == "insset":
        arity(1)
        return [ops.InsertSet(parse_path(args[0]))]
    if kw == "rename":
        arity(2)
        return [ops.Rename(parse_path(args[0]), _attr(args[1]))]
    if kw == "elimset":
        arity(1)
        return [ops.EliminateSet(parse_path(args[0]))]
    if kw == "elimtuple":
        arity(1)
        return [ops.EliminateTuple(parse_path(args[0]))]
    if kw == "delete":
        arity(1)
        edge = parse_path(args[0])
        if not edge or isinstance(edge[-1], Star):
            raise ParseError("'delete' needs a tuple edge")
        return [ops.Delete(edge)]
    if kw in ("copy", "move"):
        if len(args) != 3 or args[1] != "->":
            raise ParseError(f"'{kw}' syntax is: {kw} <edge> -> <node>")
        src, dest = parse_path(args[0]), parse_path(args[2])
        if not src:
            raise ParseError("the copied edge cannot be the root")
        copy = ops.CopySet(src, dest) if isinstance(src[-1], Star) else ops.CopyTuple(src, dest)
        if kw == "copy":
            return [copy]
        if isinstance(src[-1], Star):
            holder = src[:-1]
            if not holder or isinstance(holder[-1], Star):
                raise ParseError("cannot move a set edge that hangs on no tuple edge")
            return [copy, ops.Delete(holder)]
        return [copy, ops.Delete(src)]
    if kw == "select":
        arity(3)
        return [ops.Select(parse_path(args[0]), _attr(args[1]), _attr(args[2]))]
    raise ParseError(f"unknown operation {kw!r}")


def _attr(word: str) -> str:
    if not is_ident(word):
        raise ParseError(f"bad attribute name {word!r}")
    return word


def print_op(op: VcpOp) -> str:
    if isinstance(op, ops.NewConst):
        return f"newconst {print_path(op.node)} {op.attr} {print_value(op.const)}"
    if isinstance(op, ops.InsertTuple):
        return f"instuple {print_path(op.node)} {op.attr}"
    if isinstance(op, ops.InsertSet):
        return f"insset {print_path(op.node)}"
    if isinstance(op, ops.Rename):
        return f"rename {print_path(op.edge)} {op.attr}"
    if isinstance(op, ops.EliminateSet):
        return f"elimset {print_path(op.node)}"
    if isinstance(op, ops.EliminateTuple):
        return f"elimtuple {print_path(op.node)}"
    if isinstance(op, ops.Delete):
        return f"delete {print_path(op.edge)}"
    if isinstance(op, (ops.CopyTuple, ops.CopySet)):
        return f"copy {print_path(op.src)} -> {print_path(op.dest)}"
    if isinstance(op, ops.Select):
        return f"select {print_path(op.node)} {op.a} {op.b}"
    raise ParseError(f"unknown operation {op!r}")


def print_script(script: list[VcpOp]) -> str:
    return "".join(print_op(op) + "\n" for op in script)
