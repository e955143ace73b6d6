"""Translate monad-algebra expressions into operation scripts.

The translation is schema-directed: every subexpression is translated
against its inferred input type, so all emitted operation paths are
concrete. Composition concatenates, mapping prefixes every path of the
body's script with ``*`` (turning its operations into bulk operations),
and the remaining forms expand into small script gadgets:

* constants: wrap in a tuple, add the constant as a sibling, delete the
  wrap, eliminate the one-attribute tuple;
* tuple formation over f1..fn: duplicate the input into an n-attribute
  tuple (iterated insert/copy/rename, eliminating the scratch tuple at
  the end), then push each fi down its branch;
* pairwith: insert a one-attribute tuple around each set member, move
  the remaining attributes into it, eliminate the outer tuple;
* union: duplicate into two branches, translate the operands there, copy
  the second set's members into the first, clean up;
* difference: per member of the left set, collect the equal members of
  the right set by copy + select, then keep members whose collection is
  empty by comparing against a fresh empty-set constant;
* intersection: lowered through difference (f minus (f minus g));
* nesting: self-copy of the relation, per-tuple filtering of the copy to
  the tuples that agree on the non-grouped attributes, projection of the
  copy onto the grouped attributes.

An expression whose output type is ``{_}`` always evaluates to the empty
set, so it is translated as the empty-set constant gadget; this keeps
every emitted path inside the known part of the schema. Only selection,
difference, intersection, and nesting emit select operations, so
select-free expressions translate to select-free scripts.
"""

from __future__ import annotations

from . import ma, ops
from .ma import MaExpr, typecheck
from .ops import VcpOp
from .paths import Path, ROOT, STAR
from .values import (
    BottomType,
    EMPTY_SET,
    SetType,
    TupleType,
    UNIT_TUPLE,
    ValueType,
    VcpError,
    fresh_attr,
)

__all__ = ["translate", "fresh_attr"]


def translate(e: MaExpr, input: ValueType) -> list[VcpOp]:
    """A script s with run_script(input, v, s) == eval_expr(e, v) for conforming v."""
    if isinstance(e, ma.Id):
        return []
    out_t = typecheck(e, input)
    if isinstance(out_t, BottomType):
        return _const_gadget(input, EMPTY_SET)
    if isinstance(e, ma.Comp):
        mid = typecheck(e.f, input)
        return translate(e.f, input) + translate(e.g, mid)
    if isinstance(e, ma.Const):
        return _const_gadget(input, e.value)
    if isinstance(e, ma.Sing):
        return [ops.InsertSet(ROOT)]
    if isinstance(e, ma.Map):
        return _prefix(translate(e.body, input.elem), (STAR,))
    if isinstance(e, ma.Flatten):
        return [ops.EliminateSet((STAR,))]
    if isinstance(e, ma.Pairwith):
        return _pairwith_gadget(input, e.attr)
    if isinstance(e, ma.Tup):
        return _tuple_gadget(input, e.fields)
    if isinstance(e, ma.Proj):
        keep = e.attr
        return [ops.Delete((n,)) for n in input.names if n != keep] + [ops.EliminateTuple(ROOT)]
    if isinstance(e, ma.Union):
        return _union_gadget(input, e.f, e.g)
    if isinstance(e, ma.Select):
        return [ops.Select(ROOT, e.a, e.b)]
    if isinstance(e, ma.Diff):
        return _diff_gadget(input, e.f, e.g)
    if isinstance(e, ma.Intersect):
        return translate(ma.Diff(e.f, ma.Diff(e.f, e.g)), input)
    if isinstance(e, ma.Nest):
        return _nest_gadget(input, e.attr, e.grouped)
    raise VcpError(f"unknown expression {e!r}")


def _prefix(script: list[VcpOp], prefix: Path) -> list[VcpOp]:
    """Retarget a script onto the subtree at `prefix`."""
    out = []
    for op in script:
        if isinstance(op, (ops.CopyTuple, ops.CopySet)):
            out.append(type(op)(prefix + op.src, prefix + op.dest))
        elif isinstance(op, (ops.Rename, ops.Delete)):
            out.append(type(op)(prefix + op.edge, *_rest(op)))
        elif isinstance(op, ops.NewConst):
            out.append(ops.NewConst(prefix + op.node, op.attr, op.const))
        elif isinstance(op, ops.InsertTuple):
            out.append(ops.InsertTuple(prefix + op.node, op.attr))
        elif isinstance(op, (ops.InsertSet, ops.EliminateSet, ops.EliminateTuple)):
            out.append(type(op)(prefix + op.node))
        elif isinstance(op, ops.Select):
            out.append(ops.Select(prefix + op.node, op.a, op.b))
        else:
            raise VcpError(f"unknown operation {op!r}")
    return out


def _rest(op):
    return (op.attr,) if isinstance(op, ops.Rename) else ()


def _const_gadget(input: ValueType, const) -> list[VcpOp]:
    wrap = fresh_attr(input, "w")
    via = fresh_attr(input, "c", avoid=[wrap])
    return [
        ops.InsertTuple(ROOT, wrap),
        ops.NewConst(ROOT, via, const),
        ops.Delete((wrap,)),
        ops.EliminateTuple(ROOT),
    ]


def _dup_gadget(input: ValueType, names: tuple[str, ...]) -> list[VcpOp]:
    """Make an n-attribute tuple of n copies of the input value."""
    first = names[0]
    script: list[VcpOp] = [ops.InsertTuple(ROOT, first)]
    if len(names) == 1:
        return script
    script.append(ops.InsertTuple((first,), names[1]))
    script.append(ops.CopyTuple((first, names[1]), ROOT))
    for prev, cur in zip(names[1:], names[2:]):
        script.append(ops.Rename((first, prev), cur))
        script.append(ops.CopyTuple((first, cur), ROOT))
    script.append(ops.EliminateTuple((first,)))
    return script


def _tuple_gadget(input: ValueType, fields) -> list[VcpOp]:
    if not fields:
        return _const_gadget(input, UNIT_TUPLE)
    names = tuple(n for n, _ in fields)
    script = _dup_gadget(input, names)
    for name, sub in fields:
        script += _prefix(translate(sub, input), (name,))
    return script


def _pairwith_gadget(input: TupleType, attr: str) -> list[VcpOp]:
    script: list[VcpOp] = [ops.InsertTuple((attr, STAR), attr)]
    for other in input.names:
        if other != attr:
            script.append(ops.CopyTuple((other,), (attr, STAR)))
            script.append(ops.Delete((other,)))
    script.append(ops.EliminateTuple(ROOT))
    return script


def _union_gadget(input: ValueType, f: MaExpr, g: MaExpr) -> list[VcpOp]:
    # A {_}-typed operand contributes nothing; translate the other side alone.
    if isinstance(typecheck(f, input), BottomType):
        return translate(g, input)
    if isinstance(typecheck(g, input), BottomType):
        return translate(f, input)
    left = fresh_attr(input, "u1")
    right = fresh_attr(input, "u2", avoid=[left])
    return (
        _dup_gadget(input, (left, right))
        + _prefix(translate(f, input), (left,))
        + _prefix(translate(g, input), (right,))
        + [
            ops.CopySet((right, STAR), (left,)),
            ops.Delete((right,)),
            ops.EliminateTuple(ROOT),
        ]
    )


def _diff_gadget(input: ValueType, f: MaExpr, g: MaExpr) -> list[VcpOp]:
    if isinstance(typecheck(g, input), BottomType):
        return translate(f, input)
    left = fresh_attr(input, "d1")
    right = fresh_attr(input, "d2", avoid=[left])
    w = fresh_attr(input, "w", avoid=[left, right])
    w2 = fresh_attr(input, "w2", avoid=[left, right, w])
    empty = fresh_attr(input, "e0", avoid=[left, right, w, w2])
    return (
        _dup_gadget(input, (left, right))
        + _prefix(translate(f, input), (left,))
        + _prefix(translate(g, input), (right,))
        + [
            # Wrap members on both sides so deep equality becomes a select.
            ops.InsertTuple((left, STAR), w),
            ops.InsertTuple((right, STAR), w2),
            ops.CopyTuple((right,), (left, STAR)),
            ops.Delete((right,)),
            ops.CopyTuple((left, STAR, w), (left, STAR, right, STAR)),
            ops.Select((left, STAR, right), w, w2),
            ops.NewConst((left, STAR), empty, EMPTY_SET),
            ops.Select((left,), right, empty),
            ops.Delete((left, STAR, right)),
            ops.Delete((left, STAR, empty)),
            ops.EliminateTuple((left, STAR)),
            ops.EliminateTuple(ROOT),
        ]
    )


def _nest_gadget(input: SetType, attr: str, grouped: tuple[str, ...]) -> list[VcpOp]:
    elem: TupleType = input.elem
    rel = fresh_attr(input, "r", avoid=[attr])
    keys = tuple(n for n in elem.names if n not in grouped)
    primes: list[str] = []
    for k in keys:
        primes.append(fresh_attr(input, k + "2", avoid=[rel, attr, *primes]))
    script: list[VcpOp] = [
        ops.InsertTuple(ROOT, rel),
        ops.CopyTuple((rel,), (rel, STAR)),
        ops.EliminateTuple(ROOT),
    ]
    for b in grouped:
        script.append(ops.Delete((STAR, b)))
    script.append(ops.Rename((STAR, rel), attr))
    for k, k2 in zip(keys, primes):
        script.append(ops.Rename((STAR, attr, STAR, k), k2))
    for k in keys:
        script.append(ops.CopyTuple((STAR, k), (STAR, attr, STAR)))
    for k, k2 in zip(keys, primes):
        script.append(ops.Select((STAR, attr), k, k2))
    for k, k2 in zip(keys, primes):
        script.append(ops.Delete((STAR, attr, STAR, k)))
        script.append(ops.Delete((STAR, attr, STAR, k2)))
    return script
