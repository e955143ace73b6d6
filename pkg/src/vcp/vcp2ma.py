"""Compile operation scripts into monad-algebra expressions.

Each operation compiles to an expression that transforms exactly the
context subtree and keeps everything else intact: attribute steps on the
way to the context wrap the inner expression in a sibling-preserving
tuple rebuild, set steps wrap it in ``map``. A script compiles to the
left-to-right composition of its per-operation expressions.

Copies reconstruct the destination region top-down. Tuple steps of the
destination path are handled by tuple rebuilding at the current level
(source and destination are both reachable by projections); at each set
step the source value is carried into the set by pairing: build
``<k: current-set, s: source>``, apply ``pairwith(k)`` and map over the
resulting pairs. The auxiliary names are generated fresh against the
schema and projected away by the rebuild itself.
"""

from __future__ import annotations

from . import ma, ops
from .ops import VcpOp, ctx_info, validate_and_apply_schema
from .paths import Path, Star, resolve
from .values import SetType, TupleType, ValueType, VcpError, fresh_attr


def compile_op(t: ValueType, op: VcpOp) -> ma.MaExpr:
    """An expression equivalent to `op`, typed t -> validate_and_apply_schema(t, op)."""
    validate_and_apply_schema(t, op)
    info = ctx_info(op)
    ctx_t = resolve(t, info.ctx_path)
    local = _compile_local(t, ctx_t, op, info)
    return _push_down(t, info.ctx_path, local)


def compile_script(t: ValueType, script: list[VcpOp]) -> ma.MaExpr:
    """Left-to-right composition of per-operation expressions; empty scripts give id."""
    out: ma.MaExpr | None = None
    for op in script:
        expr = compile_op(t, op)
        t = validate_and_apply_schema(t, op)
        out = expr if out is None else ma.Comp(out, expr)
    return out if out is not None else ma.Id()


def _push_down(t: ValueType, ctx_path: Path, inner: ma.MaExpr) -> ma.MaExpr:
    """Wrap an expression on the context subtree so it applies at the root."""
    if not ctx_path:
        return inner
    seg = ctx_path[0]
    if isinstance(seg, Star):
        return ma.Map(_push_down(t.elem, ctx_path[1:], inner))
    rebuilt = _push_down(t.get(seg), ctx_path[1:], inner)
    fields = tuple(
        (n, ma.Comp(ma.Proj(n), rebuilt) if n == seg else ma.Proj(n)) for n, _ in t.fields
    )
    return ma.Tup(fields)


def _compile_local(t: ValueType, ctx_t: ValueType, op: VcpOp, info) -> ma.MaExpr:
    if isinstance(op, ops.NewConst):
        fields = tuple((n, ma.Proj(n)) for n in ctx_t.names) + ((op.attr, ma.Const(op.const)),)
        return ma.Tup(fields)
    if isinstance(op, ops.InsertTuple):
        return ma.Tup(((op.attr, ma.Id()),))
    if isinstance(op, ops.InsertSet):
        return ma.Sing()
    if isinstance(op, ops.Rename):
        old = op.edge[-1]
        return ma.Tup(tuple((op.attr if n == old else n, ma.Proj(n)) for n in ctx_t.names))
    if isinstance(op, ops.EliminateSet):
        return ma.Flatten()
    if isinstance(op, ops.EliminateTuple):
        return ma.Proj(ctx_t.names[0])
    if isinstance(op, ops.Delete):
        gone = op.edge[-1]
        return ma.Tup(tuple((n, ma.Proj(n)) for n in ctx_t.names if n != gone))
    if isinstance(op, ops.Select):
        return ma.Select(op.a, op.b)
    if isinstance(op, ops.CopyTuple):
        src = _projections(info.from_path)
        return _rebuild(t, ctx_t, info.to_path, ma.Id(), src, _paste_attr(op.src[-1]))
    if isinstance(op, ops.CopySet):
        src = _projections(info.from_path[:-1])
        return _rebuild(t, ctx_t, info.to_path, ma.Id(), src, _paste_union)
    raise VcpError(f"unknown operation {op!r}")


def _projections(path: Path) -> ma.MaExpr:
    out: ma.MaExpr = ma.Id()
    for seg in path:
        out = ma.Comp(out, ma.Proj(seg))
    return _squeeze(out)


def _squeeze(e: ma.MaExpr) -> ma.MaExpr:
    return ma.compose(ma.comp_parts(e))


def _paste_attr(label: str):
    def paste(cur: ma.MaExpr, cur_t: TupleType, src: ma.MaExpr) -> ma.MaExpr:
        fields = tuple((n, _squeeze(ma.Comp(cur, ma.Proj(n)))) for n in cur_t.names)
        return ma.Tup(fields + ((label, src),))

    return paste


def _paste_union(cur: ma.MaExpr, cur_t: ValueType, src: ma.MaExpr) -> ma.MaExpr:
    return ma.Union(cur, src)


def _rebuild(schema, cur_t, rest: Path, cur: ma.MaExpr, src: ma.MaExpr, paste) -> ma.MaExpr:
    """Transformed value of the current node, with source still reachable.

    `cur` extracts the current node from the local input, `src` the copied
    value; both are rewritten as the recursion crosses set boundaries.
    """
    if not rest:
        return paste(_squeeze(cur), cur_t, _squeeze(src))
    seg = rest[0]
    if isinstance(seg, Star):
        k = fresh_attr(schema, "k")
        s = fresh_attr(schema, "s", avoid=[k])
        body = _rebuild(schema, cur_t.elem, rest[1:], ma.Proj(k), ma.Proj(s), paste)
        carry = ma.Tup(((k, _squeeze(cur)), (s, _squeeze(src))))
        return ma.Comp(ma.Comp(carry, ma.Pairwith(k)), ma.Map(body))
    inner = _rebuild(schema, cur_t.get(seg), rest[1:], ma.Comp(cur, ma.Proj(seg)), src, paste)
    fields = tuple(
        (n, inner if n == seg else _squeeze(ma.Comp(cur, ma.Proj(n)))) for n in cur_t.names
    )
    return ma.Tup(fields)
