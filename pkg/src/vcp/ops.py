"""The schema-tree operations: validation, schema effects, data semantics.

Each operation targets a node or an edge of the current schema tree.
Edges are addressed by the path of their child node: a tuple edge ends in
an attribute name, a set edge ends in ``*``.

The context node of an operation is the schema node that governs it: the
target node itself for node operations (for set elimination, its parent),
the source node of the edge for edge operations, and the nearest common
ancestor of source edge and destination node for copies. If the path
from the root to the context crosses ``*`` nodes the operation is a bulk
operation: its local semantics applies to every data node matched by
that path. Copies read the source from the pre-operation snapshot of the
context value, which permits self-referential copies where the
destination lies inside the copied subtree.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import paths
from .paths import Path, Star, common_prefix, is_ident, map_nodes, print_path, resolve
from .values import (
    BottomType,
    SetType,
    SetV,
    TupleType,
    TupleV,
    Value,
    ValueType,
    VcpError,
    conforms,
    const_type,
    deep_equal,
    is_const,
)


class ConditionViolated(VcpError):
    """An applicability condition fails; raised before any schema/data change."""

    def __init__(self, reason: str, path: Path, detail: str, op: "VcpOp | None" = None):
        super().__init__(f"{reason} at {print_path(path)}: {detail}")
        self.reason = reason
        self.path = path
        self.detail = detail
        self.op = op
        self.op_index: int | None = None


def _check_ident(name: str) -> str:
    if not is_ident(name):
        raise VcpError(f"invalid attribute name {name!r}")
    return name


@dataclass(frozen=True)
class NewConst:
    """Add attribute `attr` with constant value `const` to a tuple node."""

    node: Path
    attr: str
    const: Value

    def __post_init__(self):
        _check_ident(self.attr)
        if not is_const(self.const):
            raise VcpError(f"not a constant: {self.const!r}")


@dataclass(frozen=True)
class InsertTuple:
    """Replace the subtree at `node` by a one-attribute tuple around it."""

    node: Path
    attr: str

    def __post_init__(self):
        _check_ident(self.attr)


@dataclass(frozen=True)
class InsertSet:
    """Replace the subtree at `node` by a singleton set around it."""

    node: Path


@dataclass(frozen=True)
class Rename:
    """Rename the tuple edge addressed by `edge` to `attr`."""

    edge: Path
    attr: str

    def __post_init__(self):
        _check_ident(self.attr)


@dataclass(frozen=True)
class EliminateSet:
    """Cut a set node whose parent is also a set node (flattens in data)."""

    node: Path


@dataclass(frozen=True)
class EliminateTuple:
    """Cut a tuple node that has precisely one attribute."""

    node: Path


@dataclass(frozen=True)
class Delete:
    """Delete a tuple edge and its subtree."""

    edge: Path


@dataclass(frozen=True)
class CopyTuple:
    """Copy the tuple edge `src` (and its subtree) into the tuple node `dest`."""

    src: Path
    dest: Path


@dataclass(frozen=True)
class CopySet:
    """Copy the members of the set under edge `src` into the set node `dest`."""

    src: Path
    dest: Path


@dataclass(frozen=True)
class Select:
    """Keep only members of the set at `node` whose fields `a` and `b` are deep-equal."""

    node: Path
    a: str
    b: str

    def __post_init__(self):
        _check_ident(self.a)
        _check_ident(self.b)


VcpOp = (
    NewConst
    | InsertTuple
    | InsertSet
    | Rename
    | EliminateSet
    | EliminateTuple
    | Delete
    | CopyTuple
    | CopySet
    | Select
)


@dataclass(frozen=True)
class CtxInfo:
    """Where an operation acts: context path, bulk flag, copy sub-paths."""

    ctx_path: Path
    is_bulk: bool
    from_path: Path | None = None
    to_path: Path | None = None


def ctx_info(op: VcpOp) -> CtxInfo:
    """Context node and relative copy paths of an operation."""
    if isinstance(op, (NewConst, InsertTuple, InsertSet, EliminateTuple, Select)):
        ctx = op.node
    elif isinstance(op, EliminateSet):
        ctx = op.node[:-1]
    elif isinstance(op, (Rename, Delete)):
        ctx = op.edge[:-1]
    elif isinstance(op, (CopyTuple, CopySet)):
        ctx = common_prefix(op.src[:-1], op.dest)
        return CtxInfo(
            ctx,
            any(isinstance(s, Star) for s in ctx),
            from_path=op.src[len(ctx):],
            to_path=op.dest[len(ctx):],
        )
    else:
        raise VcpError(f"unknown operation {op!r}")
    return CtxInfo(ctx, any(isinstance(s, Star) for s in ctx))


def _violated(reason: str, path: Path, detail: str, op: VcpOp):
    raise ConditionViolated(reason, path, detail, op)


def validate_and_apply_schema(t: ValueType, op: VcpOp) -> ValueType:
    """Check the operation's applicability conditions and return the new schema.

    Raises NoSuchPath when a target path does not resolve and
    ConditionViolated (with a distinct reason code) when a condition
    fails. Never mutates; the input schema is returned unchanged for the
    two operations that do not modify the schema tree (set copy, select).
    """
    if isinstance(op, NewConst):
        target = resolve(t, op.node)
        if not isinstance(target, TupleType):
            _violated("not_a_tuple_node", op.node, "new constants attach to tuple nodes", op)
        if target.has(op.attr):
            _violated("duplicate_attribute", op.node, f"attribute {op.attr!r} already exists", op)
        return paths.replace_type_at(t, op.node, target.with_field(op.attr, const_type(op.const)))

    if isinstance(op, InsertTuple):
        target = resolve(t, op.node)
        return paths.replace_type_at(t, op.node, TupleType(((op.attr, target),)))

    if isinstance(op, InsertSet):
        target = resolve(t, op.node)
        return paths.replace_type_at(t, op.node, SetType(target))

    if isinstance(op, Rename):
        old = _tuple_edge_label(t, op.edge, op)
        parent = resolve(t, op.edge[:-1])
        if op.attr != old and parent.has(op.attr):
            _violated("duplicate_attribute", op.edge, f"attribute {op.attr!r} already exists", op)
        renamed = TupleType(tuple((op.attr if n == old else n, x) for n, x in parent.fields))
        return paths.replace_type_at(t, op.edge[:-1], renamed)

    if isinstance(op, EliminateSet):
        target = resolve(t, op.node)
        if not isinstance(target, (SetType, BottomType)):
            _violated("not_a_set_node", op.node, "set elimination targets a set node", op)
        if not op.node or not isinstance(op.node[-1], Star):
            _violated("parent_not_set", op.node, "the parent node must also be a set node", op)
        # Replacing {v} by v's child turns the parent into v itself.
        return paths.replace_type_at(t, op.node[:-1], target)

    if isinstance(op, EliminateTuple):
        target = resolve(t, op.node)
        if not isinstance(target, TupleType):
            _violated("not_a_tuple_node", op.node, "tuple elimination targets a tuple node", op)
        if len(target.fields) != 1:
            _violated(
                "arity_not_one",
                op.node,
                f"tuple node has {len(target.fields)} attributes, needs exactly one",
                op,
            )
        return paths.replace_type_at(t, op.node, target.fields[0][1])

    if isinstance(op, Delete):
        label = _tuple_edge_label(t, op.edge, op)
        parent = resolve(t, op.edge[:-1])
        return paths.replace_type_at(t, op.edge[:-1], parent.without(label))

    if isinstance(op, CopyTuple):
        if not op.src or isinstance(op.src[-1], Star):
            _violated("not_a_tuple_edge", op.src, "the copied edge must be a tuple edge", op)
        label = op.src[-1]
        src_t = resolve(t, op.src)
        if not isinstance(resolve(t, op.src[:-1]), TupleType):
            _violated("not_a_tuple_edge", op.src, "the copied edge must leave a tuple node", op)
        dest_t = resolve(t, op.dest)
        if not isinstance(dest_t, TupleType):
            _violated("not_a_tuple_node", op.dest, "the destination must be a tuple node", op)
        if dest_t.has(label):
            _violated("label_exists", op.dest, f"attribute {label!r} already in destination", op)
        info = ctx_info(op)
        if any(isinstance(s, Star) for s in info.from_path):
            _violated(
                "source_not_star_free",
                op.src,
                "the path from the common ancestor to the copied edge must not cross sets",
                op,
            )
        return paths.replace_type_at(t, op.dest, dest_t.with_field(label, src_t))

    if isinstance(op, CopySet):
        if not op.src or not isinstance(op.src[-1], Star):
            _violated("not_a_set_edge", op.src, "the copied edge must be a set edge", op)
        src_set = resolve(t, op.src[:-1])
        if not isinstance(src_set, (SetType, BottomType)):
            _violated("not_a_set_edge", op.src, "the copied edge must leave a set node", op)
        dest_t = resolve(t, op.dest)
        if not isinstance(dest_t, (SetType, BottomType)):
            _violated("not_a_set_node", op.dest, "the destination must be a set node", op)
        # {_} sources carry no members and unify with any destination.
        if isinstance(src_set, SetType):
            if not isinstance(dest_t, SetType) or dest_t.elem != src_set.elem:
                _violated(
                    "element_type_mismatch",
                    op.dest,
                    "source and destination element types must be equal",
                    op,
                )
        info = ctx_info(op)
        if any(isinstance(s, Star) for s in info.from_path[:-1]):
            _violated(
                "source_not_single_star",
                op.src,
                "the path from the common ancestor to the copied edge must contain "
                "precisely one '*' (the edge itself)",
                op,
            )
        return t

    if isinstance(op, Select):
        target = resolve(t, op.node)
        if not isinstance(target, SetType):
            _violated("not_a_set_node", op.node, "selection targets a set node", op)
        if not isinstance(target.elem, TupleType):
            _violated("child_not_tuple", op.node, "the child of the set node must be a tuple", op)
        if op.a == op.b:
            _violated("attrs_not_distinct", op.node, "selection needs two distinct attributes", op)
        for name in (op.a, op.b):
            if not target.elem.has(name):
                _violated("missing_attribute", op.node, f"member tuples have no {name!r}", op)
        return t

    raise VcpError(f"unknown operation {op!r}")


def _tuple_edge_label(t: ValueType, edge: Path, op: VcpOp) -> str:
    if not edge or isinstance(edge[-1], Star):
        _violated("not_a_tuple_edge", edge, "a tuple edge is required", op)
    resolve(t, edge)  # NoSuchPath when absent
    if not isinstance(resolve(t, edge[:-1]), TupleType):
        _violated("not_a_tuple_edge", edge, "the edge must leave a tuple node", op)
    return edge[-1]


# ---------------------------------------------------------------------------
# Data semantics
# ---------------------------------------------------------------------------


def _local(op: VcpOp, info: CtxInfo):
    """Local semantics: what the operation does to one context-node value.

    Copies capture their source from the snapshot `u` first, then paste
    into every destination node matched inside `u`.
    """
    if isinstance(op, NewConst):
        return lambda u: u.with_field(op.attr, op.const)
    if isinstance(op, InsertTuple):
        return lambda u: TupleV(((op.attr, u),))
    if isinstance(op, InsertSet):
        return lambda u: SetV((u,))
    if isinstance(op, Rename):
        return lambda u: u.rename(op.edge[-1], op.attr)
    if isinstance(op, EliminateSet):
        return lambda u: SetV(tuple(x for m in u.members for x in m.members))
    if isinstance(op, EliminateTuple):
        return lambda u: u.fields[0][1]
    if isinstance(op, Delete):
        return lambda u: u.without(op.edge[-1])
    if isinstance(op, Select):
        return lambda u: SetV(tuple(m for m in u.members if deep_equal(m.get(op.a), m.get(op.b))))
    if isinstance(op, CopyTuple):
        label = op.src[-1]

        def copy_tuple(u: Value) -> Value:
            src_val = paths.walk_value(u, info.from_path)
            return map_nodes(u, info.to_path, lambda w: w.with_field(label, src_val))

        return copy_tuple
    if isinstance(op, CopySet):

        def copy_set(u: Value) -> Value:
            src_set = paths.walk_value(u, info.from_path[:-1])
            return map_nodes(u, info.to_path, lambda w: SetV(w.members + src_set.members))

        return copy_set
    raise VcpError(f"unknown operation {op!r}")


def apply_data(t: ValueType, v: Value, op: VcpOp) -> Value:
    """Run one validated operation on conforming data.

    Every data node matched by the context path is replaced by the local
    semantics of the operation; total on conforming inputs.
    """
    info = ctx_info(op)
    return map_nodes(v, info.ctx_path, _local(op, info))


def apply_op(t: ValueType, v: Value, op: VcpOp) -> tuple[ValueType, Value]:
    t2 = validate_and_apply_schema(t, op)
    return t2, apply_data(t, v, op)


def run_script(t: ValueType, v: Value, ops: list[VcpOp]) -> tuple[ValueType, Value]:
    """Left fold of the schema effect and data semantics over a script.

    The first failing operation aborts the run; its error carries the
    operation index and nothing is (observably) mutated.
    """
    if not conforms(v, t):
        raise VcpError("data does not conform to the schema")
    for i, op in enumerate(ops):
        try:
            t, v = apply_op(t, v, op)
        except VcpError as err:
            err.op_index = i
            raise
    return t, v
