"""Seeded random generators and independent oracles.

The generators produce schemas, conforming data, valid operations, and
well-typed expressions for the equivalence and property suites. The
oracles are deliberately naive (dict/list based, no engine imports
beyond the value constructors) so the things they check stay checked.
"""

from __future__ import annotations

import random

from vcp import ma, ops
from vcp.ops import validate_and_apply_schema
from vcp.paths import ROOT, STAR, Star, iter_nodes
from vcp.values import (
    BOTTOM,
    BottomType,
    DOM,
    Atom,
    DomType,
    EMPTY_SET,
    SetType,
    SetV,
    TupleType,
    TupleV,
    UNIT_TUPLE,
    Value,
    ValueType,
    VcpError,
)

NAMES = ["a", "b", "c", "d", "e", "f", "g", "h"]
ATOMS = [Atom(0), Atom(1), Atom(2), Atom("x"), Atom("y")]
CONSTS = [Atom(7), Atom("z"), EMPTY_SET, UNIT_TUPLE]


# ---------------------------------------------------------------------------
# Schemas and data
# ---------------------------------------------------------------------------


def gen_type(rng: random.Random, depth: int = 4, bottom_ok: bool = True) -> ValueType:
    roll = rng.random()
    if depth <= 0 or roll < 0.35:
        if bottom_ok and rng.random() < 0.08:
            return BOTTOM
        return DOM
    if roll < 0.62:
        return SetType(gen_type(rng, depth - 1, bottom_ok))
    k = rng.randint(0, 3)
    names = rng.sample(NAMES, k)
    return TupleType(tuple((n, gen_type(rng, depth - 1, bottom_ok)) for n in names))


def gen_value(rng: random.Random, t: ValueType, set_max: int = 5) -> Value:
    if isinstance(t, DomType):
        return rng.choice(ATOMS)
    if isinstance(t, BottomType):
        return SetV()
    if isinstance(t, SetType):
        return SetV(tuple(gen_value(rng, t.elem, set_max) for _ in range(rng.randint(0, set_max))))
    if isinstance(t, TupleType):
        return TupleV(tuple((n, gen_value(rng, x, set_max)) for n, x in t.fields))
    raise VcpError(f"not a type: {t!r}")


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def _candidate_ops(rng: random.Random, t: ValueType) -> list[ops.VcpOp]:
    nodes = list(iter_nodes(t))
    tuple_nodes = [(p, s) for p, s in nodes if isinstance(s, TupleType)]
    set_nodes = [(p, s) for p, s in nodes if isinstance(s, SetType)]
    tuple_edges = [p + (n,) for p, s in tuple_nodes for n in s.names]
    fresh = f"n{rng.randint(0, 99)}"

    out: list[ops.VcpOp] = []
    for p, _ in nodes:
        out.append(ops.InsertTuple(p, fresh))
        out.append(ops.InsertSet(p))
    for p, s in tuple_nodes:
        if not s.has(fresh):
            out.append(ops.NewConst(p, fresh, rng.choice(CONSTS)))
        if len(s.fields) == 1:
            out.append(ops.EliminateTuple(p))
        for n in s.names:
            if not s.has(fresh):
                out.append(ops.Rename(p + (n,), fresh))
            out.append(ops.Delete(p + (n,)))
    for p, s in set_nodes:
        if p and isinstance(p[-1], Star):
            out.append(ops.EliminateSet(p))
        if isinstance(s.elem, TupleType) and len(s.elem.fields) >= 2:
            a, b = rng.sample(s.elem.names, 2)
            out.append(ops.Select(p, a, b))
    for src in tuple_edges:
        for dest, _ in tuple_nodes:
            out.append(ops.CopyTuple(src, dest))
    for p, _ in set_nodes:
        for dest, _ in set_nodes:
            out.append(ops.CopySet(p + (STAR,), dest))
    return out


def gen_op(rng: random.Random, t: ValueType) -> ops.VcpOp:
    """A random operation that validates against `t`."""
    candidates = _candidate_ops(rng, t)
    rng.shuffle(candidates)
    for op in candidates:
        try:
            validate_and_apply_schema(t, op)
            return op
        except VcpError:
            continue
    raise AssertionError("no valid operation exists (unreachable: inserts always apply)")


def gen_script(rng: random.Random, t: ValueType, length: int) -> list[ops.VcpOp]:
    script = []
    for _ in range(length):
        op = gen_op(rng, t)
        t = validate_and_apply_schema(t, op)
        script.append(op)
    return script


def gen_invalid_op(rng: random.Random, t: ValueType) -> ops.VcpOp | None:
    """An operation violating some applicability condition, if one exists."""
    candidates = _candidate_ops(rng, t)
    # Break conditions on purpose as well: bad arities and duplicate labels.
    for p, s in iter_nodes(t):
        if isinstance(s, TupleType) and len(s.fields) >= 2:
            candidates.append(ops.EliminateTuple(p))
            candidates.append(ops.NewConst(p, s.names[0], Atom(1)))
        if isinstance(s, SetType) and (not p or not isinstance(p[-1], Star)):
            candidates.append(ops.EliminateSet(p))
    rng.shuffle(candidates)
    for op in candidates:
        try:
            validate_and_apply_schema(t, op)
        except ops.ConditionViolated:
            return op
        except VcpError:
            continue
    return None


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------


def gen_expr(rng: random.Random, t: ValueType, depth: int = 3, select_ok: bool = True) -> ma.MaExpr:
    """A well-typed expression against input type `t`."""
    parts = [_gen_atom(rng, t, depth, select_ok)]
    cur = ma.typecheck(parts[0], t)
    for _ in range(rng.randint(0, 2)):
        nxt = _gen_atom(rng, cur, depth - 1, select_ok)
        cur = ma.typecheck(nxt, cur)
        parts.append(nxt)
    return ma.compose(parts)


def _gen_atom(rng: random.Random, t: ValueType, depth: int, select_ok: bool) -> ma.MaExpr:
    choices = [lambda: ma.Id(), lambda: ma.Sing(), lambda: ma.Const(rng.choice(CONSTS))]
    if depth > 0:
        choices.append(lambda: _gen_tuple(rng, t, depth, select_ok))
    if isinstance(t, TupleType):
        if t.fields:
            choices += [lambda: ma.Proj(rng.choice(t.names))] * 2
        set_attrs = [n for n, x in t.fields if isinstance(x, SetType)]
        if set_attrs:
            choices.append(lambda: ma.Pairwith(rng.choice(set_attrs)))
    if isinstance(t, SetType):
        if depth > 0 and not isinstance(t.elem, BottomType):
            choices += [lambda: ma.Map(gen_expr(rng, t.elem, depth - 1, select_ok))] * 2
        if isinstance(t.elem, (SetType, BottomType)):
            choices.append(lambda: ma.Flatten())
        if isinstance(t.elem, TupleType) and len(t.elem.fields) >= 2 and select_ok:
            choices.append(lambda: ma.Select(*rng.sample(t.elem.names, 2)))
        if isinstance(t.elem, TupleType) and t.elem.fields and select_ok:
            choices.append(lambda: _gen_nest(rng, t.elem))
        if depth > 0:
            choices.append(lambda: _gen_binop(rng, t, depth, select_ok))
    if isinstance(t, BottomType):
        choices.append(lambda: ma.Flatten())
    return rng.choice(choices)()


def _gen_tuple(rng: random.Random, t: ValueType, depth: int, select_ok: bool) -> ma.MaExpr:
    names = rng.sample(NAMES, rng.randint(1, 3))
    return ma.Tup(tuple((n, gen_expr(rng, t, depth - 1, select_ok)) for n in names))


def _gen_nest(rng: random.Random, elem: TupleType) -> ma.MaExpr:
    grouped = tuple(rng.sample(elem.names, rng.randint(1, len(elem.fields))))
    remaining = [n for n in elem.names if n not in grouped]
    attr = next(n for n in NAMES + ["nested"] if n not in remaining)
    return ma.Nest(attr, grouped)


def _gen_binop(rng: random.Random, t: SetType, depth: int, select_ok: bool) -> ma.MaExpr:
    kind = rng.choice([ma.Union, ma.Diff, ma.Intersect] if select_ok else [ma.Union])
    f = ma.Id()
    g = rng.choice(
        [
            lambda: ma.Id(),
            lambda: ma.Const(EMPTY_SET),
            lambda: ma.Diff(ma.Id(), ma.Id()) if select_ok else ma.Id(),
            lambda: ma.Comp(ma.Id(), ma.Id()),
        ]
    )()
    if rng.random() < 0.5:
        f, g = g, f
    return kind(f, g)


# ---------------------------------------------------------------------------
# Oracles
# ---------------------------------------------------------------------------


def oracle_cartesian(r: SetV, s: SetV) -> SetV:
    """Brute-force cartesian product of two relations with duplicate elimination."""
    out = []
    for left in r.members:
        for right in s.members:
            out.append(TupleV(left.fields + right.fields))
    return SetV(tuple(out))


def oracle_difference(r: SetV, s: SetV) -> SetV:
    return SetV(tuple(m for m in r.members if m not in s.members))


def oracle_intersection(r: SetV, s: SetV) -> SetV:
    return SetV(tuple(m for m in r.members if m in s.members))


def oracle_nest(r: SetV, attr: str, grouped: tuple[str, ...]) -> SetV:
    """The grouping formula: keys are the non-grouped attributes, the new
    attribute collects the grouped projections of the matching tuples."""
    out = []
    for m in r.members:
        key = tuple((n, x) for n, x in m.fields if n not in grouped)
        inner = [
            TupleV(tuple((n, x) for n, x in o.fields if n in grouped))
            for o in r.members
            if tuple((n, x) for n, x in o.fields if n not in grouped) == key
        ]
        out.append(TupleV(key + ((attr, SetV(tuple(inner))),)))
    return SetV(tuple(out))


def gen_relation(rng: random.Random, attrs: tuple[str, ...], max_rows: int = 6,
                 domain: tuple[Atom, ...] = (Atom(0), Atom(1), Atom(2), Atom(3))) -> SetV:
    rows = []
    for _ in range(rng.randint(0, max_rows)):
        rows.append(TupleV(tuple((n, rng.choice(domain)) for n in attrs)))
    return SetV(tuple(rows))
