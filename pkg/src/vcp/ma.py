"""Monad-algebra expressions: AST, typing rules, evaluator, text format.

The nine core operations (identity, composition, constants, singleton,
map, flatten, pairwith, tuple formation, projection) extended by set
union give the positive fragment; adding selection, difference,
intersection, and nesting as native evaluator operators gives the full
language. Composition is diagrammatic: ``Comp(f, g)`` applies f first,
and is written ``f; g``.

The empty-set constant has output type ``{_}``, which coerces to any set
type where a set operand is required. An expression whose output type is
``{_}`` always evaluates to the empty set. Mapping over a ``{_}``-typed
input is rejected since the body cannot be typed against an unknown
element type.

Grammar (``;`` is the only infix operator, left-associative)::

    e   := "id" | e ";" e | "const(" lit ")" | "sing" | "map(" e ")"
         | "flatten" | "pairwith(" ident ")"
         | "tuple(" [ident ":" e ("," ident ":" e)*] ")" | "proj(" ident ")"
         | "union(" e "," e ")" | "select(" ident "," ident ")"
         | "diff(" e "," e ")" | "intersect(" e "," e ")"
         | "nest(" ident "<-" ident+ ")"
    lit := INT | STRING | "{}" | "<>"
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .text import parse_value, print_value
from .values import (
    BOTTOM,
    BottomType,
    Atom,
    EMPTY_SET,
    ParseError,
    SetType,
    SetV,
    TupleType,
    TupleV,
    UNIT_TUPLE,
    Value,
    ValueType,
    VcpError,
    const_type,
    deep_equal,
    is_const,
)


class MaExpr:
    """Base class for expression nodes."""


@dataclass(frozen=True)
class Id(MaExpr):
    pass


@dataclass(frozen=True)
class Comp(MaExpr):
    f: MaExpr
    g: MaExpr


@dataclass(frozen=True)
class Const(MaExpr):
    value: Value

    def __post_init__(self):
        if not is_const(self.value):
            raise VcpError(f"not a constant: {self.value!r}")


@dataclass(frozen=True)
class Sing(MaExpr):
    pass


@dataclass(frozen=True)
class Map(MaExpr):
    body: MaExpr


@dataclass(frozen=True)
class Flatten(MaExpr):
    pass


@dataclass(frozen=True)
class Pairwith(MaExpr):
    attr: str


@dataclass(frozen=True)
class Tup(MaExpr):
    fields: tuple[tuple[str, MaExpr], ...]

    def __post_init__(self):
        raw = tuple(self.fields.items()) if isinstance(self.fields, dict) else tuple(self.fields)
        names = [n for n, _ in raw]
        if len(set(names)) != len(names):
            raise VcpError("duplicate attribute in tuple formation")
        object.__setattr__(self, "fields", raw)


@dataclass(frozen=True)
class Proj(MaExpr):
    attr: str


@dataclass(frozen=True)
class Union(MaExpr):
    f: MaExpr
    g: MaExpr


@dataclass(frozen=True)
class Select(MaExpr):
    a: str
    b: str


@dataclass(frozen=True)
class Diff(MaExpr):
    f: MaExpr
    g: MaExpr


@dataclass(frozen=True)
class Intersect(MaExpr):
    f: MaExpr
    g: MaExpr


@dataclass(frozen=True)
class Nest(MaExpr):
    attr: str
    grouped: tuple[str, ...]

    def __post_init__(self):
        if not self.grouped:
            raise VcpError("nest needs at least one grouped attribute")
        if len(set(self.grouped)) != len(self.grouped):
            raise VcpError("duplicate grouped attribute in nest")
        object.__setattr__(self, "grouped", tuple(self.grouped))


@dataclass(frozen=True)
class MaType:
    input: ValueType
    output: ValueType


class MaTypeError(VcpError):
    def __init__(self, expr: MaExpr, expected: str, found: ValueType | str):
        super().__init__(f"{print_ma(expr)}: expected {expected}, found {found!r}")
        self.expr = expr
        self.expected = expected
        self.found = found


# ---------------------------------------------------------------------------
# Typing
# ---------------------------------------------------------------------------


def _set_union_type(e: MaExpr, a: ValueType, b: ValueType) -> ValueType:
    for s in (a, b):
        if not isinstance(s, (SetType, BottomType)):
            raise MaTypeError(e, "a set-typed operand", s)
    if isinstance(a, BottomType):
        return b
    if isinstance(b, BottomType):
        return a
    if a != b:
        raise MaTypeError(e, f"operands of equal set type ({a!r})", b)
    return a


def typecheck(e: MaExpr, input: ValueType) -> ValueType:
    """Output type of `e` on the given input type, or MaTypeError."""
    if isinstance(e, Id):
        return input
    if isinstance(e, Comp):
        return typecheck(e.g, typecheck(e.f, input))
    if isinstance(e, Const):
        return const_type(e.value)
    if isinstance(e, Sing):
        return SetType(input)
    if isinstance(e, Map):
        if isinstance(input, BottomType):
            raise MaTypeError(e, "a set type with known element type", input)
        if not isinstance(input, SetType):
            raise MaTypeError(e, "a set type", input)
        return SetType(typecheck(e.body, input.elem))
    if isinstance(e, Flatten):
        if isinstance(input, BottomType):
            return BOTTOM
        if not isinstance(input, SetType):
            raise MaTypeError(e, "a set of sets", input)
        if isinstance(input.elem, BottomType):
            return BOTTOM
        if not isinstance(input.elem, SetType):
            raise MaTypeError(e, "a set of sets", input)
        return input.elem
    if isinstance(e, Pairwith):
        if not isinstance(input, TupleType) or not input.has(e.attr):
            raise MaTypeError(e, f"a tuple type with attribute {e.attr!r}", input)
        paired = input.get(e.attr)
        if isinstance(paired, BottomType):
            return BOTTOM
        if not isinstance(paired, SetType):
            raise MaTypeError(e, f"a set type at attribute {e.attr!r}", paired)
        fields = tuple((n, paired.elem if n == e.attr else t) for n, t in input.fields)
        return SetType(TupleType(fields))
    if isinstance(e, Tup):
        return TupleType(tuple((n, typecheck(f, input)) for n, f in e.fields))
    if isinstance(e, Proj):
        if not isinstance(input, TupleType) or not input.has(e.attr):
            raise MaTypeError(e, f"a tuple type with attribute {e.attr!r}", input)
        return input.get(e.attr)
    if isinstance(e, Union):
        return _set_union_type(e, typecheck(e.f, input), typecheck(e.g, input))
    if isinstance(e, Select):
        if e.a == e.b:
            raise MaTypeError(e, "two distinct attributes", e.a)
        if isinstance(input, BottomType):
            return BOTTOM
        if not isinstance(input, SetType) or not isinstance(input.elem, TupleType):
            raise MaTypeError(e, "a set of tuples", input)
        for name in (e.a, e.b):
            if not input.elem.has(name):
                raise MaTypeError(e, f"member tuples with attribute {name!r}", input.elem)
        return input
    if isinstance(e, Diff):
        a = typecheck(e.f, input)
        b = typecheck(e.g, input)
        _set_union_type(e, a, b)
        return a
    if isinstance(e, Intersect):
        a = typecheck(e.f, input)
        b = typecheck(e.g, input)
        _set_union_type(e, a, b)
        if isinstance(a, BottomType) or isinstance(b, BottomType):
            return BOTTOM
        return a
    if isinstance(e, Nest):
        if isinstance(input, BottomType):
            return BOTTOM
        if not isinstance(input, SetType) or not isinstance(input.elem, TupleType):
            raise MaTypeError(e, "a set of tuples", input)
        elem = input.elem
        for name in e.grouped:
            if not elem.has(name):
                raise MaTypeError(e, f"member tuples with attribute {name!r}", elem)
        keys = tuple((n, t) for n, t in elem.fields if n not in e.grouped)
        if any(n == e.attr for n, _ in keys):
            raise MaTypeError(e, f"a fresh attribute name (not {e.attr!r})", elem)
        inner = TupleType(tuple((n, t) for n, t in elem.fields if n in e.grouped))
        return SetType(TupleType(keys + ((e.attr, SetType(inner)),)))
    raise VcpError(f"unknown expression {e!r}")


def ma_type(e: MaExpr, input: ValueType) -> MaType:
    return MaType(input, typecheck(e, input))


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def eval_expr(e: MaExpr, v: Value) -> Value:
    """Denotational semantics on a value conforming to the checked input type."""
    if isinstance(e, Id):
        return v
    if isinstance(e, Comp):
        return eval_expr(e.g, eval_expr(e.f, v))
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Sing):
        return SetV((v,))
    if isinstance(e, Map):
        return SetV(tuple(eval_expr(e.body, m) for m in v.members))
    if isinstance(e, Flatten):
        return SetV(tuple(x for m in v.members for x in m.members))
    if isinstance(e, Pairwith):
        paired = v.get(e.attr)
        return SetV(
            tuple(
                TupleV(tuple((n, x if n == e.attr else w) for n, w in v.fields))
                for x in paired.members
            )
        )
    if isinstance(e, Tup):
        return TupleV(tuple((n, eval_expr(f, v)) for n, f in e.fields))
    if isinstance(e, Proj):
        return v.get(e.attr)
    if isinstance(e, Union):
        return SetV(eval_expr(e.f, v).members + eval_expr(e.g, v).members)
    if isinstance(e, Select):
        return SetV(tuple(m for m in v.members if deep_equal(m.get(e.a), m.get(e.b))))
    if isinstance(e, Diff):
        left = eval_expr(e.f, v).members
        right = eval_expr(e.g, v).members
        return SetV(tuple(m for m in left if not any(deep_equal(m, r) for r in right)))
    if isinstance(e, Intersect):
        left = eval_expr(e.f, v).members
        right = eval_expr(e.g, v).members
        return SetV(tuple(m for m in left if any(deep_equal(m, r) for r in right)))
    if isinstance(e, Nest):
        groups: dict[TupleV, list[Value]] = {}
        for m in v.members:
            key = TupleV(tuple((n, x) for n, x in m.fields if n not in e.grouped))
            inner = TupleV(tuple((n, x) for n, x in m.fields if n in e.grouped))
            groups.setdefault(key, []).append(inner)
        return SetV(
            tuple(key.with_field(e.attr, SetV(tuple(inners))) for key, inners in groups.items())
        )
    raise VcpError(f"unknown expression {e!r}")


def comp_parts(e: MaExpr) -> list[MaExpr]:
    """Flatten composition chains (dropping identities)."""
    if isinstance(e, Comp):
        return comp_parts(e.f) + comp_parts(e.g)
    if isinstance(e, Id):
        return []
    return [e]


def compose(parts: list[MaExpr]) -> MaExpr:
    out: MaExpr | None = None
    for p in parts:
        out = p if out is None else Comp(out, p)
    return out if out is not None else Id()


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------

_MA_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<int>-?\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct><\-|<>|\{\}|[(),:;])
    """,
    re.VERBOSE,
)

_KEYWORDS = frozenset(
    "id const sing map flatten pairwith tuple proj union select diff intersect nest".split()
)


class _MaParser:
    def __init__(self, text: str):
        self.toks: list[tuple[str, str]] = []
        pos = 0
        while pos < len(text):
            m = _MA_TOKEN.match(text, pos)
            if not m:
                raise ParseError(f"unexpected character {text[pos]!r} at offset {pos}")
            if m.lastgroup != "ws":
                self.toks.append((m.lastgroup, m.group()))
            pos = m.end()
        self.toks.append(("eof", ""))
        self.i = 0

    def peek(self) -> tuple[str, str]:
        return self.toks[self.i]

    def next(self) -> tuple[str, str]:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, text: str):
        kind, lexeme = self.next()
        if lexeme != text:
            raise ParseError(f"expected {text!r}, found {lexeme or 'end of input'!r}")

    def ident(self) -> str:
        kind, lexeme = self.next()
        if kind != "ident":
            raise ParseError(f"expected an attribute name, found {lexeme!r}")
        return lexeme

    def expr(self) -> MaExpr:
        out = self.atom()
        while self.peek()[1] == ";":
            self.next()
            out = Comp(out, self.atom())
        return out

    def atom(self) -> MaExpr:
        kind, lexeme = self.next()
        if kind != "ident":
            raise ParseError(f"expected an expression, found {lexeme or 'end of input'!r}")
        if lexeme == "id":
            return Id()
        if lexeme == "sing":
            return Sing()
        if lexeme == "flatten":
            return Flatten()
        if lexeme == "const":
            self.expect("(")
            lit = self.literal()
            self.expect(")")
            return Const(lit)
        if lexeme == "map":
            self.expect("(")
            body = self.expr()
            self.expect(")")
            return Map(body)
        if lexeme == "pairwith":
            self.expect("(")
            name = self.ident()
            self.expect(")")
            return Pairwith(name)
        if lexeme == "proj":
            self.expect("(")
            name = self.ident()
            self.expect(")")
            return Proj(name)
        if lexeme == "tuple":
            self.expect("(")
            fields = []
            if self.peek()[1] != ")":
                while True:
                    name = self.ident()
                    self.expect(":")
                    fields.append((name, self.expr()))
                    if self.peek()[1] != ",":
                        break
                    self.next()
            self.expect(")")
            return Tup(tuple(fields))
        if lexeme in ("union", "diff", "intersect"):
            self.expect("(")
            f = self.expr()
            self.expect(",")
            g = self.expr()
            self.expect(")")
            return {"union": Union, "diff": Diff, "intersect": Intersect}[lexeme](f, g)
        if lexeme == "select":
            self.expect("(")
            a = self.ident()
            self.expect(",")
            b = self.ident()
            self.expect(")")
            return Select(a, b)
        if lexeme == "nest":
            self.expect("(")
            attr = self.ident()
            self.expect("<-")
            grouped = [self.ident()]
            while self.peek()[0] == "ident":
                grouped.append(self.ident())
            self.expect(")")
            return Nest(attr, tuple(grouped))
        raise ParseError(f"unknown expression {lexeme!r}")

    def literal(self) -> Value:
        kind, lexeme = self.next()
        if kind == "int":
            return Atom(int(lexeme))
        if kind == "string":
            return parse_value(lexeme)
        if lexeme == "{}":
            return EMPTY_SET
        if lexeme == "<>":
            return UNIT_TUPLE
        raise ParseError(f"expected a constant, found {lexeme!r}")


def parse_ma(text: str) -> MaExpr:
    p = _MaParser(text)
    e = p.expr()
    if p.peek()[0] != "eof":
        raise ParseError(f"trailing input starting at {p.peek()[1]!r}")
    return e


def print_ma(e: MaExpr) -> str:
    if isinstance(e, Id):
        return "id"
    if isinstance(e, Comp):
        return f"{print_ma(e.f)}; {print_ma(e.g)}"
    if isinstance(e, Const):
        return f"const({print_value(e.value)})"
    if isinstance(e, Sing):
        return "sing"
    if isinstance(e, Map):
        return f"map({print_ma(e.body)})"
    if isinstance(e, Flatten):
        return "flatten"
    if isinstance(e, Pairwith):
        return f"pairwith({e.attr})"
    if isinstance(e, Tup):
        return "tuple(%s)" % ", ".join(f"{n}: {print_ma(f)}" for n, f in e.fields)
    if isinstance(e, Proj):
        return f"proj({e.attr})"
    if isinstance(e, Union):
        return f"union({print_ma(e.f)}, {print_ma(e.g)})"
    if isinstance(e, Select):
        return f"select({e.a}, {e.b})"
    if isinstance(e, Diff):
        return f"diff({print_ma(e.f)}, {print_ma(e.g)})"
    if isinstance(e, Intersect):
        return f"intersect({print_ma(e.f)}, {print_ma(e.g)})"
    if isinstance(e, Nest):
        return f"nest({e.attr} <- {' '.join(e.grouped)})"
    raise VcpError(f"unknown expression {e!r}")
