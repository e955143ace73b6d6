"""Complex-value data model: schema trees and canonical data trees.

Types are built from the atomic domain ``dom``, set nodes ``{t}``, tuple
nodes ``<A1:t1,...>`` with pairwise-distinct attribute names, and the
special type ``{_}`` of the empty-set constant (element type unknown).

Values are atoms (integers and strings folded into one domain), finite
duplicate-free sets, and attribute-named tuples. Values canonicalize on
construction: set members are stored sorted under a fixed total order and
deduplicated, tuple fields are stored sorted by attribute name. As a
consequence structural equality coincides with deep (extensional)
equality, and serialization is deterministic.

The total order on values (ints before strings, atoms before sets before
tuples, lexicographic within each kind) exists only to make canonical
storage possible; it is never exposed as a query operation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping


class VcpError(Exception):
    """Base class for all engine errors."""


class ParseError(VcpError):
    """Syntax error in one of the textual formats."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class NoSuchPath(VcpError):
    """A path segment does not match the schema or data tree."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(message)
        self.path = path


# ---------------------------------------------------------------------------
# Types (schema trees)
# ---------------------------------------------------------------------------


class ValueType:
    """Base class for schema trees."""


@dataclass(frozen=True)
class DomType(ValueType):
    """The domain of atomic values (strings and integers)."""

    def __repr__(self) -> str:
        return "dom"


@dataclass(frozen=True)
class BottomType(ValueType):
    """The type ``{_}`` of the empty-set constant; only ever a leaf."""

    def __repr__(self) -> str:
        return "{_}"


@dataclass(frozen=True)
class SetType(ValueType):
    elem: ValueType

    def __repr__(self) -> str:
        return "{%r}" % (self.elem,)


@dataclass(frozen=True)
class TupleType(ValueType):
    fields: tuple[tuple[str, ValueType], ...] = ()

    def __post_init__(self):
        raw = self.fields.items() if isinstance(self.fields, Mapping) else self.fields
        object.__setattr__(self, "fields", _canon_fields(raw, ValueType))

    def __repr__(self) -> str:
        return "<%s>" % ",".join("%s:%r" % (n, t) for n, t in self.fields)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.fields)

    def has(self, name: str) -> bool:
        return any(n == name for n, _ in self.fields)

    def get(self, name: str) -> ValueType:
        for n, t in self.fields:
            if n == name:
                return t
        raise KeyError(name)

    def with_field(self, name: str, t: ValueType) -> "TupleType":
        return TupleType(self.fields + ((name, t),))

    def without(self, name: str) -> "TupleType":
        return TupleType(tuple((n, t) for n, t in self.fields if n != name))


DOM = DomType()
BOTTOM = BottomType()


def tuple_type(fields: Mapping[str, ValueType] | Iterable[tuple[str, ValueType]]) -> TupleType:
    if isinstance(fields, Mapping):
        fields = fields.items()
    return TupleType(tuple(fields))


def _canon_fields(fields, kind):
    pairs = tuple(fields)
    seen = set()
    for name, v in pairs:
        if not isinstance(name, str) or not name:
            raise VcpError(f"invalid attribute name {name!r}")
        if name in seen:
            raise VcpError(f"duplicate attribute name {name!r}")
        seen.add(name)
        if not isinstance(v, kind):
            raise VcpError(f"attribute {name!r} holds a non-{kind.__name__}")
    return tuple(sorted(pairs, key=lambda p: p[0]))


def attr_names(t: ValueType) -> frozenset[str]:
    """All attribute names occurring anywhere in a schema tree."""
    acc: set[str] = set()

    def go(s: ValueType) -> None:
        if isinstance(s, SetType):
            go(s.elem)
        elif isinstance(s, TupleType):
            for name, sub in s.fields:
                acc.add(name)
                go(sub)

    go(t)
    return frozenset(acc)


# ---------------------------------------------------------------------------
# Values (data trees)
# ---------------------------------------------------------------------------


class Value:
    """Base class for data trees."""


@dataclass(frozen=True)
class Atom(Value):
    literal: int | str

    def __post_init__(self):
        if isinstance(self.literal, bool) or not isinstance(self.literal, (int, str)):
            raise VcpError(f"atom literal must be int or str, got {self.literal!r}")

    def __repr__(self) -> str:
        return repr(self.literal)


@dataclass(frozen=True)
class SetV(Value):
    members: tuple[Value, ...] = ()

    def __post_init__(self):
        canon = sorted(self.members, key=value_key)
        out: list[Value] = []
        for m in canon:
            if not isinstance(m, Value):
                raise VcpError(f"set member is not a Value: {m!r}")
            if not out or out[-1] != m:
                out.append(m)
        object.__setattr__(self, "members", tuple(out))

    def __repr__(self) -> str:
        return "{%s}" % ",".join(map(repr, self.members))

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class TupleV(Value):
    fields: tuple[tuple[str, Value], ...] = ()

    def __post_init__(self):
        raw = self.fields.items() if isinstance(self.fields, Mapping) else self.fields
        object.__setattr__(self, "fields", _canon_fields(raw, Value))

    def __repr__(self) -> str:
        return "<%s>" % ",".join("%s:%r" % (n, v) for n, v in self.fields)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.fields)

    def has(self, name: str) -> bool:
        return any(n == name for n, _ in self.fields)

    def get(self, name: str) -> Value:
        for n, v in self.fields:
            if n == name:
                return v
        raise KeyError(name)

    def with_field(self, name: str, v: Value) -> "TupleV":
        return TupleV(self.fields + ((name, v),))

    def without(self, name: str) -> "TupleV":
        return TupleV(tuple((n, v) for n, v in self.fields if n != name))

    def rename(self, old: str, new: str) -> "TupleV":
        return TupleV(tuple((new if n == old else n, v) for n, v in self.fields))


def tuple_value(fields: Mapping[str, Value] | Iterable[tuple[str, Value]]) -> TupleV:
    if isinstance(fields, Mapping):
        fields = fields.items()
    return TupleV(tuple(fields))


def value_key(v: Value):
    """Sort key realizing the total order; equal keys iff deep-equal values."""
    if isinstance(v, Atom):
        if isinstance(v.literal, int):
            return (0, 0, v.literal)
        return (0, 1, v.literal)
    if isinstance(v, SetV):
        return (1, tuple(value_key(m) for m in v.members))
    if isinstance(v, TupleV):
        return (2, tuple((n, value_key(x)) for n, x in v.fields))
    raise VcpError(f"not a Value: {v!r}")


EMPTY_SET = SetV()
UNIT_TUPLE = TupleV()


def deep_equal(a: Value, b: Value) -> bool:
    """Deep (extensional) equality of complex values.

    Values are canonical by construction, so structural equality gives
    set extensionality for free; cross-kind comparisons are false.
    """
    return a == b


def conforms(v: Value, t: ValueType) -> bool:
    """Whether a data tree inhabits a schema tree.

    Every empty set conforms to ``{_}`` and to any set type; a nonempty
    set conforms to ``{t}`` iff each member conforms to ``t``.
    """
    if isinstance(t, DomType):
        return isinstance(v, Atom)
    if isinstance(t, BottomType):
        return isinstance(v, SetV) and not v.members
    if isinstance(t, SetType):
        return isinstance(v, SetV) and all(conforms(m, t.elem) for m in v.members)
    if isinstance(t, TupleType):
        if not isinstance(v, TupleV) or v.names != t.names:
            return False
        return all(conforms(v.get(n), ft) for n, ft in t.fields)
    raise VcpError(f"not a ValueType: {t!r}")


# ---------------------------------------------------------------------------
# Constants from Dom + {empty set, unit tuple}
# ---------------------------------------------------------------------------


def is_const(v: Value) -> bool:
    return isinstance(v, Atom) or v == EMPTY_SET or v == UNIT_TUPLE


def const_type(c: Value) -> ValueType:
    """Type of a constant: atoms are dom, {} is {_}, <> is the unit tuple."""
    if isinstance(c, Atom):
        return DOM
    if c == EMPTY_SET:
        return BOTTOM
    if c == UNIT_TUPLE:
        return TupleType()
    raise VcpError(f"not a constant: {c!r}")


def fresh_attr(schema: ValueType, hint: str, avoid: Iterable[str] = ()) -> str:
    """An attribute name not occurring anywhere in `schema` (nor in `avoid`).

    Deterministic: returns the hint itself when free, else hint_2, hint_3, ...
    """
    taken = set(attr_names(schema)) | set(avoid)
    if hint not in taken:
        return hint
    i = 2
    while f"{hint}_{i}" in taken:
        i += 1
    return f"{hint}_{i}"
