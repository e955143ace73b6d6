"""Path addressing into schema trees and data trees.

A path is a sequence of segments: an attribute name descends a tuple
edge, ``*`` descends a set edge. Against a schema a path identifies at
most one node (schema trees are deterministic); against a data tree a
``*`` segment fans out over all set members, so one path may match many
nodes. The textual syntax is ``.`` for the root, otherwise segments
joined by ``/``, e.g. ``books/*/isbn``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterator

from .values import (
    NoSuchPath,
    ParseError,
    SetType,
    SetV,
    TupleType,
    TupleV,
    Value,
    ValueType,
)


@dataclass(frozen=True)
class Star:
    def __repr__(self) -> str:
        return "*"


STAR = Star()

# A segment is an attribute name (str) or STAR; a path is a tuple of segments.
Path = tuple

ROOT: Path = ()

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def is_ident(name: str) -> bool:
    return bool(_IDENT.match(name))


def parse_path(text: str) -> Path:
    text = text.strip()
    if text == ".":
        return ()
    if not text:
        raise ParseError("empty path (use '.' for the root)")
    segs: list = []
    for part in text.split("/"):
        if part == "*":
            segs.append(STAR)
        elif is_ident(part):
            segs.append(part)
        else:
            raise ParseError(f"bad path segment {part!r}")
    return tuple(segs)


def print_path(p: Path) -> str:
    if not p:
        return "."
    return "/".join("*" if isinstance(s, Star) else s for s in p)


def resolve(t: ValueType, p: Path) -> ValueType:
    """The unique schema subtree at `p`, or NoSuchPath.

    ``{_}`` is a leaf: no segment resolves below it.
    """
    cur = t
    for i, seg in enumerate(p):
        at = print_path(p[: i + 1])
        if isinstance(seg, Star):
            if isinstance(cur, SetType):
                cur = cur.elem
            else:
                raise NoSuchPath(f"'*' under a non-set node at {at}", at)
        else:
            if isinstance(cur, TupleType) and cur.has(seg):
                cur = cur.get(seg)
            elif isinstance(cur, TupleType):
                raise NoSuchPath(f"no attribute {seg!r} at {at}", at)
            else:
                raise NoSuchPath(f"attribute step under a non-tuple node at {at}", at)
    return cur


def match_nodes(v: Value, p: Path) -> list[Value]:
    """All data-tree nodes reached by `p`; ``*`` fans out over set members."""
    out: list[Value] = []

    def go(u: Value, i: int) -> None:
        if i == len(p):
            out.append(u)
            return
        seg = p[i]
        if isinstance(seg, Star):
            if not isinstance(u, SetV):
                raise NoSuchPath(f"'*' over a non-set value at {print_path(p[:i+1])}")
            for m in u.members:
                go(m, i + 1)
        else:
            if not isinstance(u, TupleV) or not u.has(seg):
                raise NoSuchPath(f"no attribute {seg!r} at {print_path(p[:i+1])}")
            go(u.get(seg), i + 1)

    go(v, 0)
    return out


def map_nodes(v: Value, p: Path, fn: Callable[[Value], Value]) -> Value:
    """Rebuild `v` with `fn` applied to every node matched by `p`.

    Sets crossed on the way re-canonicalize, so results stay duplicate-free.
    """
    if not p:
        return fn(v)
    seg = p[0]
    if isinstance(seg, Star):
        if not isinstance(v, SetV):
            raise NoSuchPath("'*' over a non-set value")
        return SetV(tuple(map_nodes(m, p[1:], fn) for m in v.members))
    if not isinstance(v, TupleV) or not v.has(seg):
        raise NoSuchPath(f"no attribute {seg!r}")
    return TupleV(tuple((n, map_nodes(x, p[1:], fn) if n == seg else x) for n, x in v.fields))


def walk_value(v: Value, p: Path) -> Value:
    """Value at a star-free path (unique by construction)."""
    nodes = match_nodes(v, p)
    if len(nodes) != 1:
        raise NoSuchPath(f"path {print_path(p)} is not star-free in the data")
    return nodes[0]


def replace_type_at(t: ValueType, p: Path, new: ValueType) -> ValueType:
    """Schema tree with the subtree at `p` replaced by `new`."""
    if not p:
        return new
    seg = p[0]
    if isinstance(seg, Star):
        if not isinstance(t, SetType):
            raise NoSuchPath("'*' under a non-set node")
        return SetType(replace_type_at(t.elem, p[1:], new))
    if not isinstance(t, TupleType) or not t.has(seg):
        raise NoSuchPath(f"no attribute {seg!r}")
    return TupleType(
        tuple((n, replace_type_at(x, p[1:], new) if n == seg else x) for n, x in t.fields)
    )


def iter_nodes(t: ValueType) -> Iterator[tuple[Path, ValueType]]:
    """Preorder traversal of a schema tree as (path, subtree) pairs."""
    stack: list[tuple[Path, ValueType]] = [((), t)]
    while stack:
        path, cur = stack.pop()
        yield path, cur
        if isinstance(cur, SetType):
            stack.append((path + (STAR,), cur.elem))
        elif isinstance(cur, TupleType):
            for name, sub in reversed(cur.fields):
                stack.append((path + (name,), sub))


def common_prefix(a: Path, b: Path) -> Path:
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return a[:n]
