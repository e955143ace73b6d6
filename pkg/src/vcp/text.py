"""Textual formats for types and values.

Type grammar:   type  := "dom" | "{_}" | "{" type "}"
                       | "<" [ident ":" type ("," ident ":" type)*] ">"
Value grammar:  value := INT | STRING
                       | "{" [value ("," value)*] "}"
                       | "<" [ident ":" value ("," ident ":" value)*] ">"

Printing is canonical: tuple attributes sorted by name, set members in
the total value order, no insignificant whitespace. parse(print(x)) == x
and print(parse(s)) == s on canonical text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .values import (
    BOTTOM,
    BottomType,
    DOM,
    Atom,
    DomType,
    ParseError,
    SetType,
    SetV,
    TupleType,
    TupleV,
    Value,
    ValueType,
)

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<int>-?\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[{}<>:,])
    """,
    re.VERBOSE,
)

_ESCAPES = {"\\": "\\", '"': '"', "n": "\n", "t": "\t"}


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        lexeme = m.group()
        if kind != "ws":
            toks.append(_Tok(kind, lexeme, line, col))
        nl = lexeme.count("\n")
        if nl:
            line += nl
            col = len(lexeme) - lexeme.rfind("\n")
        else:
            col += len(lexeme)
        pos = m.end()
    toks.append(_Tok("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> _Tok:
        tok = self.next()
        if tok.text != text:
            self.fail(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok)
        return tok

    def fail(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        raise ParseError(msg, tok.line, tok.col)

    def done(self):
        tok = self.peek()
        if tok.kind != "eof":
            self.fail(f"trailing input starting at {tok.text!r}", tok)

    # -- types --

    def type_(self) -> ValueType:
        tok = self.next()
        if tok.text == "dom":
            return DOM
        if tok.text == "{":
            if self.peek().text == "_":
                self.next()
                self.expect("}")
                return BOTTOM
            elem = self.type_()
            self.expect("}")
            return SetType(elem)
        if tok.text == "<":
            fields = []
            if self.peek().text != ">":
                while True:
                    name = self.ident()
                    self.expect(":")
                    fields.append((name, self.type_()))
                    if self.peek().text != ",":
                        break
                    self.next()
            self.expect(">")
            names = [n for n, _ in fields]
            if len(set(names)) != len(names):
                self.fail("duplicate attribute name in tuple type", tok)
            return TupleType(tuple(fields))
        self.fail(f"expected a type, found {tok.text or 'end of input'!r}", tok)

    # -- values --

    def value(self) -> Value:
        tok = self.next()
        if tok.kind == "int":
            return Atom(int(tok.text))
        if tok.kind == "string":
            return Atom(_unquote(tok))
        if tok.text == "{":
            members = []
            if self.peek().text != "}":
                while True:
                    members.append(self.value())
                    if self.peek().text != ",":
                        break
                    self.next()
            self.expect("}")
            return SetV(tuple(members))
        if tok.text == "<":
            fields = []
            if self.peek().text != ">":
                while True:
                    name = self.ident()
                    self.expect(":")
                    fields.append((name, self.value()))
                    if self.peek().text != ",":
                        break
                    self.next()
            self.expect(">")
            names = [n for n, _ in fields]
            if len(set(names)) != len(names):
                self.fail("duplicate attribute name in tuple value", tok)
            return TupleV(tuple(fields))
        self.fail(f"expected a value, found {tok.text or 'end of input'!r}", tok)

    def ident(self) -> str:
        tok = self.next()
        if tok.kind != "ident":
            self.fail(f"expected an attribute name, found {tok.text!r}", tok)
        return tok.text


def _unquote(tok: _Tok) -> str:
    body = tok.text[1:-1]
    out: list[str] = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "\\":
            esc = body[i + 1] if i + 1 < len(body) else ""
            if esc not in _ESCAPES:
                raise ParseError(f"bad escape \\{esc}", tok.line, tok.col)
            out.append(_ESCAPES[esc])
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t") + '"'


def parse_type(text: str) -> ValueType:
    p = _Parser(text)
    t = p.type_()
    p.done()
    return t


def parse_value(text: str) -> Value:
    p = _Parser(text)
    v = p.value()
    p.done()
    return v


def print_type(t: ValueType) -> str:
    if isinstance(t, DomType):
        return "dom"
    if isinstance(t, BottomType):
        return "{_}"
    if isinstance(t, SetType):
        return "{%s}" % print_type(t.elem)
    if isinstance(t, TupleType):
        return "<%s>" % ",".join(f"{n}:{print_type(x)}" for n, x in t.fields)
    raise ParseError(f"not a type: {t!r}")


def print_value(v: Value) -> str:
    if isinstance(v, Atom):
        return str(v.literal) if isinstance(v.literal, int) else _quote(v.literal)
    if isinstance(v, SetV):
        return "{%s}" % ",".join(print_value(m) for m in v.members)
    if isinstance(v, TupleV):
        return "<%s>" % ",".join(f"{n}:{print_value(x)}" for n, x in v.fields)
    raise ParseError(f"not a value: {v!r}")
