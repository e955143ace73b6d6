"""Interactive session service: build a query one operation at a time.

Sessions hold a starting schema, sample data, and a history of applied
operations with per-step snapshots; replaying the history from the start
reproduces the latest snapshots exactly. Operations are applied
transactionally (on error nothing changes), undo pops one history entry,
and the accumulated script as well as its compiled algebra expression
can be exported at any time.

Endpoints (JSON unless noted)::

    POST /sessions                {schema, data, preview_limit?} -> {id}
    GET  /sessions/{id}/schema    -> {schema, text}
    POST /sessions/{id}/ops       {op}  -> {schema, preview}
         ?validate=true           dry-run: validates without committing
    POST /sessions/{id}/undo      -> {schema, preview}
    GET  /sessions/{id}/preview   -> {preview}
    GET  /sessions/{id}/script    -> text/plain
    GET  /sessions/{id}/compiled  -> text/plain

Errors are ``{code, reason, path}``: 400 for unparseable or
nonconforming input, 404 for unknown sessions, 409 for rejected
operations (code carries the applicability reason, path the offending
target) and for undo on an empty history.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from . import script as script_text, vcp2ma
from .ma import print_ma
from .ops import ConditionViolated, VcpOp, apply_op
from .paths import print_path
from .text import parse_type, parse_value, print_type
from .values import (
    Atom,
    BottomType,
    DomType,
    NoSuchPath,
    ParseError,
    SetType,
    SetV,
    TupleType,
    TupleV,
    Value,
    ValueType,
    VcpError,
    conforms,
)

DEFAULT_PREVIEW_LIMIT = 50
DEFAULT_IDLE_TTL = 3600.0


class ApiError(Exception):
    def __init__(self, status: int, code: str, reason: str, path: str | None = None):
        super().__init__(reason)
        self.status = status
        self.code = code
        self.reason = reason
        self.path = path


@dataclass
class HistoryEntry:
    op: VcpOp
    schema_after: ValueType
    data_after: Value


@dataclass
class Session:
    id: str
    schema0: ValueType
    data0: Value
    preview_limit: int
    history: list[HistoryEntry] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_used: float = 0.0

    @property
    def schema(self) -> ValueType:
        return self.history[-1].schema_after if self.history else self.schema0

    @property
    def data(self) -> Value:
        return self.history[-1].data_after if self.history else self.data0


class SessionStore:
    """In-memory sessions with idle expiry; concurrent sessions are independent."""

    def __init__(self, idle_ttl: float = DEFAULT_IDLE_TTL, clock=time.monotonic):
        self.idle_ttl = idle_ttl
        self.clock = clock
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self, schema: ValueType, data: Value, preview_limit: int) -> Session:
        session = Session(uuid.uuid4().hex, schema, data, preview_limit)
        session.last_used = self.clock()
        with self._lock:
            self._purge()
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            self._purge()
            session = self._sessions.get(session_id)
        if session is None:
            raise ApiError(404, "unknown_session", f"no session {session_id!r}")
        session.last_used = self.clock()
        return session

    def _purge(self) -> None:
        now = self.clock()
        dead = [sid for sid, s in self._sessions.items() if now - s.last_used > self.idle_ttl]
        for sid in dead:
            del self._sessions[sid]


# ---------------------------------------------------------------------------
# JSON encodings
# ---------------------------------------------------------------------------


def type_to_json(t: ValueType) -> dict:
    if isinstance(t, DomType):
        return {"kind": "dom"}
    if isinstance(t, BottomType):
        return {"kind": "bottom"}
    if isinstance(t, SetType):
        return {"kind": "set", "elem": type_to_json(t.elem)}
    if isinstance(t, TupleType):
        return {"kind": "tuple", "attrs": {n: type_to_json(x) for n, x in t.fields}}
    raise VcpError(f"not a type: {t!r}")


def value_to_json(v: Value, limit: int) -> dict:
    """Preview encoding; sets are cut to `limit` members with a truncation flag."""
    if isinstance(v, Atom):
        kind = "int" if isinstance(v.literal, int) else "str"
        return {"kind": kind, "value": v.literal}
    if isinstance(v, SetV):
        members = v.members[:limit] if limit >= 0 else v.members
        return {
            "kind": "set",
            "members": [value_to_json(m, limit) for m in members],
            "size": len(v.members),
            "truncated": len(members) < len(v.members),
        }
    if isinstance(v, TupleV):
        return {"kind": "tuple", "attrs": {n: value_to_json(x, limit) for n, x in v.fields}}
    raise VcpError(f"not a value: {v!r}")


_OP_FIELDS = {
    "newconst": ("node", "attr", "const"),
    "instuple": ("node", "attr"),
    "insset": ("node",),
    "rename": ("edge", "attr"),
    "elimset": ("node",),
    "elimtuple": ("node",),
    "delete": ("edge",),
    "copy": ("src", "dest"),
    "move": ("src", "dest"),
    "select": ("node", "a", "b"),
}


def ops_from_json(body: dict) -> list[VcpOp]:
    """Decode one operation (``move`` expands to its copy + delete pair)."""
    if not isinstance(body, dict) or "kind" not in body:
        raise ApiError(400, "parse_error", "operation must be an object with a 'kind'")
    kind = body["kind"]
    if kind not in _OP_FIELDS:
        raise ApiError(400, "parse_error", f"unknown operation kind {kind!r}")
    args = []
    for name in _OP_FIELDS[kind]:
        if name not in body or not isinstance(body[name], str):
            raise ApiError(400, "parse_error", f"'{kind}' needs a string field {name!r}")
        args.append(body[name])
    line = _op_line(kind, args)
    try:
        return script_text.parse_line(line)
    except ParseError as err:
        raise ApiError(400, "parse_error", str(err))


def _op_line(kind: str, args: list[str]) -> str:
    if kind in ("copy", "move"):
        return f"{kind} {args[0]} -> {args[1]}"
    return " ".join([kind] + args)


# ---------------------------------------------------------------------------
# Application
# ---------------------------------------------------------------------------


def create_app(idle_ttl: float = DEFAULT_IDLE_TTL, clock=time.monotonic) -> FastAPI:
    app = FastAPI(title="vcp session service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    store = SessionStore(idle_ttl, clock)
    app.state.store = store

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, err: ApiError):
        return JSONResponse(
            status_code=err.status,
            content={"code": err.code, "reason": err.reason, "path": err.path},
        )

    def snapshot(session: Session) -> dict:
        return {
            "schema": type_to_json(session.schema),
            "schema_text": print_type(session.schema),
            "preview": value_to_json(session.data, session.preview_limit),
        }

    @app.post("/sessions", status_code=201)
    def create_session(body: dict):
        schema_text = body.get("schema")
        data_text = body.get("data")
        limit = body.get("preview_limit", DEFAULT_PREVIEW_LIMIT)
        if not isinstance(schema_text, str) or not isinstance(data_text, str):
            raise ApiError(400, "parse_error", "need string fields 'schema' and 'data'")
        if not isinstance(limit, int) or limit <= 0:
            raise ApiError(400, "parse_error", "'preview_limit' must be a positive integer")
        try:
            schema = parse_type(schema_text)
        except ParseError as err:
            raise ApiError(400, "parse_error", f"schema: {err}")
        try:
            data = parse_value(data_text)
        except ParseError as err:
            raise ApiError(400, "parse_error", f"data: {err}")
        if not conforms(data, schema):
            raise ApiError(400, "nonconforming_data", "data does not conform to the schema")
        session = store.create(schema, data, limit)
        return {"id": session.id}

    @app.get("/sessions/{session_id}/schema")
    def get_schema(session_id: str):
        session = store.get(session_id)
        with session.lock:
            return {
                "schema": type_to_json(session.schema),
                "text": print_type(session.schema),
            }

    @app.post("/sessions/{session_id}/ops")
    def post_op(session_id: str, body: dict, validate: bool = Query(default=False)):
        session = store.get(session_id)
        decoded = ops_from_json(body)
        with session.lock:
            schema, data = session.schema, session.data
            staged: list[HistoryEntry] = []
            try:
                for op in decoded:
                    schema, data = apply_op(schema, data, op)
                    staged.append(HistoryEntry(op, schema, data))
            except ConditionViolated as err:
                raise ApiError(409, err.reason, err.detail, print_path(err.path))
            except NoSuchPath as err:
                raise ApiError(409, "no_such_path", str(err), err.path or None)
            if validate:
                return {"ok": True}
            session.history.extend(staged)
            return snapshot(session)

    @app.post("/sessions/{session_id}/undo")
    def undo(session_id: str):
        session = store.get(session_id)
        with session.lock:
            if not session.history:
                raise ApiError(409, "empty_history", "nothing to undo")
            session.history.pop()
            return snapshot(session)

    @app.get("/sessions/{session_id}/preview")
    def preview(session_id: str):
        session = store.get(session_id)
        with session.lock:
            return {"preview": value_to_json(session.data, session.preview_limit)}

    @app.get("/sessions/{session_id}/script")
    def get_script(session_id: str):
        session = store.get(session_id)
        with session.lock:
            text = script_text.print_script([entry.op for entry in session.history])
        return PlainTextResponse(text)

    @app.get("/sessions/{session_id}/compiled")
    def get_compiled(session_id: str):
        session = store.get(session_id)
        with session.lock:
            expr = vcp2ma.compile_script(session.schema0, [e.op for e in session.history])
        return PlainTextResponse(print_ma(expr) + "\n")

    return app


app = create_app()


def main(argv: list[str] | None = None) -> int:
    import argparse

    import uvicorn

    parser = argparse.ArgumentParser(prog="vcp-serve", description="run the session service")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8750)
    parser.add_argument("--idle-ttl", type=float, default=DEFAULT_IDLE_TTL)
    args = parser.parse_args(argv)
    uvicorn.run(create_app(idle_ttl=args.idle_ttl), host=args.host, port=args.port)
    return 0


if __name__ == "__main__":
    main()
