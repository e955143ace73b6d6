"""Schema-tree query engine for complex-value databases."""

from .values import (
    BOTTOM,
    DOM,
    Atom,
    BottomType,
    DomType,
    EMPTY_SET,
    NoSuchPath,
    ParseError,
    SetType,
    SetV,
    TupleType,
    TupleV,
    UNIT_TUPLE,
    Value,
    ValueType,
    VcpError,
    attr_names,
    conforms,
    const_type,
    deep_equal,
    fresh_attr,
    tuple_type,
    tuple_value,
)
from .paths import ROOT, STAR, Path, Star, match_nodes, parse_path, print_path, resolve
from .text import parse_type, parse_value, print_type, print_value
from .ops import (
    ConditionViolated,
    CopySet,
    CopyTuple,
    CtxInfo,
    Delete,
    EliminateSet,
    EliminateTuple,
    InsertSet,
    InsertTuple,
    NewConst,
    Rename,
    Select,
    VcpOp,
    apply_data,
    apply_op,
    ctx_info,
    run_script,
    validate_and_apply_schema,
)
from .script import parse_script, print_op, print_script
from .ma import MaExpr, MaType, MaTypeError, eval_expr, ma_type, parse_ma, print_ma, typecheck
from .vcp2ma import compile_op, compile_script
from .ma2vcp import translate

__all__ = [name for name in dir() if not name.startswith("_")]
