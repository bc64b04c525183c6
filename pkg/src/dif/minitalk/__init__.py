"""MiniTalk: the small object-oriented subject language dif analyzes.

Classes with single inheritance and instance/class variables, stateless
traits composed on the instance declaration, and instance/class-side
methods whose bodies are statement lists over self/super/named sends.
"""

from dif.minitalk.lexer import Token, tokenize
from dif.minitalk.model import (
    ClassDef,
    Codebase,
    EntityDef,
    MethodDef,
    MethodKey,
    TraitDef,
    hierarchy_diagnostics,
    merge_sources,
    model_equal,
    model_key,
    parse,
    validate,
)
from dif.minitalk.nodes import (
    Assignment,
    DiagCode,
    Diagnostic,
    Expr,
    ExprStmt,
    Loc,
    NameRef,
    NumberLit,
    OwnerKind,
    Paren,
    SelfRef,
    Send,
    Severity,
    Side,
    Stmt,
    StringLit,
    SuperRef,
)
from dif.minitalk.parser import parse_program, parse_statements
from dif.minitalk.serialize import (
    body_tokens,
    canonical_serialize,
    render_body,
    render_tokens,
)

__all__ = [
    "Assignment",
    "ClassDef",
    "Codebase",
    "DiagCode",
    "Diagnostic",
    "EntityDef",
    "Expr",
    "ExprStmt",
    "Loc",
    "MethodDef",
    "MethodKey",
    "NameRef",
    "NumberLit",
    "OwnerKind",
    "Paren",
    "SelfRef",
    "Send",
    "Severity",
    "Side",
    "Stmt",
    "StringLit",
    "SuperRef",
    "Token",
    "TraitDef",
    "body_tokens",
    "canonical_serialize",
    "hierarchy_diagnostics",
    "merge_sources",
    "model_equal",
    "model_key",
    "parse",
    "parse_program",
    "parse_statements",
    "render_body",
    "render_tokens",
    "tokenize",
    "validate",
]
