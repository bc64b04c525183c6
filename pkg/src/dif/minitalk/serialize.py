"""Canonical serialized form of a codebase.

Two codebases are model-equal if and only if their canonical
serializations are byte-equal. The form is JSON with sorted keys and
2-space indentation; entities sort by kind then name, methods by
(side, name, arity). Whitespace, comments, and member ordering in the
source never show up here; the token sequence of a method body does.
"""

from __future__ import annotations

import json

from dif.minitalk.model import ClassDef, Codebase, MethodDef, TraitDef
from dif.minitalk.nodes import (
    Assignment,
    Expr,
    ExprStmt,
    NameRef,
    NumberLit,
    Paren,
    SelfRef,
    Send,
    Stmt,
    StringLit,
    SuperRef,
)


def body_tokens(body: tuple[Stmt, ...]) -> tuple[str, ...]:
    """Normalized token sequence of a method body. Number literals are
    canonicalized to their decimal value; strings to their shortest
    escaped form."""
    out: list[str] = []
    for stmt in body:
        _stmt_tokens(stmt, out)
    return tuple(out)


def render_body(body: tuple[Stmt, ...]) -> str:
    """Canonical one-line source text of a method body."""
    return render_tokens(body_tokens(body))


def render_tokens(tokens: tuple[str, ...]) -> str:
    parts: list[str] = []
    prev = None
    for tok in tokens:
        if prev is not None and tok not in (";", ",", ")", ".") and prev not in ("(", "."):
            parts.append(" ")
        parts.append(tok)
        prev = tok
    return "".join(parts)


def canonical_serialize(codebase: Codebase) -> str:
    doc = {
        "classes": [
            _class_doc(codebase.classes[name]) for name in sorted(codebase.classes)
        ],
        "traits": [
            _trait_doc(codebase.traits[name]) for name in sorted(codebase.traits)
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def _class_doc(cls: ClassDef) -> dict:
    return {
        "name": cls.name,
        "super": cls.super_name,
        "uses": list(cls.uses),
        "ivars": list(cls.ivars),
        "cvars": list(cls.cvars),
        "methods": _method_docs(cls.methods.values()),
    }


def _trait_doc(trait: TraitDef) -> dict:
    return {
        "name": trait.name,
        "super": None,
        "uses": list(trait.uses),
        "ivars": [],
        "cvars": [],
        "methods": _method_docs(trait.methods.values()),
    }


def _method_docs(methods) -> list[dict]:
    docs = [
        {
            "side": m.side.value,
            "name": m.name,
            "arity": m.arity,
            "params": list(m.params),
            "bodyTokens": list(body_tokens(m.body)),
        }
        for m in methods
    ]
    docs.sort(key=lambda d: (d["side"], d["name"], d["arity"]))
    return docs


def _stmt_tokens(stmt: Stmt, out: list[str]) -> None:
    if isinstance(stmt, Assignment):
        out.append(stmt.target)
        out.append("=")
        _expr_tokens(stmt.value, out)
    else:
        _expr_tokens(stmt.expr, out)
    out.append(";")


def _expr_tokens(expr: Expr, out: list[str]) -> None:
    if isinstance(expr, SelfRef):
        out.append("self")
    elif isinstance(expr, SuperRef):
        out.append("super")
    elif isinstance(expr, NameRef):
        out.append(expr.name)
    elif isinstance(expr, NumberLit):
        out.append(str(expr.value))
    elif isinstance(expr, StringLit):
        out.append(_quote(expr.value))
    elif isinstance(expr, Paren):
        out.append("(")
        _expr_tokens(expr.inner, out)
        out.append(")")
    elif isinstance(expr, Send):
        _expr_tokens(expr.receiver, out)
        out.append(".")
        out.append(expr.selector)
        out.append("(")
        for i, arg in enumerate(expr.args):
            if i:
                out.append(",")
            _expr_tokens(arg, out)
        out.append(")")
    else:  # pragma: no cover - exhaustive over Expr
        raise TypeError(f"unhandled expression node {expr!r}")


def _quote(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
