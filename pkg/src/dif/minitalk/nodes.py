"""Core value types for the MiniTalk object model.

Source locations, diagnostics, and the statement/expression AST shared
by the lexer, parser, codebase model, and the analyses built on top of
them. Everything here is immutable, so codebases can be shared freely
across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Union


@dataclass(frozen=True, slots=True)
class Loc:
    """Position of a token, AST node, or diagnostic in its source file."""

    file: str
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.col}"


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


class DiagCode(str, Enum):
    """Machine-readable diagnostic categories."""

    SYNTAX_ERROR = "SyntaxError"
    DUPLICATE_CLASS = "DuplicateClass"
    DUPLICATE_TRAIT = "DuplicateTrait"
    DUPLICATE_METHOD = "DuplicateMethod"
    DUPLICATE_VARIABLE = "DuplicateVariable"
    DUPLICATE_PARAMETER = "DuplicateParameter"
    UNRESOLVED_SUPERCLASS = "UnresolvedSuperclass"
    UNRESOLVED_TRAIT = "UnresolvedTrait"
    INHERITANCE_CYCLE = "InheritanceCycle"
    TRAIT_CYCLE = "TraitCycle"
    TRAIT_CONFLICT = "TraitConflict"
    UNRESOLVED_NAME = "UnresolvedName"
    UNRESOLVED_SEND = "UnresolvedSend"
    IVAR_FROM_CLASS_METHOD = "IvarFromClassMethod"
    REDUNDANT_ADD_METHOD = "RedundantAddMethod"


@dataclass(frozen=True, slots=True)
class Diagnostic:
    severity: Severity
    code: DiagCode
    message: str
    loc: Loc

    def render(self) -> str:
        return f"{self.loc}: {self.severity.value}: {self.message} [{self.code.value}]"


class Side(str, Enum):
    """Which method table a definition lives in: the instance side or the
    class side (the metaclass role)."""

    INSTANCE = "instance"
    CLASS = "class"


class OwnerKind(str, Enum):
    CLASS = "class"
    TRAIT = "trait"


# --- statement / expression AST -------------------------------------------
#
# Method bodies are flat statement lists; expressions are chains of sends
# over a handful of primaries. `super` only ever appears as the receiver
# of a Send (the parser rejects everything else).


@dataclass(frozen=True, slots=True)
class SelfRef:
    loc: Loc


@dataclass(frozen=True, slots=True)
class SuperRef:
    loc: Loc


@dataclass(frozen=True, slots=True)
class NameRef:
    name: str
    loc: Loc


@dataclass(frozen=True, slots=True)
class NumberLit:
    value: int
    loc: Loc


@dataclass(frozen=True, slots=True)
class StringLit:
    value: str
    loc: Loc


@dataclass(frozen=True, slots=True)
class Paren:
    inner: "Expr"
    loc: Loc


@dataclass(frozen=True, slots=True)
class Send:
    receiver: "Expr"
    selector: str
    args: tuple["Expr", ...]
    loc: Loc


Expr = Union[SelfRef, SuperRef, NameRef, NumberLit, StringLit, Paren, Send]


@dataclass(frozen=True, slots=True)
class Assignment:
    """`name = expr;` — loc points at the assignment target."""

    target: str
    value: Expr
    loc: Loc


@dataclass(frozen=True, slots=True)
class ExprStmt:
    expr: Expr
    loc: Loc


Stmt = Union[Assignment, ExprStmt]
