"""Recursive-descent parser for MiniTalk declarations.

Grammar::

    program    := (classDecl | traitDecl)*
    classDecl  := "class" NAME ("extends" NAME)? "{" member* "}"
    traitDecl  := "trait" NAME "{" member* "}"
    member     := "vars" nameList ";" | "classvars" nameList ";"
                | "uses" nameList ";" | methodDecl
    methodDecl := ("method" | "classmethod") NAME "(" nameList? ")" "{" stmt* "}"
    stmt       := (NAME "=" expr | expr) ";"
    expr       := primary ("." NAME "(" argList? ")")*
    primary    := "self" | "super" | NAME | NUMBER | STRING | "(" expr ")"
    nameList   := NAME ("," NAME)*
    argList    := expr ("," expr)*

Any violation raises MiniTalkSyntaxError, so a file with a syntax error
yields no codebase at all. Two constraints the grammar alone does not
carry: `super` is accepted only as the receiver of a send, and variable
declarations (`vars`/`classvars`) are rejected inside traits.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from dif.errors import MiniTalkSyntaxError
from dif.minitalk.lexer import Token, tokenize
from dif.minitalk.nodes import (
    Assignment,
    Expr,
    ExprStmt,
    Loc,
    NameRef,
    NumberLit,
    Paren,
    SelfRef,
    Send,
    Side,
    Stmt,
    StringLit,
    SuperRef,
)


@dataclass(slots=True)
class ParsedMethod:
    side: Side
    name: str
    name_loc: Loc
    params: tuple[tuple[str, Loc], ...]
    body: tuple[Stmt, ...]
    loc: Loc
    source_text: str


@dataclass(slots=True)
class ParsedClass:
    name: str
    name_loc: Loc
    super_name: str | None
    uses: list[tuple[str, Loc]] = field(default_factory=list)
    ivars: list[tuple[str, Loc]] = field(default_factory=list)
    cvars: list[tuple[str, Loc]] = field(default_factory=list)
    methods: list[ParsedMethod] = field(default_factory=list)
    loc: Loc = Loc("<input>", 1, 1)


@dataclass(slots=True)
class ParsedTrait:
    name: str
    name_loc: Loc
    uses: list[tuple[str, Loc]] = field(default_factory=list)
    methods: list[ParsedMethod] = field(default_factory=list)
    loc: Loc = Loc("<input>", 1, 1)


ParsedDecl = ParsedClass | ParsedTrait


def parse_program(text: str, file: str = "<input>") -> list[ParsedDecl]:
    """Parse a whole source file into raw declarations."""
    return _Parser(tokenize(text, file), text).program()


def parse_statements(text: str, file: str = "<input>") -> tuple[Stmt, ...]:
    """Parse a bare statement list (used to rehydrate method bodies
    carried by deltas)."""
    parser = _Parser(tokenize(text, file), text)
    stmts = parser.statements_until("eof")
    parser.expect("eof")
    return stmts


class _Parser:
    def __init__(self, tokens: list[Token], text: str) -> None:
        self.tokens = tokens
        self.text = text
        self.pos = 0

    # --- token plumbing ---

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, kind: str) -> bool:
        return self.peek().kind == kind

    def expect(self, kind: str, what: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            want = what or f"'{kind}'"
            found = "end of input" if tok.kind == "eof" else f"'{tok.text}'"
            raise MiniTalkSyntaxError(f"expected {want}, found {found}", tok.loc)
        return self.advance()

    # --- declarations ---

    def program(self) -> list[ParsedDecl]:
        decls: list[ParsedDecl] = []
        while not self.at("eof"):
            tok = self.peek()
            if tok.kind == "class":
                decls.append(self.class_decl())
            elif tok.kind == "trait":
                decls.append(self.trait_decl())
            else:
                raise MiniTalkSyntaxError(
                    f"expected 'class' or 'trait', found '{tok.text}'", tok.loc
                )
        return decls

    def class_decl(self) -> ParsedClass:
        head = self.expect("class")
        name = self.expect("name", "class name")
        super_name = None
        if self.at("extends"):
            self.advance()
            super_name = self.expect("name", "superclass name").text
        decl = ParsedClass(name.text, name.loc, super_name, loc=head.loc)
        self.expect("{")
        while not self.at("}"):
            self.member(decl, in_trait=False)
        self.expect("}")
        return decl

    def trait_decl(self) -> ParsedTrait:
        head = self.expect("trait")
        name = self.expect("name", "trait name")
        decl = ParsedTrait(name.text, name.loc, loc=head.loc)
        self.expect("{")
        while not self.at("}"):
            self.member(decl, in_trait=True)
        self.expect("}")
        return decl

    def member(self, decl: ParsedClass | ParsedTrait, in_trait: bool) -> None:
        tok = self.peek()
        if tok.kind in ("vars", "classvars"):
            if in_trait:
                raise MiniTalkSyntaxError(
                    "traits are stateless: variable declarations are not allowed here",
                    tok.loc,
                )
            self.advance()
            names = self.name_list()
            self.expect(";")
            target = decl.ivars if tok.kind == "vars" else decl.cvars
            target.extend(names)
        elif tok.kind == "uses":
            self.advance()
            decl.uses.extend(self.name_list())
            self.expect(";")
        elif tok.kind in ("method", "classmethod"):
            decl.methods.append(self.method_decl())
        else:
            raise MiniTalkSyntaxError(
                f"expected a member declaration, found '{tok.text}'", tok.loc
            )

    def method_decl(self) -> ParsedMethod:
        head = self.advance()
        side = Side.INSTANCE if head.kind == "method" else Side.CLASS
        name = self.expect("name", "method name")
        self.expect("(")
        params: tuple[tuple[str, Loc], ...] = ()
        if self.at("name"):
            params = tuple(self.name_list())
        self.expect(")")
        self.expect("{")
        body = self.statements_until("}")
        close = self.expect("}")
        return ParsedMethod(
            side=side,
            name=name.text,
            name_loc=name.loc,
            params=params,
            body=body,
            loc=head.loc,
            source_text=self.text[head.pos : close.end],
        )

    def name_list(self) -> list[tuple[str, Loc]]:
        names = [self.expect("name", "a name")]
        while self.at(","):
            self.advance()
            names.append(self.expect("name", "a name"))
        return [(t.text, t.loc) for t in names]

    # --- statements and expressions ---

    def statements_until(self, stop: str) -> tuple[Stmt, ...]:
        stmts: list[Stmt] = []
        while not self.at(stop):
            stmts.append(self.statement())
        return tuple(stmts)

    def statement(self) -> Stmt:
        tok = self.peek()
        if tok.kind == "name" and self.peek(1).kind == "=":
            self.advance()
            self.advance()
            value = self.expression()
            self.expect(";")
            return Assignment(tok.text, value, tok.loc)
        expr = self.expression()
        self.expect(";")
        return ExprStmt(expr, tok.loc)

    def expression(self) -> Expr:
        expr = self.primary()
        if isinstance(expr, SuperRef) and not self.at("."):
            raise MiniTalkSyntaxError(
                "'super' may only be used as the receiver of a send", expr.loc
            )
        while self.at("."):
            self.advance()
            selector = self.expect("name", "selector name")
            self.expect("(")
            args: tuple[Expr, ...] = ()
            if not self.at(")"):
                args = self.arg_list()
            self.expect(")")
            expr = Send(expr, selector.text, args, selector.loc)
        return expr

    def arg_list(self) -> tuple[Expr, ...]:
        args = [self.expression()]
        while self.at(","):
            self.advance()
            args.append(self.expression())
        return tuple(args)

    def primary(self) -> Expr:
        tok = self.peek()
        if tok.kind == "self":
            self.advance()
            return SelfRef(tok.loc)
        if tok.kind == "super":
            self.advance()
            return SuperRef(tok.loc)
        if tok.kind == "name":
            self.advance()
            return NameRef(tok.text, tok.loc)
        if tok.kind == "number":
            self.advance()
            return NumberLit(tok.value, tok.loc)  # type: ignore[arg-type]
        if tok.kind == "string":
            self.advance()
            return StringLit(tok.value, tok.loc)  # type: ignore[arg-type]
        if tok.kind == "(":
            self.advance()
            inner = self.expression()
            self.expect(")")
            return Paren(inner, tok.loc)
        found = "end of input" if tok.kind == "eof" else f"'{tok.text}'"
        raise MiniTalkSyntaxError(f"expected expression, found {found}", tok.loc)
