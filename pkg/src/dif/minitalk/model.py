"""The MiniTalk codebase model.

A Codebase is an immutable, validated snapshot of parsed source:
name-keyed classes and traits plus the diagnostics accumulated while
building it. Class and trait names share one namespace. Semantic
problems are diagnostics, not exceptions: errors (duplicates, cycles)
mark the codebase unusable for dependency analysis, warnings
(unresolved superclasses or traits) degrade the entity to an external
root but keep the snapshot analyzable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from dif.minitalk.nodes import (
    DiagCode,
    Diagnostic,
    Loc,
    OwnerKind,
    Severity,
    Side,
    Stmt,
)
from dif.minitalk.parser import (
    ParsedClass,
    ParsedDecl,
    ParsedMethod,
    ParsedTrait,
    parse_program,
)

MethodKey = tuple[Side, str, int]


@dataclass(frozen=True)
class MethodDef:
    owner: str
    owner_kind: OwnerKind
    side: Side
    name: str
    arity: int
    params: tuple[str, ...]
    body: tuple[Stmt, ...]
    source_text: str
    loc: Loc

    @property
    def key(self) -> MethodKey:
        return (self.side, self.name, self.arity)


@dataclass(frozen=True)
class ClassDef:
    name: str
    super_name: str | None
    uses: tuple[str, ...]
    ivars: tuple[str, ...]
    cvars: tuple[str, ...]
    methods: dict[MethodKey, MethodDef]
    loc: Loc


@dataclass(frozen=True)
class TraitDef:
    name: str
    uses: tuple[str, ...]
    methods: dict[MethodKey, MethodDef]
    loc: Loc


EntityDef = Union[ClassDef, TraitDef]


@dataclass(frozen=True)
class Codebase:
    """Validated snapshot of MiniTalk source. Never mutated after
    construction; every transformation builds a new Codebase."""

    classes: dict[str, ClassDef]
    traits: dict[str, TraitDef]
    diagnostics: tuple[Diagnostic, ...]

    @property
    def has_errors(self) -> bool:
        return any(d.severity is Severity.ERROR for d in self.diagnostics)

    @property
    def errors(self) -> tuple[Diagnostic, ...]:
        return tuple(d for d in self.diagnostics if d.severity is Severity.ERROR)

    def entity(self, name: str) -> EntityDef | None:
        return self.classes.get(name) or self.traits.get(name)

    def superclass(self, cls: ClassDef) -> ClassDef | None:
        """Resolved superclass, or None for roots and unresolved names."""
        if cls.super_name is None:
            return None
        return self.classes.get(cls.super_name)

    def entities(self) -> Iterator[EntityDef]:
        yield from self.classes.values()
        yield from self.traits.values()


def parse(text: str, origin: str = "<input>") -> Codebase:
    """Parse and validate one source file.

    Raises MiniTalkSyntaxError on any token or grammar violation (no
    partial codebase); semantic findings land in codebase.diagnostics.
    """
    return _build(parse_program(text, origin))


def merge_sources(files: Iterable[tuple[str, str]]) -> Codebase:
    """Build the union codebase of several (text, label) files.

    Each file must parse on its own; declaration order is file order
    then in-file order. A name declared in two files yields a
    DuplicateClass/DuplicateTrait error diagnostic.
    """
    decls: list[ParsedDecl] = []
    for text, label in files:
        decls.extend(parse_program(text, label))
    return _build(decls)


def validate(codebase: Codebase) -> list[Diagnostic]:
    """Recompute hierarchy diagnostics: UnresolvedSuperclass,
    UnresolvedTrait (warnings), InheritanceCycle, TraitCycle (errors).

    parse/merge_sources already include these in the codebase's own
    diagnostics; this is idempotent and side-effect free.
    """
    return hierarchy_diagnostics(codebase.classes, codebase.traits)


def model_key(codebase: Codebase):
    """Hashable structural identity; diagnostics and locations excluded."""
    from dif.minitalk.serialize import canonical_serialize

    return canonical_serialize(codebase)


def model_equal(a: Codebase, b: Codebase) -> bool:
    return model_key(a) == model_key(b)


# --- construction -----------------------------------------------------------


def _build(decls: list[ParsedDecl]) -> Codebase:
    classes: dict[str, ClassDef] = {}
    traits: dict[str, TraitDef] = {}
    diags: list[Diagnostic] = []

    for decl in decls:
        if decl.name in classes or decl.name in traits:
            code = (
                DiagCode.DUPLICATE_CLASS
                if isinstance(decl, ParsedClass)
                else DiagCode.DUPLICATE_TRAIT
            )
            kind = "class" if isinstance(decl, ParsedClass) else "trait"
            diags.append(
                Diagnostic(
                    Severity.ERROR,
                    code,
                    f"{kind} '{decl.name}' is already declared",
                    decl.name_loc,
                )
            )
            continue
        if isinstance(decl, ParsedClass):
            classes[decl.name] = _build_class(decl, diags)
        else:
            traits[decl.name] = _build_trait(decl, diags)

    diags.extend(hierarchy_diagnostics(classes, traits))
    return Codebase(classes, traits, tuple(diags))


def _build_class(decl: ParsedClass, diags: list[Diagnostic]) -> ClassDef:
    ivars = _unique_vars(decl.name, decl.ivars, (), diags)
    cvars = _unique_vars(decl.name, decl.cvars, ivars, diags)
    methods = _build_methods(decl.name, OwnerKind.CLASS, decl.methods, diags)
    return ClassDef(
        name=decl.name,
        super_name=decl.super_name,
        uses=tuple(n for n, _ in decl.uses),
        ivars=ivars,
        cvars=cvars,
        methods=methods,
        loc=decl.loc,
    )


def _build_trait(decl: ParsedTrait, diags: list[Diagnostic]) -> TraitDef:
    methods = _build_methods(decl.name, OwnerKind.TRAIT, decl.methods, diags)
    return TraitDef(
        name=decl.name,
        uses=tuple(n for n, _ in decl.uses),
        methods=methods,
        loc=decl.loc,
    )


def _unique_vars(
    owner: str,
    declared: list[tuple[str, Loc]],
    taken: tuple[str, ...],
    diags: list[Diagnostic],
) -> tuple[str, ...]:
    seen: list[str] = []
    for name, loc in declared:
        if name in seen or name in taken:
            diags.append(
                Diagnostic(
                    Severity.ERROR,
                    DiagCode.DUPLICATE_VARIABLE,
                    f"variable '{name}' is already declared in '{owner}'",
                    loc,
                )
            )
            continue
        seen.append(name)
    return tuple(seen)


def _build_methods(
    owner: str,
    owner_kind: OwnerKind,
    parsed: list[ParsedMethod],
    diags: list[Diagnostic],
) -> dict[MethodKey, MethodDef]:
    methods: dict[MethodKey, MethodDef] = {}
    for pm in parsed:
        params: list[str] = []
        for pname, ploc in pm.params:
            if pname in params:
                diags.append(
                    Diagnostic(
                        Severity.ERROR,
                        DiagCode.DUPLICATE_PARAMETER,
                        f"duplicate parameter '{pname}' in '{owner}>>{pm.name}'",
                        ploc,
                    )
                )
                continue
            params.append(pname)
        key = (pm.side, pm.name, len(params))
        if key in methods:
            diags.append(
                Diagnostic(
                    Severity.ERROR,
                    DiagCode.DUPLICATE_METHOD,
                    f"method '{pm.name}/{len(params)}' ({pm.side.value} side) "
                    f"is already defined in '{owner}'",
                    pm.name_loc,
                )
            )
            continue
        methods[key] = MethodDef(
            owner=owner,
            owner_kind=owner_kind,
            side=pm.side,
            name=pm.name,
            arity=len(params),
            params=tuple(params),
            body=pm.body,
            source_text=pm.source_text,
            loc=pm.loc,
        )
    return methods


# --- hierarchy validation ---------------------------------------------------


def hierarchy_diagnostics(
    classes: dict[str, ClassDef], traits: dict[str, TraitDef]
) -> list[Diagnostic]:
    diags: list[Diagnostic] = []

    for cls in classes.values():
        if cls.super_name is not None and cls.super_name not in classes:
            detail = "is not a class" if cls.super_name in traits else "is not defined"
            diags.append(
                Diagnostic(
                    Severity.WARNING,
                    DiagCode.UNRESOLVED_SUPERCLASS,
                    f"superclass '{cls.super_name}' of '{cls.name}' {detail}; "
                    f"treating '{cls.name}' as a root",
                    cls.loc,
                )
            )

    for entity in list(classes.values()) + list(traits.values()):
        for used in entity.uses:
            if used not in traits:
                detail = "is not a trait" if used in classes else "is not defined"
                diags.append(
                    Diagnostic(
                        Severity.WARNING,
                        DiagCode.UNRESOLVED_TRAIT,
                        f"trait '{used}' used by '{entity.name}' {detail}",
                        entity.loc,
                    )
                )

    diags.extend(_inheritance_cycles(classes))
    diags.extend(_trait_cycles(traits))
    return diags


def _inheritance_cycles(classes: dict[str, ClassDef]) -> list[Diagnostic]:
    # Each class has at most one resolved super edge, so chain-walking
    # with three-state marks finds every cycle exactly once.
    diags: list[Diagnostic] = []
    state: dict[str, int] = {}  # 1 = on current path, 2 = done
    for start in classes:
        if state.get(start):
            continue
        path: list[str] = []
        cur: str | None = start
        while cur is not None and cur in classes and not state.get(cur):
            state[cur] = 1
            path.append(cur)
            nxt = classes[cur].super_name
            cur = nxt if nxt in classes else None
        if cur is not None and state.get(cur) == 1:
            cycle = path[path.index(cur) :]
            diags.append(
                Diagnostic(
                    Severity.ERROR,
                    DiagCode.INHERITANCE_CYCLE,
                    "inheritance cycle: " + " -> ".join(cycle + [cycle[0]]),
                    classes[cycle[0]].loc,
                )
            )
        for name in path:
            state[name] = 2
    return diags


def _trait_cycles(traits: dict[str, TraitDef]) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    state: dict[str, int] = {}  # 1 = on stack, 2 = done

    def visit(name: str, stack: list[str]) -> None:
        state[name] = 1
        stack.append(name)
        for used in traits[name].uses:
            if used not in traits:
                continue
            mark = state.get(used)
            if mark == 1:
                cycle = stack[stack.index(used) :]
                diags.append(
                    Diagnostic(
                        Severity.ERROR,
                        DiagCode.TRAIT_CYCLE,
                        "trait usage cycle: " + " -> ".join(cycle + [cycle[0]]),
                        traits[cycle[0]].loc,
                    )
                )
            elif not mark:
                visit(used, stack)
        stack.pop()
        state[name] = 2

    for name in traits:
        if not state.get(name):
            visit(name, [])
    return diags
