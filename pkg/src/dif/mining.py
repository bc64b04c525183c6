"""Static dependency mining over MiniTalk codebases.

Every analysis in this package reduces to the dependency set of a
snapshot: the deduplicated, canonically ordered collection of
source -> target edges between code entities. Four kinds of edge are
mined:

* inheritance — a class depends on its resolved superclass;
* trait-usage — a class or trait depends on each trait it directly uses;
* var-access — a method depends on each instance/class variable it reads
  or writes, attributed to the defining class;
* message-send — a method depends on every method a send may invoke.

Sends are resolved without type information, so a plain send targets
every implementor of its selector (name plus arity, both sides). Sends
to `self` and `super` get a refined lookup instead:

* self-send: the nearest implementor found by walking the sender's class
  and its ancestors, plus every override of the selector in the sender's
  descendants (an override here means the descendant's own effective
  method table binds the selector, locally or via a trait).
* super-send: the nearest implementor starting at the sender's
  superclass.

A self-send inside a trait method is resolved per using class (every
class whose transitive trait composition includes the trait), and the
union of those refinements is the target set; the edge source stays the
trait's method.

Method lookup consults effective method tables: the entity's local
methods overriding anything its traits (transitively) provide. Two
distinct traits providing the same selector with no local override is a
conflict: the selector is left unbound and a TraitConflict diagnostic is
emitted.

Unresolvable names and sends never produce edges, only warnings, so
every mined edge has both endpoints present in the codebase.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Union

from dif.errors import InvalidCodebaseError, UnknownEntityError
from dif.minitalk.model import ClassDef, Codebase, EntityDef, MethodDef, TraitDef
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
    StringLit,
    SuperRef,
)


class DependencyKind(str, Enum):
    INHERITANCE = "inheritance"
    TRAIT_USAGE = "trait-usage"
    VARIABLE_ACCESS = "var-access"
    MESSAGE_SEND = "message-send"


_KIND_RANK = {kind: rank for rank, kind in enumerate(DependencyKind)}


class VarKind(str, Enum):
    IVAR = "ivar"
    CVAR = "cvar"


# --- entity references ------------------------------------------------------


@dataclass(frozen=True, slots=True)
class ClassRef:
    name: str

    @property
    def sort_key(self):
        return (0, self.name)

    def render(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class TraitRef:
    name: str

    @property
    def sort_key(self):
        return (1, self.name)

    def render(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class MethodRef:
    owner: str
    owner_kind: OwnerKind
    side: Side
    name: str
    arity: int

    @property
    def sort_key(self):
        return (2, self.owner, self.owner_kind.value, self.side.value, self.name, self.arity)

    def render(self) -> str:
        marker = " class" if self.side is Side.CLASS else ""
        return f"{self.owner}{marker}>>{self.name}/{self.arity}"


@dataclass(frozen=True, slots=True)
class VarRef:
    owner: str
    name: str
    var_kind: VarKind

    @property
    def sort_key(self):
        return (3, self.owner, self.name, self.var_kind.value)

    def render(self) -> str:
        marker = "(class)" if self.var_kind is VarKind.CVAR else ""
        return f"{self.owner}.{self.name}{marker}"


EntityRef = Union[ClassRef, TraitRef, MethodRef, VarRef]


def method_ref(method: MethodDef) -> MethodRef:
    return MethodRef(method.owner, method.owner_kind, method.side, method.name, method.arity)


@dataclass(frozen=True, slots=True)
class Dependency:
    source: EntityRef
    kind: DependencyKind
    target: EntityRef

    @property
    def sort_key(self):
        return (self.source.sort_key, _KIND_RANK[self.kind], self.target.sort_key)

    def render(self) -> str:
        return f"{self.source.render()} -[{self.kind.value}]-> {self.target.render()}"


@dataclass(frozen=True)
class DependencySet:
    """Deduplicated dependencies in canonical (source, kind, target) order."""

    entries: tuple[Dependency, ...]

    @classmethod
    def of(cls, deps: Iterable[Dependency]) -> "DependencySet":
        return cls(tuple(sorted(set(deps), key=lambda d: d.sort_key)))

    def as_set(self) -> frozenset[Dependency]:
        return frozenset(self.entries)

    def render_lines(self) -> list[str]:
        return [d.render() for d in self.entries]

    def __iter__(self) -> Iterator[Dependency]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, dep: object) -> bool:
        return dep in self.entries


@dataclass(frozen=True)
class EffectiveMethodTable:
    """Selector bindings of one entity after trait flattening: local
    methods win over trait-provided ones; selectors two distinct traits
    both provide (and no local method settles) stay unbound."""

    entity: ClassRef | TraitRef
    bindings: dict[Side, dict[tuple[str, int], MethodRef]]
    conflicts: tuple[Diagnostic, ...]

    def provider(self, side: Side, name: str, arity: int) -> MethodRef | None:
        return self.bindings[side].get((name, arity))

    def selectors(self, side: Side) -> dict[tuple[str, int], MethodRef]:
        return self.bindings[side]


class DependencyMiner:
    """Collects the static dependency set of one validated codebase.

    Builds and caches the lookup structures (effective method tables,
    ancestor chains, descendant sets, the implementors index) on demand;
    the codebase itself is never modified. Warnings produced while
    mining accumulate in `diagnostics`.
    """

    def __init__(self, codebase: Codebase) -> None:
        if codebase.has_errors:
            raise InvalidCodebaseError(codebase.diagnostics)
        self.codebase = codebase
        self.diagnostics: list[Diagnostic] = []
        self._tables: dict[str, EffectiveMethodTable] = {}
        self._chains: dict[str, tuple[ClassDef, ...]] = {}
        self._descendants: dict[str, frozenset[str]] = {}
        self._children: dict[str, list[str]] | None = None
        self._implementors: dict[tuple[str, int], frozenset[MethodRef]] | None = None
        self._trait_users: dict[str, tuple[str, ...]] | None = None
        self._conflicts_reported: set[str] = set()

    # --- public queries ---

    def mine(self) -> DependencySet:
        deps: list[Dependency] = []
        for cls in self.codebase.classes.values():
            src = ClassRef(cls.name)
            sup = self.codebase.superclass(cls)
            if sup is not None:
                deps.append(Dependency(src, DependencyKind.INHERITANCE, ClassRef(sup.name)))
            self._mine_uses(src, cls.uses, deps)
            self._report_conflicts(cls.name)
            for method in cls.methods.values():
                self._mine_method(method, deps)
        for trait in self.codebase.traits.values():
            src = TraitRef(trait.name)
            self._mine_uses(src, trait.uses, deps)
            self._report_conflicts(trait.name)
            for method in trait.methods.values():
                self._mine_method(method, deps)
        return DependencySet.of(deps)

    def effective_table(self, name: str) -> EffectiveMethodTable:
        if self.codebase.entity(name) is None:
            raise UnknownEntityError(f"no class or trait named '{name}'")
        return self._table(name)

    def lookup(self, start_class: str, side: Side, name: str, arity: int) -> MethodRef | None:
        """First effective-table binding of (name, arity) walking
        start_class then its ancestors; None when nothing implements it."""
        if start_class not in self.codebase.classes:
            raise UnknownEntityError(f"no class named '{start_class}'")
        for cls in self._ancestor_chain(start_class):
            provider = self._table(cls.name).provider(side, name, arity)
            if provider is not None:
                return provider
        return None

    def implementors(self, name: str, arity: int) -> frozenset[MethodRef]:
        """Every method matching (name, arity): both sides, classes and
        traits alike."""
        if self._implementors is None:
            index: dict[tuple[str, int], set[MethodRef]] = {}
            for entity in self.codebase.entities():
                for method in entity.methods.values():
                    index.setdefault((method.name, method.arity), set()).add(method_ref(method))
            self._implementors = {k: frozenset(v) for k, v in index.items()}
        return self._implementors.get((name, arity), frozenset())

    def descendants(self, class_name: str) -> frozenset[ClassRef]:
        return frozenset(ClassRef(n) for n in self._descendant_names(class_name))

    # --- lookup structures ---

    def _ancestor_chain(self, class_name: str) -> tuple[ClassDef, ...]:
        chain = self._chains.get(class_name)
        if chain is None:
            out: list[ClassDef] = []
            cur: ClassDef | None = self.codebase.classes[class_name]
            while cur is not None:
                out.append(cur)
                cur = self.codebase.superclass(cur)
            chain = tuple(out)
            self._chains[class_name] = chain
        return chain

    def _descendant_names(self, class_name: str) -> frozenset[str]:
        if class_name not in self.codebase.classes:
            raise UnknownEntityError(f"no class named '{class_name}'")
        cached = self._descendants.get(class_name)
        if cached is not None:
            return cached
        if self._children is None:
            children: dict[str, list[str]] = {}
            for cls in self.codebase.classes.values():
                sup = self.codebase.superclass(cls)
                if sup is not None:
                    children.setdefault(sup.name, []).append(cls.name)
            self._children = children
        found: set[str] = set()
        work = list(self._children.get(class_name, ()))
        while work:
            name = work.pop()
            if name in found:
                continue
            found.add(name)
            work.extend(self._children.get(name, ()))
        result = frozenset(found)
        self._descendants[class_name] = result
        return result

    def _table(self, name: str) -> EffectiveMethodTable:
        table = self._tables.get(name)
        if table is not None:
            return table
        entity = self.codebase.entity(name)
        assert entity is not None
        bindings: dict[Side, dict[tuple[str, int], MethodRef]] = {
            Side.INSTANCE: {},
            Side.CLASS: {},
        }
        conflicted: set[tuple[Side, tuple[str, int]]] = set()
        for used in entity.uses:
            trait = self.codebase.traits.get(used)
            if trait is None:
                continue
            sub = self._table(trait.name)
            for side in (Side.INSTANCE, Side.CLASS):
                for key, provider in sub.selectors(side).items():
                    if (side, key) in conflicted:
                        continue
                    current = bindings[side].get(key)
                    if current is None:
                        bindings[side][key] = provider
                    elif current != provider:
                        # Same method reached through two paths is fine;
                        # two distinct providers conflict.
                        conflicted.add((side, key))
                        del bindings[side][key]
        for method in entity.methods.values():
            key = (method.name, method.arity)
            bindings[method.side][key] = method_ref(method)
            conflicted.discard((method.side, key))
        conflicts = tuple(
            Diagnostic(
                Severity.WARNING,
                DiagCode.TRAIT_CONFLICT,
                f"traits used by '{name}' conflict on '{sel}/{arity}' "
                f"({side.value} side); the selector is unbound",
                entity.loc,
            )
            for side, (sel, arity) in sorted(
                conflicted, key=lambda c: (c[0].value, c[1][0], c[1][1])
            )
        )
        ref = ClassRef(name) if isinstance(entity, ClassDef) else TraitRef(name)
        table = EffectiveMethodTable(ref, bindings, conflicts)
        self._tables[name] = table
        return table

    def _trait_closure(self, entity: EntityDef) -> frozenset[str]:
        out: set[str] = set()
        work = list(entity.uses)
        while work:
            name = work.pop()
            trait = self.codebase.traits.get(name)
            if trait is None or trait.name in out:
                continue
            out.add(trait.name)
            work.extend(trait.uses)
        return frozenset(out)

    def _users_of_trait(self, trait_name: str) -> tuple[str, ...]:
        if self._trait_users is None:
            users: dict[str, list[str]] = {}
            for cls in sorted(self.codebase.classes):
                for trait in self._trait_closure(self.codebase.classes[cls]):
                    users.setdefault(trait, []).append(cls)
            self._trait_users = {t: tuple(cs) for t, cs in users.items()}
        return self._trait_users.get(trait_name, ())

    # --- edge collection ---

    def _mine_uses(self, src: ClassRef | TraitRef, uses: tuple[str, ...], deps: list[Dependency]) -> None:
        for used in uses:
            if used in self.codebase.traits:
                deps.append(Dependency(src, DependencyKind.TRAIT_USAGE, TraitRef(used)))

    def _report_conflicts(self, name: str) -> None:
        if name in self._conflicts_reported:
            return
        self._conflicts_reported.add(name)
        self.diagnostics.extend(self._table(name).conflicts)

    def _mine_method(self, method: MethodDef, deps: list[Dependency]) -> None:
        src = method_ref(method)
        for stmt in method.body:
            if isinstance(stmt, Assignment):
                self._resolve_var(method, src, stmt.target, stmt.loc, deps)
                self._mine_expr(method, src, stmt.value, deps)
            else:
                self._mine_expr(method, src, stmt.expr, deps)

    def _mine_expr(self, method: MethodDef, src: MethodRef, expr: Expr, deps: list[Dependency]) -> None:
        if isinstance(expr, NameRef):
            self._resolve_var(method, src, expr.name, expr.loc, deps)
        elif isinstance(expr, Paren):
            self._mine_expr(method, src, expr.inner, deps)
        elif isinstance(expr, Send):
            self._mine_send(method, src, expr, deps)
        # self, super, and literals carry no dependencies of their own

    def _mine_send(self, method: MethodDef, src: MethodRef, send: Send, deps: list[Dependency]) -> None:
        receiver = _unwrap(send.receiver)
        arity = len(send.args)
        if isinstance(receiver, SelfRef):
            targets = self._self_send_targets(method, send.selector, arity)
            reason = "no implementor reachable from a self-send"
        elif isinstance(receiver, SuperRef):
            targets = self._super_send_targets(method, send.selector, arity)
            reason = "no implementor reachable from a super-send"
        else:
            self._mine_expr(method, src, send.receiver, deps)
            targets = self.implementors(send.selector, arity)
            reason = "no implementor in the codebase"
        if targets:
            for target in targets:
                deps.append(Dependency(src, DependencyKind.MESSAGE_SEND, target))
        else:
            self._warn(
                DiagCode.UNRESOLVED_SEND,
                f"send '{send.selector}/{arity}' from {src.render()} does not "
                f"resolve: {reason}",
                send.loc,
            )
        for arg in send.args:
            self._mine_expr(method, src, arg, deps)

    def _self_send_targets(self, method: MethodDef, selector: str, arity: int) -> set[MethodRef]:
        if method.owner_kind is OwnerKind.CLASS:
            return self._refined_targets(method.owner, method.side, selector, arity)
        # Trait method: refine per class that composes this trait; the
        # union over users is the target set.
        targets: set[MethodRef] = set()
        for user in self._users_of_trait(method.owner):
            targets |= self._refined_targets(user, method.side, selector, arity)
        return targets

    def _refined_targets(self, class_name: str, side: Side, selector: str, arity: int) -> set[MethodRef]:
        targets: set[MethodRef] = set()
        nearest = self.lookup(class_name, side, selector, arity)
        if nearest is not None:
            targets.add(nearest)
        for descendant in self._descendant_names(class_name):
            override = self._table(descendant).provider(side, selector, arity)
            if override is not None:
                targets.add(override)
        return targets

    def _super_send_targets(self, method: MethodDef, selector: str, arity: int) -> set[MethodRef]:
        if method.owner_kind is OwnerKind.TRAIT:
            return set()  # traits have no superclass to start the walk from
        owner = self.codebase.classes[method.owner]
        sup = self.codebase.superclass(owner)
        if sup is None:
            return set()
        found = self.lookup(sup.name, method.side, selector, arity)
        return {found} if found is not None else set()

    def _resolve_var(self, method: MethodDef, src: MethodRef, name: str, loc: Loc, deps: list[Dependency]) -> None:
        if name in method.params:
            return
        if method.owner_kind is OwnerKind.CLASS:
            chain = self._ancestor_chain(method.owner)
            if method.side is Side.INSTANCE:
                for cls in chain:
                    if name in cls.ivars:
                        deps.append(
                            Dependency(
                                src,
                                DependencyKind.VARIABLE_ACCESS,
                                VarRef(cls.name, name, VarKind.IVAR),
                            )
                        )
                        return
            for cls in chain:
                if name in cls.cvars:
                    deps.append(
                        Dependency(
                            src,
                            DependencyKind.VARIABLE_ACCESS,
                            VarRef(cls.name, name, VarKind.CVAR),
                        )
                    )
                    return
            if method.side is Side.CLASS and any(name in cls.ivars for cls in chain):
                self._warn(
                    DiagCode.IVAR_FROM_CLASS_METHOD,
                    f"class-side method {src.render()} cannot access instance "
                    f"variable '{name}'",
                    loc,
                )
                return
        if self.codebase.entity(name) is not None:
            return  # a class or trait reference; not a dependency kind
        self._warn(
            DiagCode.UNRESOLVED_NAME,
            f"name '{name}' in {src.render()} does not resolve to a parameter "
            f"or variable",
            loc,
        )

    def _warn(self, code: DiagCode, message: str, loc: Loc) -> None:
        self.diagnostics.append(Diagnostic(Severity.WARNING, code, message, loc))


def _unwrap(expr: Expr) -> Expr:
    while isinstance(expr, Paren):
        expr = expr.inner
    return expr


# --- module-level conveniences ----------------------------------------------


def mine(codebase: Codebase) -> DependencySet:
    """Dependency set of a validated, error-free codebase."""
    return DependencyMiner(codebase).mine()


def effective_table(codebase: Codebase, name: str) -> EffectiveMethodTable:
    return DependencyMiner(codebase).effective_table(name)


def lookup(codebase: Codebase, start_class: str, side: Side, name: str, arity: int) -> MethodRef | None:
    return DependencyMiner(codebase).lookup(start_class, side, name, arity)


def implementors(codebase: Codebase, name: str, arity: int) -> frozenset[MethodRef]:
    # A plain enumeration: usable even on codebases with error diagnostics.
    return frozenset(
        method_ref(m)
        for entity in codebase.entities()
        for m in entity.methods.values()
        if m.name == name and m.arity == arity
    )


def descendants(codebase: Codebase, class_name: str) -> frozenset[ClassRef]:
    return DependencyMiner(codebase).descendants(class_name)
