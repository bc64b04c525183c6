"""Entity-level deltas between codebases, and their replay.

diff() matches classes and traits by name and methods by
(owner, kind, side, name, arity), emitting whole-entity and whole-method
edit operations; bodies that differ only in whitespace or comments
produce no op. apply() replays a delta onto any codebase all-or-nothing:
either every op applies and the result revalidates cleanly, or the call
raises with the full conflict list and the input is untouched.

A delta is canonically ordered - removals (methods before their
entities), then header changes, then additions (entities before their
methods), each group sorted by target - and no two ops may address the
same target. Method bodies travel as canonical source text, so a
serialized delta is byte-stable regardless of how the head snapshot was
formatted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Union

from dif.errors import ApplyConflictError, InvalidDeltaError, InvertUndefinedError
from dif.minitalk.model import (
    ClassDef,
    Codebase,
    MethodDef,
    TraitDef,
    hierarchy_diagnostics,
)
from dif.minitalk.nodes import DiagCode, Diagnostic, Loc, OwnerKind, Severity, Side
from dif.minitalk.parser import parse_statements
from dif.minitalk.serialize import body_tokens, render_body
from dif.mining import ClassRef, MethodRef, TraitRef

_DELTA_FILE = "<delta>"


# --- operations -------------------------------------------------------------


@dataclass(frozen=True)
class AddClass:
    name: str
    super_name: str | None
    uses: tuple[str, ...]
    ivars: tuple[str, ...]
    cvars: tuple[str, ...]


@dataclass(frozen=True)
class RemoveClass:
    name: str


@dataclass(frozen=True)
class ChangeClassHeader:
    name: str
    super_name: str | None
    uses: tuple[str, ...]
    ivars: tuple[str, ...]
    cvars: tuple[str, ...]


@dataclass(frozen=True)
class AddTrait:
    name: str
    uses: tuple[str, ...]


@dataclass(frozen=True)
class RemoveTrait:
    name: str


@dataclass(frozen=True)
class ChangeTraitHeader:
    name: str
    uses: tuple[str, ...]


@dataclass(frozen=True)
class AddMethod:
    owner: str
    owner_kind: OwnerKind
    side: Side
    name: str
    arity: int
    params: tuple[str, ...]
    body: str


@dataclass(frozen=True)
class RemoveMethod:
    owner: str
    owner_kind: OwnerKind
    side: Side
    name: str
    arity: int


@dataclass(frozen=True)
class ModifyMethod:
    owner: str
    owner_kind: OwnerKind
    side: Side
    name: str
    arity: int
    params: tuple[str, ...]
    body: str


EntityOp = Union[
    AddClass,
    RemoveClass,
    ChangeClassHeader,
    AddTrait,
    RemoveTrait,
    ChangeTraitHeader,
    AddMethod,
    RemoveMethod,
    ModifyMethod,
]

_METHOD_OPS = (AddMethod, RemoveMethod, ModifyMethod)


class ConflictReason(str, Enum):
    TARGET_MISSING = "TargetMissing"
    TARGET_ALREADY_EXISTS = "TargetAlreadyExists"
    BODY_MISMATCH = "BodyMismatch"
    VALIDATION_FAILED = "ValidationFailed"


@dataclass(frozen=True)
class ApplyConflict:
    op: EntityOp | None
    reason: ConflictReason
    detail: str

    def render(self) -> str:
        return f"{self.reason.value}: {self.detail}"


def _op_target_ref(op: EntityOp) -> ClassRef | TraitRef | MethodRef:
    if isinstance(op, _METHOD_OPS):
        return MethodRef(op.owner, op.owner_kind, op.side, op.name, op.arity)
    if isinstance(op, (AddClass, RemoveClass, ChangeClassHeader)):
        return ClassRef(op.name)
    return TraitRef(op.name)


def _op_sort_key(op: EntityOp):
    if isinstance(op, (RemoveClass, RemoveTrait, RemoveMethod)):
        group, sub = 0, (0 if isinstance(op, RemoveMethod) else 1)
    elif isinstance(op, (ChangeClassHeader, ChangeTraitHeader)):
        group, sub = 1, 0
    else:
        group, sub = 2, (1 if isinstance(op, AddMethod) else 0)
    return (group, sub, _op_target_ref(op).sort_key)


@dataclass(frozen=True)
class Delta:
    """Canonically ordered list of entity-level edit operations."""

    ops: tuple[EntityOp, ...]

    @classmethod
    def of(cls, ops) -> "Delta":
        ops = tuple(ops)
        _check_ops(ops)
        return cls(tuple(sorted(ops, key=_op_sort_key)))

    @property
    def is_empty(self) -> bool:
        return not self.ops

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)


def _check_ops(ops: tuple[EntityOp, ...]) -> None:
    seen: set[tuple] = set()
    for op in ops:
        ref = _op_target_ref(op)
        key = ref.sort_key
        if key in seen:
            raise InvalidDeltaError(f"two ops target {ref.render()}")
        seen.add(key)
        if isinstance(op, (AddMethod, ModifyMethod)):
            if len(op.params) != op.arity:
                raise InvalidDeltaError(
                    f"{ref.render()}: arity {op.arity} does not match "
                    f"{len(op.params)} parameter(s)"
                )
            if len(set(op.params)) != len(op.params):
                raise InvalidDeltaError(f"{ref.render()}: duplicate parameters")
        if isinstance(op, (AddClass, ChangeClassHeader)):
            declared = op.ivars + op.cvars
            if len(set(declared)) != len(declared):
                raise InvalidDeltaError(f"{ref.render()}: duplicate variables in header")


# --- diff -------------------------------------------------------------------


def diff(base: Codebase, head: Codebase) -> Delta:
    """Delta turning `base` into `head` (matching by name and method key)."""
    ops: list[EntityOp] = []

    for name, cls in base.classes.items():
        other = head.classes.get(name)
        if other is None:
            ops.append(RemoveClass(name))
        else:
            _diff_headers(cls, other, ops)
            _diff_methods(cls.methods, other.methods, ops)
    for name, cls in head.classes.items():
        if name not in base.classes:
            ops.append(AddClass(name, cls.super_name, cls.uses, cls.ivars, cls.cvars))
            ops.extend(_add_method_op(m) for m in cls.methods.values())

    for name, trait in base.traits.items():
        other = head.traits.get(name)
        if other is None:
            ops.append(RemoveTrait(name))
        else:
            if trait.uses != other.uses:
                ops.append(ChangeTraitHeader(name, other.uses))
            _diff_methods(trait.methods, other.methods, ops)
    for name, trait in head.traits.items():
        if name not in base.traits:
            ops.append(AddTrait(name, trait.uses))
            ops.extend(_add_method_op(m) for m in trait.methods.values())

    return Delta.of(ops)


def _diff_headers(base: ClassDef, head: ClassDef, ops: list[EntityOp]) -> None:
    if (
        base.super_name != head.super_name
        or base.uses != head.uses
        or base.ivars != head.ivars
        or base.cvars != head.cvars
    ):
        ops.append(
            ChangeClassHeader(head.name, head.super_name, head.uses, head.ivars, head.cvars)
        )


def _diff_methods(base: dict, head: dict, ops: list[EntityOp]) -> None:
    for key, method in base.items():
        other = head.get(key)
        if other is None:
            ops.append(
                RemoveMethod(method.owner, method.owner_kind, method.side, method.name, method.arity)
            )
        elif method.params != other.params or body_tokens(method.body) != body_tokens(other.body):
            ops.append(
                ModifyMethod(
                    other.owner,
                    other.owner_kind,
                    other.side,
                    other.name,
                    other.arity,
                    other.params,
                    render_body(other.body),
                )
            )
    for key, method in head.items():
        if key not in base:
            ops.append(_add_method_op(method))


def _add_method_op(method: MethodDef) -> AddMethod:
    return AddMethod(
        method.owner,
        method.owner_kind,
        method.side,
        method.name,
        method.arity,
        method.params,
        render_body(method.body),
    )


# --- apply ------------------------------------------------------------------


def apply_delta(delta: Delta, codebase: Codebase) -> Codebase:
    """Replay `delta` onto `codebase`, returning a new validated codebase.

    All-or-nothing: any conflict raises ApplyConflictError carrying every
    conflict found, and the input codebase is never modified. Errors
    surfaced by revalidating the result (for example an inheritance cycle
    introduced by a header change) are reported the same way.
    """
    classes = dict(codebase.classes)
    traits = dict(codebase.traits)
    conflicts: list[ApplyConflict] = []
    warnings: list[Diagnostic] = []

    for op in delta.ops:
        if isinstance(op, AddClass):
            if op.name in classes or op.name in traits:
                conflicts.append(
                    ApplyConflict(op, ConflictReason.TARGET_ALREADY_EXISTS, f"'{op.name}' is already declared")
                )
                continue
            classes[op.name] = ClassDef(
                op.name, op.super_name, op.uses, op.ivars, op.cvars, {}, _synthetic_loc()
            )
        elif isinstance(op, AddTrait):
            if op.name in classes or op.name in traits:
                conflicts.append(
                    ApplyConflict(op, ConflictReason.TARGET_ALREADY_EXISTS, f"'{op.name}' is already declared")
                )
                continue
            traits[op.name] = TraitDef(op.name, op.uses, {}, _synthetic_loc())
        elif isinstance(op, RemoveClass):
            if classes.pop(op.name, None) is None:
                conflicts.append(
                    ApplyConflict(op, ConflictReason.TARGET_MISSING, f"no class named '{op.name}'")
                )
        elif isinstance(op, RemoveTrait):
            if traits.pop(op.name, None) is None:
                conflicts.append(
                    ApplyConflict(op, ConflictReason.TARGET_MISSING, f"no trait named '{op.name}'")
                )
        elif isinstance(op, ChangeClassHeader):
            cls = classes.get(op.name)
            if cls is None:
                conflicts.append(
                    ApplyConflict(op, ConflictReason.TARGET_MISSING, f"no class named '{op.name}'")
                )
                continue
            classes[op.name] = ClassDef(
                cls.name, op.super_name, op.uses, op.ivars, op.cvars, cls.methods, cls.loc
            )
        elif isinstance(op, ChangeTraitHeader):
            trait = traits.get(op.name)
            if trait is None:
                conflicts.append(
                    ApplyConflict(op, ConflictReason.TARGET_MISSING, f"no trait named '{op.name}'")
                )
                continue
            traits[op.name] = TraitDef(trait.name, op.uses, trait.methods, trait.loc)
        else:
            _apply_method_op(op, classes, traits, conflicts, warnings)

    if conflicts:
        raise ApplyConflictError(conflicts)

    result = Codebase(
        classes, traits, tuple(warnings) + tuple(hierarchy_diagnostics(classes, traits))
    )
    if result.has_errors:
        raise ApplyConflictError(
            [
                ApplyConflict(None, ConflictReason.VALIDATION_FAILED, d.render())
                for d in result.errors
            ]
        )
    return result


def _apply_method_op(op, classes, traits, conflicts, warnings) -> None:
    owner = classes.get(op.owner) if op.owner_kind is OwnerKind.CLASS else traits.get(op.owner)
    ref = _op_target_ref(op)
    if owner is None:
        conflicts.append(
            ApplyConflict(
                op, ConflictReason.TARGET_MISSING, f"no {op.owner_kind.value} named '{op.owner}'"
            )
        )
        return
    key = (op.side, op.name, op.arity)
    existing = owner.methods.get(key)

    if isinstance(op, AddMethod):
        new_method = _method_from_op(op)
        if existing is not None:
            if existing.params == op.params and body_tokens(existing.body) == body_tokens(new_method.body):
                warnings.append(
                    Diagnostic(
                        Severity.WARNING,
                        DiagCode.REDUNDANT_ADD_METHOD,
                        f"{ref.render()} already exists with an identical body",
                        existing.loc,
                    )
                )
                return
            conflicts.append(
                ApplyConflict(
                    op,
                    ConflictReason.BODY_MISMATCH,
                    f"{ref.render()} already exists with a different body",
                )
            )
            return
        _put_method(op, owner, key, new_method, classes, traits)
    elif isinstance(op, RemoveMethod):
        if existing is None:
            conflicts.append(
                ApplyConflict(op, ConflictReason.TARGET_MISSING, f"{ref.render()} does not exist")
            )
            return
        methods = dict(owner.methods)
        del methods[key]
        _replace_methods(owner, methods, classes, traits)
    else:  # ModifyMethod
        if existing is None:
            conflicts.append(
                ApplyConflict(op, ConflictReason.TARGET_MISSING, f"{ref.render()} does not exist")
            )
            return
        _put_method(op, owner, key, _method_from_op(op), classes, traits)


def _put_method(op, owner, key, method: MethodDef, classes, traits) -> None:
    methods = dict(owner.methods)
    methods[key] = method
    _replace_methods(owner, methods, classes, traits)


def _replace_methods(owner, methods, classes, traits) -> None:
    if isinstance(owner, ClassDef):
        classes[owner.name] = ClassDef(
            owner.name, owner.super_name, owner.uses, owner.ivars, owner.cvars, methods, owner.loc
        )
    else:
        traits[owner.name] = TraitDef(owner.name, owner.uses, methods, owner.loc)


def _method_from_op(op: AddMethod | ModifyMethod) -> MethodDef:
    body = parse_statements(op.body, _DELTA_FILE)
    keyword = "method" if op.side is Side.INSTANCE else "classmethod"
    source = f"{keyword} {op.name}({', '.join(op.params)}) {{ {op.body} }}"
    return MethodDef(
        owner=op.owner,
        owner_kind=op.owner_kind,
        side=op.side,
        name=op.name,
        arity=op.arity,
        params=op.params,
        body=body,
        source_text=source,
        loc=_synthetic_loc(),
    )


def _synthetic_loc() -> Loc:
    return Loc(_DELTA_FILE, 1, 1)


# --- invert -----------------------------------------------------------------


def invert(delta: Delta, base: Codebase) -> Delta:
    """Delta undoing `delta`, defined only for deltas diff() could have
    produced against `base` (modify/change ops do not carry prior state,
    so the base supplies it)."""
    try:
        head = apply_delta(delta, base)
    except ApplyConflictError as exc:
        raise InvertUndefinedError(
            f"delta does not apply to the given base: {exc.conflicts[0].render()}"
        ) from exc
    if diff(base, head) != delta:
        raise InvertUndefinedError("delta was not produced by diff against the given base")
    return diff(head, base)


# --- JSON wire format -------------------------------------------------------

_OP_TAGS: dict[str, type] = {
    "addClass": AddClass,
    "removeClass": RemoveClass,
    "changeClassHeader": ChangeClassHeader,
    "addTrait": AddTrait,
    "removeTrait": RemoveTrait,
    "changeTraitHeader": ChangeTraitHeader,
    "addMethod": AddMethod,
    "removeMethod": RemoveMethod,
    "modifyMethod": ModifyMethod,
}
_TAG_BY_TYPE = {cls: tag for tag, cls in _OP_TAGS.items()}


def to_json(delta: Delta) -> str:
    return json.dumps({"ops": [_op_doc(op) for op in delta.ops]}, indent=2, sort_keys=True)


def _op_doc(op: EntityOp) -> dict:
    doc: dict = {"op": _TAG_BY_TYPE[type(op)]}
    if isinstance(op, (AddClass, ChangeClassHeader)):
        doc.update(
            name=op.name,
            super=op.super_name,
            uses=list(op.uses),
            ivars=list(op.ivars),
            cvars=list(op.cvars),
        )
    elif isinstance(op, (AddTrait, ChangeTraitHeader)):
        doc.update(name=op.name, uses=list(op.uses))
    elif isinstance(op, (RemoveClass, RemoveTrait)):
        doc.update(name=op.name)
    else:
        doc.update(
            owner=op.owner,
            ownerKind=op.owner_kind.value,
            side=op.side.value,
            name=op.name,
            arity=op.arity,
        )
        if isinstance(op, (AddMethod, ModifyMethod)):
            doc.update(params=list(op.params), body=op.body)
    return doc


def from_json(text: str) -> Delta:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidDeltaError(f"delta is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("ops"), list):
        raise InvalidDeltaError('delta JSON must be an object with an "ops" array')
    return Delta.of(_op_from_doc(item, i) for i, item in enumerate(doc["ops"]))


def _op_from_doc(doc, index: int) -> EntityOp:
    if not isinstance(doc, dict):
        raise InvalidDeltaError(f"ops[{index}] is not an object")
    tag = doc.get("op")
    cls = _OP_TAGS.get(tag)
    if cls is None:
        raise InvalidDeltaError(f"ops[{index}]: unknown op {tag!r}")
    try:
        if cls in (AddClass, ChangeClassHeader):
            return cls(
                _str(doc, "name"),
                _opt_str(doc, "super"),
                _str_tuple(doc, "uses"),
                _str_tuple(doc, "ivars"),
                _str_tuple(doc, "cvars"),
            )
        if cls in (AddTrait, ChangeTraitHeader):
            return cls(_str(doc, "name"), _str_tuple(doc, "uses"))
        if cls in (RemoveClass, RemoveTrait):
            return cls(_str(doc, "name"))
        common = (
            _str(doc, "owner"),
            OwnerKind(_str(doc, "ownerKind")),
            Side(_str(doc, "side")),
            _str(doc, "name"),
            _int(doc, "arity"),
        )
        if cls is RemoveMethod:
            return RemoveMethod(*common)
        return cls(*common, _str_tuple(doc, "params"), _str(doc, "body"))
    except (KeyError, ValueError, TypeError) as exc:
        raise InvalidDeltaError(f"ops[{index}]: {exc}") from exc


def _str(doc: dict, key: str) -> str:
    value = doc[key]
    if not isinstance(value, str):
        raise InvalidDeltaError(f"field {key!r} must be a string")
    return value


def _opt_str(doc: dict, key: str) -> str | None:
    value = doc.get(key)
    if value is not None and not isinstance(value, str):
        raise InvalidDeltaError(f"field {key!r} must be a string or null")
    return value


def _int(doc: dict, key: str) -> int:
    value = doc[key]
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise InvalidDeltaError(f"field {key!r} must be a non-negative integer")
    return value


def _str_tuple(doc: dict, key: str) -> tuple[str, ...]:
    value = doc[key]
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise InvalidDeltaError(f"field {key!r} must be an array of strings")
    return tuple(value)
