"""Dependency mining: effective tables, lookup, refs, and edge rules.

Expected edge sets for the fixtures are hand enumerations, written out
in full so a regression in any rule shows up as a concrete edge diff.
"""

from __future__ import annotations

import pytest

from dif import (
    Dependency,
    DependencyKind,
    DependencyMiner,
    InvalidCodebaseError,
    MethodRef,
    Side,
    UnknownEntityError,
    VarKind,
    VarRef,
    descendants,
    effective_table,
    implementors,
    lookup,
    mine,
    parse,
)
from dif.minitalk import DiagCode, OwnerKind
from dif.mining import ClassRef, TraitRef

from conftest import FIXTURE_A


def imethod(owner, name, arity, kind=OwnerKind.CLASS):
    return MethodRef(owner, kind, Side.INSTANCE, name, arity)


def cmethod(owner, name, arity, kind=OwnerKind.CLASS):
    return MethodRef(owner, kind, Side.CLASS, name, arity)


def dep(source, kind, target):
    return Dependency(source, kind, target)


# --- the fixture, end to end ---


def test_mine_fixture_a_exact_set(origin_a):
    assert mine(origin_a).as_set() == {
        dep(ClassRef("Log"), DependencyKind.INHERITANCE, ClassRef("Object")),
        dep(imethod("Log", "log", 1), DependencyKind.VARIABLE_ACCESS,
            VarRef("Log", "messages", VarKind.IVAR)),
        dep(imethod("Log", "logAll", 1), DependencyKind.MESSAGE_SEND,
            imethod("Log", "log", 1)),
    }


def test_mine_fixture_a_with_package_exact_set(origin_head):
    assert mine(origin_head).as_set() == {
        dep(ClassRef("Log"), DependencyKind.INHERITANCE, ClassRef("Object")),
        dep(ClassRef("FilteredLog"), DependencyKind.INHERITANCE, ClassRef("Log")),
        dep(imethod("Log", "log", 1), DependencyKind.VARIABLE_ACCESS,
            VarRef("Log", "messages", VarKind.IVAR)),
        # the self-send in logAll now also reaches the override below Log
        dep(imethod("Log", "logAll", 1), DependencyKind.MESSAGE_SEND,
            imethod("Log", "log", 1)),
        dep(imethod("Log", "logAll", 1), DependencyKind.MESSAGE_SEND,
            imethod("FilteredLog", "log", 1)),
        dep(imethod("FilteredLog", "log", 1), DependencyKind.MESSAGE_SEND,
            imethod("FilteredLog", "accepts", 1)),
        # super-send binds to the nearest implementor above FilteredLog
        dep(imethod("FilteredLog", "log", 1), DependencyKind.MESSAGE_SEND,
            imethod("Log", "log", 1)),
        dep(imethod("FilteredLog", "accepts", 1), DependencyKind.VARIABLE_ACCESS,
            VarRef("FilteredLog", "filterBlock", VarKind.IVAR)),
    }


def test_mine_empty_codebase():
    assert len(mine(parse(""))) == 0


def test_mine_refuses_codebases_with_errors():
    broken = parse("class A extends B { } class B extends A { }")
    with pytest.raises(InvalidCodebaseError):
        mine(broken)


# --- lookup / implementors / descendants ---


def test_lookup_walks_ancestors(origin_head):
    assert lookup(origin_head, "FilteredLog", Side.INSTANCE, "logAll", 1) == imethod(
        "Log", "logAll", 1
    )


def test_lookup_prefers_local_definition(origin_head):
    assert lookup(origin_head, "FilteredLog", Side.INSTANCE, "log", 1) == imethod(
        "FilteredLog", "log", 1
    )


def test_lookup_absent_selector(origin_head):
    assert lookup(origin_head, "FilteredLog", Side.INSTANCE, "nothing", 0) is None


def test_lookup_unknown_class(origin_a):
    with pytest.raises(UnknownEntityError):
        lookup(origin_a, "FilteredLog", Side.INSTANCE, "log", 1)


def test_implementors_matches_name_and_arity(origin_head):
    assert implementors(origin_head, "log", 1) == {
        imethod("Log", "log", 1),
        imethod("FilteredLog", "log", 1),
    }
    assert implementors(origin_head, "log", 2) == frozenset()
    assert implementors(origin_head, "nothing", 0) == frozenset()


def test_implementors_covers_both_sides():
    cb = parse("class A { method m() { 1; } } class B { classmethod m() { 2; } }")
    assert implementors(cb, "m", 0) == {imethod("A", "m", 0), cmethod("B", "m", 0)}


def test_implementors_includes_trait_methods():
    cb = parse("trait T { method m() { 1; } } class C { uses T; }")
    assert implementors(cb, "m", 0) == {imethod("T", "m", 0, OwnerKind.TRAIT)}


def test_descendants(origin_head):
    assert descendants(origin_head, "Object") == {ClassRef("Log"), ClassRef("FilteredLog")}
    assert descendants(origin_head, "Log") == {ClassRef("FilteredLog")}
    assert descendants(origin_head, "FilteredLog") == frozenset()


def test_descendants_unknown_class(origin_a):
    with pytest.raises(UnknownEntityError):
        descendants(origin_a, "FilteredLog")


# --- effective tables and traits ---


def test_effective_table_without_traits(origin_a):
    table = effective_table(origin_a, "Log")
    assert table.provider(Side.INSTANCE, "log", 1) == imethod("Log", "log", 1)
    assert table.provider(Side.INSTANCE, "logAll", 1) == imethod("Log", "logAll", 1)
    assert table.provider(Side.INSTANCE, "missing", 0) is None
    assert table.conflicts == ()


def test_local_method_overrides_trait():
    cb = parse("trait T { method m() { 1; } } class C { uses T; method m() { 2; } }")
    table = effective_table(cb, "C")
    assert table.provider(Side.INSTANCE, "m", 0) == imethod("C", "m", 0)
    assert table.conflicts == ()


def test_trait_methods_gather_transitively():
    cb = parse(
        "trait T0 { method base() { 1; } } trait T1 { uses T0; } class C { uses T1; }"
    )
    table = effective_table(cb, "C")
    assert table.provider(Side.INSTANCE, "base", 0) == imethod("T0", "base", 0, OwnerKind.TRAIT)


def test_trait_conflict_leaves_selector_unbound():
    cb = parse(
        "trait T1 { method m() { 1; } } trait T2 { method m() { 2; } } "
        "class C { uses T1, T2; }"
    )
    table = effective_table(cb, "C")
    assert table.provider(Side.INSTANCE, "m", 0) is None
    assert [d.code for d in table.conflicts] == [DiagCode.TRAIT_CONFLICT]


def test_trait_conflict_resolved_by_local_override():
    cb = parse(
        "trait T1 { method m() { 1; } } trait T2 { method m() { 2; } } "
        "class C { uses T1, T2; method m() { 3; } }"
    )
    table = effective_table(cb, "C")
    assert table.provider(Side.INSTANCE, "m", 0) == imethod("C", "m", 0)
    assert table.conflicts == ()


def test_diamond_composition_is_not_a_conflict():
    cb = parse(
        "trait T0 { method m() { 1; } } trait T1 { uses T0; } trait T2 { uses T0; } "
        "class C { uses T1, T2; }"
    )
    table = effective_table(cb, "C")
    assert table.provider(Side.INSTANCE, "m", 0) == imethod("T0", "m", 0, OwnerKind.TRAIT)
    assert table.conflicts == ()


def test_class_side_trait_methods_flatten_to_class_side():
    cb = parse("trait T { classmethod make() { 1; } } class C { uses T; }")
    table = effective_table(cb, "C")
    assert table.provider(Side.CLASS, "make", 0) == cmethod("T", "make", 0, OwnerKind.TRAIT)
    assert table.provider(Side.INSTANCE, "make", 0) is None


# --- send refinement rules ---


def test_self_send_reaches_descendant_trait_provider():
    cb = parse(
        "trait T { method m() { 1; } } "
        "class A { method go() { self.m(); } } "
        "class B extends A { uses T; }"
    )
    sends = {d for d in mine(cb) if d.kind is DependencyKind.MESSAGE_SEND}
    assert sends == {
        dep(imethod("A", "go", 0), DependencyKind.MESSAGE_SEND, imethod("T", "m", 0, OwnerKind.TRAIT))
    }


def test_self_send_in_trait_refines_per_using_class():
    cb = parse(
        "trait T { method greet(p) { self.hello(p); } } "
        "class Base { method hello(p) { p; } } "
        "class Person extends Base { uses T; } "
        "class Other { uses T; method hello(p) { p; } }"
    )
    sends = {d for d in mine(cb) if d.kind is DependencyKind.MESSAGE_SEND}
    source = imethod("T", "greet", 1, OwnerKind.TRAIT)
    assert sends == {
        dep(source, DependencyKind.MESSAGE_SEND, imethod("Base", "hello", 1)),
        dep(source, DependencyKind.MESSAGE_SEND, imethod("Other", "hello", 1)),
    }


def test_self_send_in_unused_trait_warns():
    cb = parse("trait T { method m() { self.helper(); } } class C { method helper() { 1; } }")
    miner = DependencyMiner(cb)
    deps = miner.mine()
    assert not any(d.kind is DependencyKind.MESSAGE_SEND for d in deps)
    assert [d.code for d in miner.diagnostics] == [DiagCode.UNRESOLVED_SEND]


def test_super_send_from_root_warns():
    cb = parse("class A { method m() { super.m(); } }")
    miner = DependencyMiner(cb)
    deps = miner.mine()
    assert len(deps) == 0
    assert [d.code for d in miner.diagnostics] == [DiagCode.UNRESOLVED_SEND]


def test_super_send_skips_local_override():
    cb = parse(
        "class A { method m() { 1; } } "
        "class B extends A { method m() { super.m(); } }"
    )
    sends = {d for d in mine(cb) if d.kind is DependencyKind.MESSAGE_SEND}
    assert sends == {dep(imethod("B", "m", 0), DependencyKind.MESSAGE_SEND, imethod("A", "m", 0))}


def test_general_send_targets_all_implementors():
    cb = parse(
        "class A { method m(x) { x.go(); } method go() { 1; } } "
        "class B { classmethod go() { 2; } }"
    )
    sends = {d for d in mine(cb) if d.kind is DependencyKind.MESSAGE_SEND}
    assert sends == {
        dep(imethod("A", "m", 1), DependencyKind.MESSAGE_SEND, imethod("A", "go", 0)),
        dep(imethod("A", "m", 1), DependencyKind.MESSAGE_SEND, cmethod("B", "go", 0)),
    }


def test_parenthesized_self_is_still_a_self_send():
    cb = parse("class A { method m() { (self).go(); } method go() { 1; } }")
    sends = {d for d in mine(cb) if d.kind is DependencyKind.MESSAGE_SEND}
    assert sends == {dep(imethod("A", "m", 0), DependencyKind.MESSAGE_SEND, imethod("A", "go", 0))}


# --- variable access rules ---


def test_ivar_access_attributes_to_defining_class():
    cb = parse(
        "class A { vars x; } class B extends A { method m() { x = 1; } }"
    )
    accesses = {d for d in mine(cb) if d.kind is DependencyKind.VARIABLE_ACCESS}
    assert accesses == {
        dep(imethod("B", "m", 0), DependencyKind.VARIABLE_ACCESS, VarRef("A", "x", VarKind.IVAR))
    }


def test_param_shadows_ivar():
    cb = parse("class A { vars x; method m(x) { x = 1; } }")
    assert not any(d.kind is DependencyKind.VARIABLE_ACCESS for d in mine(cb))


def test_ivar_shadows_cvar():
    cb = parse("class A { classvars x; } class B extends A { vars x; method m() { x; } }")
    accesses = {d for d in mine(cb) if d.kind is DependencyKind.VARIABLE_ACCESS}
    assert accesses == {
        dep(imethod("B", "m", 0), DependencyKind.VARIABLE_ACCESS, VarRef("B", "x", VarKind.IVAR))
    }


def test_class_method_reads_cvar_but_not_ivar():
    cb = parse("class A { vars i; classvars k; classmethod m() { k = i; } }")
    miner = DependencyMiner(cb)
    accesses = {d for d in miner.mine() if d.kind is DependencyKind.VARIABLE_ACCESS}
    assert accesses == {
        dep(cmethod("A", "m", 0), DependencyKind.VARIABLE_ACCESS, VarRef("A", "k", VarKind.CVAR))
    }
    assert [d.code for d in miner.diagnostics] == [DiagCode.IVAR_FROM_CLASS_METHOD]


def test_class_method_sees_cvar_through_ivar_shadow():
    cb = parse("class A { classvars x; } class B extends A { vars x; classmethod m() { x; } }")
    accesses = {d for d in mine(cb) if d.kind is DependencyKind.VARIABLE_ACCESS}
    assert accesses == {
        dep(cmethod("B", "m", 0), DependencyKind.VARIABLE_ACCESS, VarRef("A", "x", VarKind.CVAR))
    }


def test_instance_method_reads_cvar():
    cb = parse("class A { classvars k; method m() { k; } }")
    accesses = {d for d in mine(cb) if d.kind is DependencyKind.VARIABLE_ACCESS}
    assert accesses == {
        dep(imethod("A", "m", 0), DependencyKind.VARIABLE_ACCESS, VarRef("A", "k", VarKind.CVAR))
    }


def test_class_name_reference_is_silent_and_unresolved_name_warns():
    cb = parse("class Registry { } class A { method m() { Registry.m(); ghost; } }")
    miner = DependencyMiner(cb)
    deps = miner.mine()
    assert not any(d.kind is DependencyKind.VARIABLE_ACCESS for d in deps)
    by_code = {d.code for d in miner.diagnostics}
    assert DiagCode.UNRESOLVED_NAME in by_code
    messages = [d.message for d in miner.diagnostics if d.code is DiagCode.UNRESOLVED_NAME]
    assert any("ghost" in m for m in messages)
    assert not any("Registry" in m for m in messages)


def test_trait_method_variable_refs_warn():
    cb = parse("trait T { method m(p) { p; x; } }")
    miner = DependencyMiner(cb)
    miner.mine()
    assert [d.code for d in miner.diagnostics] == [DiagCode.UNRESOLVED_NAME]


# --- structural edges ---


def test_trait_usage_edges():
    cb = parse("trait T0 { } trait T1 { uses T0; } class C { uses T1; }")
    structural = {d for d in mine(cb) if d.kind is DependencyKind.TRAIT_USAGE}
    assert structural == {
        dep(TraitRef("T1"), DependencyKind.TRAIT_USAGE, TraitRef("T0")),
        dep(ClassRef("C"), DependencyKind.TRAIT_USAGE, TraitRef("T1")),
    }


def test_unresolved_super_and_trait_produce_no_edges():
    cb = parse("class A extends Missing { uses Ghost; }")
    assert len(mine(cb)) == 0


# --- rendering and ordering ---


def test_ref_rendering():
    assert imethod("Log", "log", 1).render() == "Log>>log/1"
    assert cmethod("Log", "new", 0).render() == "Log class>>new/0"
    assert imethod("T", "m", 0, OwnerKind.TRAIT).render() == "T>>m/0"
    assert VarRef("Log", "messages", VarKind.IVAR).render() == "Log.messages"
    assert VarRef("Log", "Count", VarKind.CVAR).render() == "Log.Count(class)"
    assert ClassRef("Log").render() == "Log"


def test_dependency_line_rendering(origin_a):
    lines = mine(origin_a).render_lines()
    assert "Log>>logAll/1 -[message-send]-> Log>>log/1" in lines
    assert "Log -[inheritance]-> Object" in lines
    assert "Log>>log/1 -[var-access]-> Log.messages" in lines


def test_dependency_set_is_sorted_and_deduplicated(origin_head):
    deps = mine(origin_head)
    keys = [d.sort_key for d in deps]
    assert keys == sorted(keys)
    assert len(set(deps.entries)) == len(deps.entries)


def test_mining_is_deterministic(origin_head):
    assert mine(origin_head).entries == mine(origin_head).entries


def test_endpoints_resolve_in_codebase(origin_head):
    names = set(origin_head.classes) | set(origin_head.traits)
    for d in mine(origin_head):
        for ref in (d.source, d.target):
            owner = getattr(ref, "owner", None) or ref.name
            assert owner in names


def test_effective_table_unknown_entity(origin_a):
    with pytest.raises(UnknownEntityError):
        effective_table(origin_a, "Nope")
