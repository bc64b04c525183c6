"""Codebase construction, validation, union building, canonical form."""

from __future__ import annotations

import pytest

from dif import canonical_serialize, merge_sources, model_equal, parse, validate
from dif.minitalk import DiagCode, Severity

from conftest import FILTERED_LOG_PACKAGE, FIXTURE_A, FIXTURE_B


def codes(diags):
    return [d.code for d in diags]


# --- duplicate detection ---


def test_duplicate_class_is_an_error():
    cb = parse("class A { } class A { }")
    assert codes(cb.diagnostics) == [DiagCode.DUPLICATE_CLASS]
    assert cb.has_errors


def test_class_and_trait_share_a_namespace():
    cb = parse("class A { } trait A { }")
    assert codes(cb.diagnostics) == [DiagCode.DUPLICATE_TRAIT]
    assert "A" in cb.classes and "A" not in cb.traits


def test_duplicate_method_and_variable_and_parameter():
    cb = parse("class A { vars x; classvars x; method m(p, p) { p; } method m(q) { q; } }")
    assert DiagCode.DUPLICATE_VARIABLE in codes(cb.diagnostics)
    assert DiagCode.DUPLICATE_PARAMETER in codes(cb.diagnostics)
    assert DiagCode.DUPLICATE_METHOD in codes(cb.diagnostics)


def test_same_selector_on_both_sides_is_fine():
    cb = parse("class A { method m() { 1; } classmethod m() { 2; } }")
    assert not cb.diagnostics
    assert len(cb.classes["A"].methods) == 2


def test_same_name_different_arity_is_fine():
    cb = parse("class A { method m() { 1; } method m(x) { x; } }")
    assert not cb.diagnostics


# --- hierarchy validation ---


def test_two_class_inheritance_cycle():
    cb = parse("class A extends B { } class B extends A { }")
    assert codes(validate(cb)) == [DiagCode.INHERITANCE_CYCLE]
    assert cb.has_errors


def test_self_inheritance_cycle():
    cb = parse("class A extends A { }")
    assert DiagCode.INHERITANCE_CYCLE in codes(cb.diagnostics)


def test_unresolved_superclass_is_a_warning():
    cb = parse("class A extends Missing { }")
    diags = validate(cb)
    assert codes(diags) == [DiagCode.UNRESOLVED_SUPERCLASS]
    assert diags[0].severity is Severity.WARNING
    assert not cb.has_errors


def test_superclass_naming_a_trait_is_unresolved():
    cb = parse("trait T { } class A extends T { }")
    assert codes(cb.diagnostics) == [DiagCode.UNRESOLVED_SUPERCLASS]


def test_trait_cycle_is_an_error():
    cb = parse("trait T1 { uses T2; } trait T2 { uses T1; }")
    assert DiagCode.TRAIT_CYCLE in codes(cb.diagnostics)
    assert cb.has_errors


def test_unresolved_trait_is_a_warning():
    cb = parse("class A { uses Missing; }")
    assert codes(cb.diagnostics) == [DiagCode.UNRESOLVED_TRAIT]
    assert not cb.has_errors


def test_fixture_a_validates_cleanly():
    assert validate(parse(FIXTURE_A, "A.mt")) == []


# --- merge_sources ---


def test_merge_disjoint_sources():
    cb = merge_sources([("class A { }", "a.mt"), ("class B extends A { }", "b.mt")])
    assert sorted(cb.classes) == ["A", "B"]
    assert not cb.diagnostics


def test_merge_collision_is_an_error():
    cb = merge_sources([("class Log { }", "a.mt"), ("class Log { }", "b.mt")])
    assert codes(cb.diagnostics) == [DiagCode.DUPLICATE_CLASS]
    assert cb.diagnostics[0].loc.file == "b.mt"


def test_merge_equals_concatenated_parse():
    merged = merge_sources([(FIXTURE_B, "B.mt"), (FILTERED_LOG_PACKAGE, "pkg.mt")])
    concatenated = parse(FIXTURE_B + FILTERED_LOG_PACKAGE, "both.mt")
    assert model_equal(merged, concatenated)


def test_merge_of_single_file_equals_parse():
    assert model_equal(merge_sources([(FIXTURE_A, "A.mt")]), parse(FIXTURE_A))


# --- canonical serialization ---


def test_serialize_is_deterministic():
    text = FIXTURE_A + FILTERED_LOG_PACKAGE
    assert canonical_serialize(parse(text)) == canonical_serialize(parse(text))


def test_serialize_ignores_formatting_and_member_order():
    reordered = """\
    class Log   extends Object {
      method logAll(ms) { self . log( ms ) ; }   # comment
      method log(m) { messages=m; }
      vars messages;
    }
    class Object { }
    """
    assert canonical_serialize(parse(FIXTURE_A)) == canonical_serialize(parse(reordered))


def test_serialize_distinguishes_body_tokens():
    a = canonical_serialize(parse(FIXTURE_A))
    b = canonical_serialize(parse(FIXTURE_B))
    assert a != b


def test_serialize_shape():
    import json

    doc = json.loads(canonical_serialize(parse(FIXTURE_A)))
    assert sorted(doc) == ["classes", "traits"]
    log = [c for c in doc["classes"] if c["name"] == "Log"][0]
    assert sorted(log) == ["cvars", "ivars", "methods", "name", "super", "uses"]
    assert log["super"] == "Object"
    log_method = [m for m in log["methods"] if m["name"] == "log"][0]
    assert log_method["bodyTokens"] == ["messages", "=", "m", ";"]
    assert log_method["side"] == "instance"


def test_number_literals_are_canonicalized():
    a = parse("class A { method m() { x = 007; } }")
    b = parse("class A { method m() { x = 7; } }")
    assert model_equal(a, b)


def test_parse_is_deterministic_and_pure():
    one = parse(FIXTURE_A, "one.mt")
    two = parse(FIXTURE_A, "two.mt")
    assert model_equal(one, two)
