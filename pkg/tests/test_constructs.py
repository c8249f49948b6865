import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pkgtriage.constructs import ConstructKind, parse_source


def kinds_of(src):
    return [c.kind for c in parse_source(src).constructs]


def count(src, kind):
    return sum(1 for c in parse_source(src).constructs if c.kind is kind)


def specifiers(src):
    return [(c.kind, c.specifier) for c in parse_source(src).constructs if c.specifier]


def test_function_declaration_vs_expression():
    assert kinds_of("function a() {}") == [ConstructKind.FUNCTION_DECL]
    assert kinds_of("const a = function () {};") == [ConstructKind.FUNCTION_EXPR]
    assert kinds_of("(function a() {})();") == [ConstructKind.FUNCTION_EXPR]
    assert kinds_of("async function a() {}") == [ConstructKind.FUNCTION_DECL]
    assert kinds_of("const a = async function () {};") == [ConstructKind.FUNCTION_EXPR]


def test_arrow_functions():
    assert count("const f = x => x;", ConstructKind.ARROW_FUNCTION) == 1
    assert count("const f = (a, b) => a + b;", ConstructKind.ARROW_FUNCTION) == 1
    assert count("xs.map(x => x).filter(y => y);", ConstructKind.ARROW_FUNCTION) == 2


def test_class_methods_and_accessors():
    src = """class A {
      constructor() {}
      run(x) {}
      static of() {}
      *gen() {}
      async go() {}
      get size() {}
      set size(v) {}
      #hidden() {}
      ['dyn']() {}
    }"""
    out = parse_source(src)
    methods = [c for c in out.constructs if c.kind is ConstructKind.METHOD]
    accessors = [c for c in out.constructs if c.kind is ConstructKind.GETTER_SETTER]
    assert len(methods) == 7
    assert len(accessors) == 2
    assert count(src, ConstructKind.CLASS_DECL) == 1


def test_object_literal_methods():
    src = "const o = { run(x) { return x; }, get v() { return 1; }, key: 'val' };"
    assert count(src, ConstructKind.METHOD) == 1
    assert count(src, ConstructKind.GETTER_SETTER) == 1


def test_object_keys_named_like_modifiers():
    # `get: fn` is a plain property, not an accessor.
    src = "const o = { get: f, set: g, static: h, async: i };"
    assert count(src, ConstructKind.GETTER_SETTER) == 0
    assert count(src, ConstructKind.METHOD) == 0


def test_else_if_merges():
    src = "if (a) {} else if (b) {} else {}"
    assert kinds_of(src) == [ConstructKind.IF, ConstructKind.ELSE_IF]


def test_for_variants():
    assert kinds_of("for (let i = 0; i < 2; i++) {}") == [ConstructKind.FOR]
    assert kinds_of("for (const k in obj) {}") == [ConstructKind.FOR_IN_OF]
    assert kinds_of("for (const v of xs) {}") == [ConstructKind.FOR_IN_OF]
    assert kinds_of("for await (const v of xs) {}") == [ConstructKind.FOR_IN_OF]


def test_for_with_in_operator_in_condition():
    # `in` nested in parens below depth 1 must not flip the loop kind.
    assert kinds_of("for (let i = 0; ('a' in obj); i++) {}") == [ConstructKind.FOR]


def test_while_and_do_while():
    assert kinds_of("while (a) {}") == [ConstructKind.WHILE]
    assert kinds_of("do {} while (a);") == [ConstructKind.DO_WHILE]
    assert kinds_of("do x += 1; while (x < 3);") == [ConstructKind.DO_WHILE]
    src = "do { while (b) {} } while (a);"
    assert kinds_of(src) == [ConstructKind.DO_WHILE, ConstructKind.WHILE]


def test_switch_cases_counted_default_not():
    src = "switch (x) { case 1: break; case 2: break; default: break; }"
    assert count(src, ConstructKind.CASE_CLAUSE) == 2


def test_catch_counted_finally_not():
    src = "try { a(); } catch (e) { b(); } finally { c(); }"
    assert kinds_of(src) == [ConstructKind.CATCH_CLAUSE]


def test_ternary_and_logical_operators():
    src = "const r = a ? b && c : d || e ?? f;"
    out = kinds_of(src)
    assert out.count(ConstructKind.CONDITIONAL_EXPR) == 1
    assert out.count(ConstructKind.LOGICAL_AND) == 1
    assert out.count(ConstructKind.LOGICAL_OR) == 1
    assert out.count(ConstructKind.NULLISH_COALESCE) == 1


def test_optional_chaining_is_not_a_branch():
    assert kinds_of("const v = a?.b?.c;") == []


def test_import_forms():
    src = """import x from 'a';
import { y } from './b';
import * as z from 'node:fs';
import 'side';
"""
    out = specifiers(src)
    assert out == [
        (ConstructKind.IMPORT_DECL, "a"),
        (ConstructKind.IMPORT_DECL, "./b"),
        (ConstructKind.IMPORT_DECL, "node:fs"),
        (ConstructKind.IMPORT_DECL, "side"),
    ]


def test_export_from_captured_plain_export_not():
    src = "export { a } from 'pkg';\nexport const b = 1;\nexport * from './c';\n"
    out = specifiers(src)
    assert (ConstructKind.EXPORT_FROM, "pkg") in out
    assert (ConstructKind.EXPORT_FROM, "./c") in out
    assert len([k for k, _ in out if k is ConstructKind.EXPORT_FROM]) == 2


def test_dynamic_import_and_import_meta():
    assert specifiers("const m = import('dyn');") == [(ConstructKind.DYNAMIC_IMPORT, "dyn")]
    assert specifiers("const u = import.meta.url;") == []


def test_require_forms():
    src = "const a = require('x');\nconst b = require('./y');\n"
    assert specifiers(src) == [
        (ConstructKind.REQUIRE_CALL, "x"),
        (ConstructKind.REQUIRE_CALL, "./y"),
    ]


def test_member_require_not_counted():
    assert specifiers("foo.require('x');") == []


def test_non_literal_require_is_recovered_error():
    out = parse_source("const m = require(name);")
    assert not out.constructs
    assert any("require" in e.message for e in out.errors)


def test_string_escapes_in_specifier_decoded():
    assert specifiers("require('a\\u0062c');") == [(ConstructKind.REQUIRE_CALL, "abc")]


def test_construct_lines_are_recorded():
    out = parse_source("let a;\nif (a) {}\n")
    assert [(c.kind, c.line) for c in out.constructs] == [(ConstructKind.IF, 2)]


def test_keyword_lookalikes_in_strings_ignored():
    assert kinds_of("const s = 'if (a) { while (b) {} }';") == []
    assert kinds_of("// if (a) {}\n/* for (;;) {} */") == []


def test_template_substitution_constructs_counted():
    assert count("const t = `${a ? b : c}`;", ConstructKind.CONDITIONAL_EXPR) == 1


source_bits = st.sampled_from(
    [
        "function f() {}", "const g = () => {};", "if (a) {}", "else if (b) {}",
        "while (x) {}", "for (;;) {}", "class C {}", "try {} catch (e) {}",
        "a && b;", "a || b;", "a ?? b;", "x ? y : z;", "import 'p';",
        "const r = require('q');", "`t${1}`;", "/* c */", "// line",
        "'str';", "[1, 2];", "{ }", "do {} while (0);", "switch (x) { case 1: }",
    ]
)


@settings(max_examples=200)
@given(st.lists(source_bits, max_size=12))
def test_scanner_is_total_on_fragment_soup(bits):
    out = parse_source("\n".join(bits))
    assert all(c.line >= 1 for c in out.constructs)


@settings(max_examples=150)
@given(st.text(max_size=100))
def test_scanner_is_total_on_arbitrary_text(src):
    out = parse_source(src)
    assert isinstance(out.constructs, list)
