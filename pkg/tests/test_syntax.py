import pytest

from pastewatch.syntax import (
    fragment_at,
    methods_of,
    nesting_depth,
    parse_compilation_unit,
    parse_fragment,
    statement_count,
)

from conftest import FIXTURES, sibling_runs


def test_minimal_unit():
    tree = parse_compilation_unit("class A { void f() { int x; } }")
    assert len(tree.types) == 1
    methods = methods_of(tree)
    assert len(methods) == 1
    body = methods[0].body
    assert [s.kind for s in body] == ["decl"]
    assert body[0].depth == 0


def test_if_depth():
    tree = parse_compilation_unit("class A { void f() { if (c) { g(); } } }")
    body = methods_of(tree)[0].body
    assert body[0].kind == "if" and body[0].depth == 0
    inner = body[0].children
    assert [s.kind for s in inner] == ["expr"]
    assert inner[0].depth == 1


def test_three_method_file_spans_reparse():
    source = """class Trio {
    int a(int x) {
        int y = x + 1;
        return y;
    }

    void b() {
        int k = 0;
        k++;
    }

    int c(int n) {
        while (n > 3) {
            n--;
        }
        return n;
    }
}
"""
    tree = parse_compilation_unit(source)
    methods = methods_of(tree)
    assert [m.name for m in methods] == ["a", "b", "c"]
    # spans verified by slicing the source and re-parsing each slice
    for m in methods:
        slice_src = "class W { " + source[m.start : m.end] + " }"
        again = parse_compilation_unit(slice_src)
        inner = methods_of(again)
        assert [mm.name for mm in inner] == [m.name]
        assert statement_count(inner[0].body) == statement_count(m.body)


def _spans_ok(stmts):
    for a, b in zip(stmts, stmts[1:]):
        assert a.end <= b.start, "sibling spans must be disjoint and ordered"
    for s in stmts:
        for c in s.containers:
            for child in c:
                assert s.start <= child.start and child.end <= s.end
                assert child.depth == s.depth + 1
            _spans_ok(c)


def test_span_containment_and_depth_on_fixtures(all_methods):
    assert len(all_methods) >= 30
    for m in all_methods:
        _spans_ok(m.body)


def test_no_opaque_statements_in_main_fixtures(all_methods):
    for m in all_methods:
        kinds = {s.kind for s in m.walk_statements()}
        assert "opaque" not in kinds, m.name


def test_methods_of_source_order_and_empty():
    tree = parse_compilation_unit("class A { void f() { g(); } void g() { f(); } }")
    assert [m.name for m in methods_of(tree)] == ["f", "g"]
    assert methods_of(parse_compilation_unit("class E { int field; }")) == []


def test_methods_of_nested_types_in_source_order():
    fixture = (FIXTURES / "Dupes.java").read_text()
    tree = parse_compilation_unit(fixture)
    names = [m.name for m in methods_of(tree)]
    assert names == ["origin", "renamedCopy", "innerHelper", "swapA", "swapB",
                     "unrelated", "log", "log"]
    starts = [m.start for m in methods_of(tree)]
    assert starts == sorted(starts)


@pytest.mark.parametrize(
    "text,ok,reason,count",
    [
        ("x = y + 1;", True, None, 1),
        ("int a = 1; a++;", True, None, 2),
        ("if (a) { b(); } else { c(); }", True, None, 1),
        ("hello world, this is prose", False, "not-code", 0),
        ("once upon a time there was", False, "not-code", 0),
        ("if (a) {", False, "incomplete-statement", 0),
        ("x = y +", False, "incomplete-statement", 0),
        ('"unterminated', False, "lex-error", 0),
        ("", False, "not-code", 0),
        ("   \n\t", False, "not-code", 0),
    ],
)
def test_parse_fragment_cases(text, ok, reason, count):
    result = parse_fragment(text)
    assert result.ok is ok
    assert result.reason == reason
    assert len(result.statements) == count


def test_parse_fragment_accepts_every_fixture_sibling_run(all_methods):
    runs = 0
    for m in all_methods:
        source = m.tree.source
        for run in sibling_runs(m):
            text = source[run[0].start : run[-1].end]
            result = parse_fragment(text)
            assert result.ok, f"rejected run in {m.name}: {text!r} ({result.message})"
            assert len(result.statements) == len(run)
            runs += 1
    assert runs > 200


def test_unsupported_constructs_become_opaque_spans():
    source = (FIXTURES / "exotic" / "Arrows.java").read_text()
    tree = parse_compilation_unit(source)
    pick = methods_of(tree)[0]
    kinds = [s.kind for s in pick.body]
    assert kinds == ["decl", "opaque", "expr", "return"]
    opaque = pick.body[1]
    assert source[opaque.start : opaque.start + 6] == "switch"
    assert source[opaque.end - 1] == "}"
    _spans_ok(pick.body)


def test_lambda_statement_parses_without_losing_following_statements():
    source = (FIXTURES / "exotic" / "Arrows.java").read_text()
    tree = parse_compilation_unit(source)
    with_lambda = methods_of(tree)[1]
    assert [s.kind for s in with_lambda.body] == ["decl", "expr", "expr", "expr"]


def test_top_level_garbage_is_a_parse_error():
    with pytest.raises(ValueError):
        parse_compilation_unit("this file is not java at all {{{")


def test_nesting_depth_examples():
    tree = parse_compilation_unit(
        "class A { void f() { a(); b(); if (c) { a(); } "
        "while (x) { while (y) { z(); } } } }"
    )
    body = methods_of(tree)[0].body
    assert nesting_depth(body[0:2]) == 0
    assert nesting_depth(body[2:3]) == 1
    assert nesting_depth(body[3:4]) == 2
    assert nesting_depth(body) == 2


def test_fragment_at_finds_nested_runs():
    source = (FIXTURES / "Accounts.java").read_text()
    tree = parse_compilation_unit(source, path="Accounts.java")
    method = [m for m in methods_of(tree) if m.name == "sumPositive"][0]
    loop = method.body[1]
    frag = fragment_at(tree, loop.start, loop.end)
    assert frag is not None and frag.method is method
    assert [s.kind for s in frag.statements] == ["for"]
    # inner run: the if inside the for
    inner_if = loop.children[0]
    frag2 = fragment_at(tree, inner_if.start, inner_if.end)
    assert frag2 is not None and frag2.statements[0] is inner_if
    # a range that straddles statement boundaries does not align
    assert fragment_at(tree, loop.start + 1, loop.end) is None


def test_fragment_at_tolerates_surrounding_whitespace():
    source = (FIXTURES / "Accounts.java").read_text()
    tree = parse_compilation_unit(source)
    method = [m for m in methods_of(tree) if m.name == "countDown"][0]
    first, second = method.body[0], method.body[1]
    frag = fragment_at(tree, first.start - 1, second.end + 1)
    assert frag is not None
    assert frag.statements == [first, second]
    assert frag.start == first.start and frag.end == second.end
