import pytest

from pastewatch.tokens import (
    COMMENT,
    JAVA_KEYWORDS,
    LexError,
    non_comment,
    tokenize,
)

from conftest import FIXTURES


def kinds(source):
    return [t.kind for t in tokenize(source)]


def texts(source):
    return [t.text for t in tokenize(source)]


def test_simple_declaration():
    toks = tokenize("int x = 5;")
    assert [(t.kind, t.text) for t in toks] == [
        ("keyword", "int"),
        ("identifier", "x"),
        ("operator", "="),
        ("literal-int", "5"),
        ("separator", ";"),
    ]


def test_empty_input():
    assert tokenize("") == []


def test_line_comment_retained_and_kinds():
    toks = tokenize("if (a) b(); // c")
    assert [t.kind for t in non_comment(toks)] == [
        "keyword", "separator", "identifier", "separator",
        "identifier", "separator", "separator", "separator",
    ]
    comments = [t for t in toks if t.kind == COMMENT]
    assert len(comments) == 1 and comments[0].text == "// c"


def test_keyword_set_is_the_50_reserved_words():
    assert len(JAVA_KEYWORDS) == 50
    for word in JAVA_KEYWORDS:
        assert kinds(word) == ["keyword"], word
    # true/false are boolean literals, null is an ordinary identifier
    assert kinds("true false null") == ["literal-bool", "literal-bool", "identifier"]


@pytest.mark.parametrize(
    "source,kind",
    [
        ("0x1F", "literal-int"),
        ("42L", "literal-int"),
        ("1_000", "literal-int"),
        ("3.14", "literal-float"),
        ("2f", "literal-float"),
        ("1e9", "literal-float"),
        (".5", "literal-float"),
        ("6.02e23d", "literal-float"),
        ('"a b\\"c"', "literal-string"),
        ("'x'", "literal-char"),
        ("'\\n'", "literal-char"),
    ],
)
def test_literals(source, kind):
    toks = tokenize(source)
    assert len(toks) == 1 and toks[0].kind == kind and toks[0].text == source


def test_member_access_is_not_a_float():
    assert [(t.kind, t.text) for t in tokenize("a.b")] == [
        ("identifier", "a"), ("separator", "."), ("identifier", "b"),
    ]


def test_multichar_operators_max_munch():
    assert texts("a >>= b >>> c != d") == ["a", ">>=", "b", ">>>", "c", "!=", "d"]


@pytest.mark.parametrize(
    "source,message",
    [
        ('"oops', "unterminated string"),
        ("'a", "unterminated char"),
        ("/* never closed", "unterminated block comment"),
    ],
)
def test_unterminated_constructs_raise(source, message):
    with pytest.raises(LexError) as err:
        tokenize("\n  " + source)
    assert message in str(err.value)
    assert err.value.line == 2 and err.value.col == 3


def test_positions_are_one_based():
    toks = tokenize("a\n  b")
    assert (toks[0].line, toks[0].col) == (1, 1)
    assert (toks[1].line, toks[1].col) == (2, 3)


def test_positions_after_block_comment():
    toks = tokenize("/* one\ntwo */ x")
    x = toks[-1]
    assert (x.line, x.col) == (2, 8)


def _fixture_sources():
    return [p.read_text() for p in sorted(FIXTURES.glob("*.java"))]


def test_concatenation_reproduces_source_modulo_whitespace():
    for source in _fixture_sources():
        joined = "".join(t.text for t in tokenize(source))
        assert "".join(joined.split()) == "".join(source.split())


def test_round_trip_space_join_relexes_identically():
    for source in _fixture_sources():
        toks = non_comment(tokenize(source))
        rejoined = " ".join(t.text for t in toks)
        again = non_comment(tokenize(rejoined))
        assert [(t.kind, t.text) for t in again] == [(t.kind, t.text) for t in toks]
