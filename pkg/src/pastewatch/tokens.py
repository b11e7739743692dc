"""Java lexer: turns source text into a flat token stream with positions.

The lexer is total except for unterminated string/char literals and
unterminated block comments, which raise :class:`LexError` with the
offending line/column. Comments are kept as tokens so callers can decide
whether to drop them; everything downstream in this package does.
"""

from __future__ import annotations

from dataclasses import dataclass

KEYWORD = "keyword"
IDENTIFIER = "identifier"
LITERAL_INT = "literal-int"
LITERAL_FLOAT = "literal-float"
LITERAL_STRING = "literal-string"
LITERAL_CHAR = "literal-char"
LITERAL_BOOL = "literal-bool"
OPERATOR = "operator"
SEPARATOR = "separator"
COMMENT = "comment"

# The 50 reserved words of the Java language. true/false are boolean
# literals and null is lexed as an identifier (it is not reserved).
JAVA_KEYWORDS = frozenset(
    {
        "abstract", "assert", "boolean", "break", "byte", "case", "catch",
        "char", "class", "const", "continue", "default", "do", "double",
        "else", "enum", "extends", "final", "finally", "float", "for",
        "goto", "if", "implements", "import", "instanceof", "int",
        "interface", "long", "native", "new", "package", "private",
        "protected", "public", "return", "short", "static", "strictfp",
        "super", "switch", "synchronized", "this", "throw", "throws",
        "transient", "try", "void", "volatile", "while",
    }
)

_SEPARATOR_TEXTS = frozenset({"(", ")", "{", "}", "[", "]", ";", ",", ".", "...", "@", "::"})

# Multi-character punctuation, longest first for maximal munch.
_PUNCT = (
    ">>>=", "...", ">>>", "<<=", ">>=", "==", "!=", "<=", ">=", "&&", "||",
    "++", "--", "+=", "-=", "*=", "/=", "&=", "|=", "^=", "%=", "<<", ">>",
    "->", "::", "=", ">", "<", "!", "~", "?", ":", "+", "-", "*", "/", "&",
    "|", "^", "%", "(", ")", "{", "}", "[", "]", ";", ",", ".", "@",
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int  # 1-based
    col: int  # 1-based
    start: int  # character offset into the source
    end: int  # offset one past the last character


class LexError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch in "_$"


def _is_ident_part(ch: str) -> bool:
    return ch.isalnum() or ch in "_$"


def tokenize(source: str) -> list[Token]:
    """Lex *source* into tokens, comments included."""
    toks: list[Token] = []
    i = 0
    n = len(source)
    line = 1
    line_start = 0

    def col(pos: int) -> int:
        return pos - line_start + 1

    def emit(kind: str, start: int, end: int, at_line: int, at_col: int) -> None:
        toks.append(Token(kind, source[start:end], at_line, at_col, start, end))

    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            line_start = i
            continue
        if ch.isspace():
            i += 1
            continue

        start, at_line, at_col = i, line, col(i)

        if ch == "/" and i + 1 < n and source[i + 1] == "/":
            j = source.find("\n", i)
            j = n if j == -1 else j
            emit(COMMENT, i, j, at_line, at_col)
            i = j
            continue
        if ch == "/" and i + 1 < n and source[i + 1] == "*":
            j = source.find("*/", i + 2)
            if j == -1:
                raise LexError("unterminated block comment", at_line, at_col)
            emit(COMMENT, i, j + 2, at_line, at_col)
            line += source.count("\n", i, j + 2)
            nl = source.rfind("\n", i, j + 2)
            if nl != -1:
                line_start = nl + 1
            i = j + 2
            continue

        if _is_ident_start(ch):
            j = i + 1
            while j < n and _is_ident_part(source[j]):
                j += 1
            word = source[i:j]
            if word in ("true", "false"):
                kind = LITERAL_BOOL
            elif word in JAVA_KEYWORDS:
                kind = KEYWORD
            else:
                kind = IDENTIFIER
            emit(kind, i, j, at_line, at_col)
            i = j
            continue

        if ch.isdigit() or (ch == "." and i + 1 < n and source[i + 1].isdigit()):
            i = _lex_number(source, i, toks, at_line, at_col)
            continue

        if ch == '"':
            i = _lex_quoted(source, i, '"', "unterminated string literal", at_line, at_col)
            emit(LITERAL_STRING, start, i, at_line, at_col)
            continue
        if ch == "'":
            i = _lex_quoted(source, i, "'", "unterminated char literal", at_line, at_col)
            emit(LITERAL_CHAR, start, i, at_line, at_col)
            continue

        for p in _PUNCT:
            if source.startswith(p, i):
                kind = SEPARATOR if p in _SEPARATOR_TEXTS else OPERATOR
                emit(kind, i, i + len(p), at_line, at_col)
                i += len(p)
                break
        else:
            # Unknown character: keep the stream total so odd pastes
            # still lex; downstream parsing rejects them.
            emit(OPERATOR, i, i + 1, at_line, at_col)
            i += 1

    return toks


def _lex_number(source: str, i: int, toks: list[Token], line: int, col: int) -> int:
    n = len(source)
    start = i
    is_float = False
    if source[i] == "0" and i + 1 < n and source[i + 1] in "xXbB":
        i += 2
        while i < n and (source[i].isalnum() or source[i] == "_"):
            i += 1
        toks.append(Token(LITERAL_INT, source[start:i], line, col, start, i))
        return i
    while i < n and (source[i].isdigit() or source[i] == "_"):
        i += 1
    if i < n and source[i] == "." and (i + 1 >= n or source[i + 1] != "."):
        nxt = source[i + 1] if i + 1 < n else ""
        if nxt.isdigit() or not (_is_ident_start(nxt) or nxt == "."):
            is_float = True
            i += 1
            while i < n and (source[i].isdigit() or source[i] == "_"):
                i += 1
    if i < n and source[i] in "eE":
        j = i + 1
        if j < n and source[j] in "+-":
            j += 1
        if j < n and source[j].isdigit():
            is_float = True
            i = j
            while i < n and source[i].isdigit():
                i += 1
    if i < n and source[i] in "fFdD":
        is_float = True
        i += 1
    elif i < n and source[i] in "lL":
        i += 1
    kind = LITERAL_FLOAT if is_float else LITERAL_INT
    toks.append(Token(kind, source[start:i], line, col, start, i))
    return i


def _lex_quoted(source: str, i: int, quote: str, err: str, line: int, col: int) -> int:
    n = len(source)
    j = i + 1
    while j < n:
        ch = source[j]
        if ch == "\\":
            j += 2
            continue
        if ch == quote:
            return j + 1
        if ch == "\n":
            break
        j += 1
    raise LexError(err, line, col)


def non_comment(tokens: list[Token]) -> list[Token]:
    return [t for t in tokens if t.kind != COMMENT]
