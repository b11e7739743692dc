"""Statement-level parser for a practical Java subset.

Produces a tree of type/method/statement nodes that carries source spans,
token index ranges, block nesting depth, and declared-variable metadata.
Expressions are consumed (with full precedence) but not materialized as
nodes; the identifier-level queries this package needs are answered from
the token stream plus the parser's record of which token indices belong
to type syntax or other non-variable positions.

Inside method bodies the file-mode parser never hard-fails: statements it
cannot understand become opaque nodes with correct spans. Fragment mode
(`parse_fragment`) is strict so that prose and half-statements are
rejected rather than swallowed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .tokens import (
    IDENTIFIER,
    KEYWORD,
    LexError,
    OPERATOR,
    SEPARATOR,
    Token,
    non_comment,
    tokenize,
)

PRIMITIVES = frozenset({"boolean", "byte", "char", "short", "int", "long", "float", "double", "void"})

_MODIFIERS = frozenset(
    {"public", "protected", "private", "static", "abstract", "final", "native",
     "synchronized", "transient", "volatile", "strictfp", "default"}
)

ASSIGN_OPS = frozenset({"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="})

_BIN_LEVELS = (
    ("||",),
    ("&&",),
    ("|",),
    ("^",),
    ("&",),
    ("==", "!="),
    ("<", ">", "<=", ">=", "instanceof"),
    ("<<", ">>", ">>>"),
    ("+", "-"),
    ("*", "/", "%"),
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int, at_eof: bool = False):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col
        self.at_eof = at_eof


@dataclass(frozen=True)
class VarDecl:
    name: str
    type_text: str
    name_tok: int = -1  # token index of the declared name, -1 if synthetic


@dataclass
class Stmt:
    kind: str
    start: int
    end: int
    tok_start: int
    tok_end: int
    depth: int
    # Sibling groups (then/else branches, loop bodies, switch sections...).
    # Runs of contiguous siblings only ever come from one container.
    containers: list[list["Stmt"]] = field(default_factory=list)
    decls: list[VarDecl] = field(default_factory=list)
    label: str | None = None

    @property
    def children(self) -> list["Stmt"]:
        return [s for c in self.containers for s in c]

    def walk(self):
        yield self
        for c in self.containers:
            for s in c:
                yield from s.walk()


@dataclass
class MethodDecl:
    name: str
    params: list[VarDecl]
    body: list[Stmt]
    start: int
    end: int
    body_start: int
    body_end: int
    tok_start: int
    tok_end: int
    body_tok_start: int
    body_tok_end: int
    owner: str
    return_type: str
    is_static: bool
    visible_fields: dict[str, str] = field(default_factory=dict)
    tree: "SyntaxTree | None" = field(default=None, repr=False, compare=False)

    def walk_statements(self):
        for s in self.body:
            yield from s.walk()


@dataclass
class TypeDecl:
    name: str
    kind: str  # class | interface | enum
    start: int
    end: int
    fields: list[VarDecl] = field(default_factory=list)
    methods: list[MethodDecl] = field(default_factory=list)
    nested: list["TypeDecl"] = field(default_factory=list)


@dataclass
class SyntaxTree:
    source: str
    path: str
    tokens: list[Token]  # comments excluded
    types: list[TypeDecl]
    type_toks: frozenset[int] = frozenset()  # token indices that are type syntax
    skip_toks: frozenset[int] = frozenset()  # labels, annotation names, lambda params


@dataclass
class CodeFragment:
    text: str
    path: str
    start: int
    end: int
    statements: list[Stmt]
    method: MethodDecl | None
    tree: SyntaxTree | None

    @property
    def tok_start(self) -> int:
        return self.statements[0].tok_start

    @property
    def tok_end(self) -> int:
        return self.statements[-1].tok_end


@dataclass
class FragmentParse:
    ok: bool
    reason: str | None  # not-code | incomplete-statement | lex-error
    message: str
    fragment: CodeFragment | None

    @property
    def statements(self) -> list[Stmt]:
        return self.fragment.statements if self.fragment else []


class _Parser:
    def __init__(self, source: str, tokens: list[Token], path: str, file_mode: bool):
        self.source = source
        self.toks = tokens
        self.n = len(tokens)
        self.i = 0
        self.path = path
        self.file_mode = file_mode
        self.type_tok_list: list[int] = []
        self.skip_tok_list: list[int] = []

    # -- cursor helpers ----------------------------------------------------

    def peek(self, k: int = 0) -> Token | None:
        j = self.i + k
        return self.toks[j] if j < self.n else None

    def at(self, text: str, k: int = 0) -> bool:
        t = self.peek(k)
        return t is not None and t.text == text and t.kind in (OPERATOR, SEPARATOR, KEYWORD)

    def at_kind(self, kind: str, k: int = 0) -> bool:
        t = self.peek(k)
        return t is not None and t.kind == kind

    def advance(self) -> Token:
        t = self.peek()
        if t is None:
            self._fail("unexpected end of input")
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.peek()
        if t is None:
            self._fail(f"expected '{text}'")
        if t.text != text:
            self._fail(f"expected '{text}', found '{t.text}'")
        self.i += 1
        return t

    def _fail(self, message: str):
        t = self.peek()
        if t is None:
            if self.toks:
                last = self.toks[-1]
                raise ParseError(message + " at end of input", last.line, last.col, at_eof=True)
            raise ParseError(message + " at end of input", 1, 1, at_eof=True)
        raise ParseError(message, t.line, t.col)

    def _snapshot(self) -> tuple[int, int, int]:
        return self.i, len(self.type_tok_list), len(self.skip_tok_list)

    def _restore(self, snap: tuple[int, int, int]) -> None:
        self.i, tlen, slen = snap
        del self.type_tok_list[tlen:]
        del self.skip_tok_list[slen:]

    # -- compilation unit --------------------------------------------------

    def parse_unit(self) -> list[TypeDecl]:
        types: list[TypeDecl] = []
        while self.peek() is not None:
            if self.at("package") or self.at("import"):
                while self.peek() is not None and not self.at(";"):
                    self.skip_tok_list.append(self.i)
                    self.advance()
                self.expect(";")
                continue
            if self.at(";"):
                self.advance()
                continue
            types.append(self.parse_type_decl())
        return types

    def _skip_modifiers(self) -> set[str]:
        seen: set[str] = set()
        while True:
            t = self.peek()
            if t is None:
                return seen
            if t.kind == KEYWORD and t.text in _MODIFIERS:
                seen.add(t.text)
                self.advance()
                continue
            if t.text == "@" and self.at_kind(IDENTIFIER, 1):
                self.advance()
                self.skip_tok_list.append(self.i)
                self.advance()
                while self.at("."):
                    self.advance()
                    self.skip_tok_list.append(self.i)
                    self.advance()
                if self.at("("):
                    self._skip_balanced("(", ")")
                continue
            return seen

    def _skip_balanced(self, open_text: str, close_text: str) -> None:
        self.expect(open_text)
        depth = 1
        while depth > 0:
            t = self.advance()
            if t.text == open_text:
                depth += 1
            elif t.text == close_text:
                depth -= 1

    def parse_type_decl(self) -> TypeDecl:
        start_tok = self.peek()
        self._skip_modifiers()
        t = self.peek()
        if t is None or t.text not in ("class", "interface", "enum"):
            self._fail("expected type declaration")
        kind = self.advance().text
        name = self.advance().text
        if self.at("<"):
            self._skip_generic_args()
        while self.at("extends") or self.at("implements"):
            self.advance()
            while not self.at("{"):
                if self.peek() is None:
                    self._fail("expected '{'")
                self.advance()
        decl = TypeDecl(name=name, kind=kind, start=start_tok.start, end=0)
        self.expect("{")
        if kind == "enum":
            self._parse_enum_constants()
        while not self.at("}"):
            if self.peek() is None:
                self._fail("unterminated type body")
            self._parse_member(decl)
        close = self.expect("}")
        decl.end = close.end
        return decl

    def _parse_enum_constants(self) -> None:
        # CONST, CONST(expr), ... optionally terminated by ';'
        while self.at_kind(IDENTIFIER):
            self.skip_tok_list.append(self.i)
            self.advance()
            if self.at("("):
                self._skip_balanced("(", ")")
            if self.at("{"):
                self._skip_balanced("{", "}")
            if self.at(","):
                self.advance()
        if self.at(";"):
            self.advance()

    def _parse_member(self, owner: TypeDecl) -> None:
        if self.at(";"):
            self.advance()
            return
        start_tok = self.peek()
        mods = self._skip_modifiers()
        if self.at("class") or self.at("interface") or self.at("enum"):
            self.i = self._member_rewind(start_tok)
            owner.nested.append(self.parse_type_decl())
            return
        if self.at("{"):  # instance/static initializer
            self._skip_balanced("{", "}")
            return
        if self.at("<"):
            self._skip_generic_args()
        # Constructor: Name '(' where Name matches the owning type.
        if self.at_kind(IDENTIFIER) and self.at("(", 1) and self.peek().text == owner.name:
            name_tok = self.advance()
            self._parse_method_rest(owner, start_tok, name_tok.text, "", mods)
            return
        type_text = self.parse_type()
        if not self.at_kind(IDENTIFIER):
            self._fail("expected member name")
        name_tok = self.advance()
        if self.at("("):
            self._parse_method_rest(owner, start_tok, name_tok.text, type_text, mods)
            return
        # Field declaration.
        self.i -= 1  # back to the first declarator name
        decls = self._parse_declarators(type_text)
        self.expect(";")
        owner.fields.extend(decls)

    def _member_rewind(self, start_tok: Token) -> int:
        for idx, t in enumerate(self.toks):
            if t.start == start_tok.start:
                return idx
        return self.i

    def _parse_method_rest(self, owner: TypeDecl, start_tok: Token, name: str,
                           return_type: str, mods: set[str]) -> None:
        tok_start = self._member_rewind(start_tok)
        params = self._parse_params()
        if self.at("throws"):
            self.advance()
            while not self.at("{") and not self.at(";"):
                self.advance()
        if self.at(";"):  # abstract/native: no body
            self.advance()
            return
        lbrace = self.expect("{")
        body_tok_start = self.i
        body = self._parse_statement_list(depth=0, stop_at_brace=True)
        rbrace = self.expect("}")
        owner.methods.append(
            MethodDecl(
                name=name,
                params=params,
                body=body,
                start=start_tok.start,
                end=rbrace.end,
                body_start=lbrace.end,
                body_end=rbrace.start,
                tok_start=tok_start,
                tok_end=self.i,
                body_tok_start=body_tok_start,
                body_tok_end=self.i - 1,
                owner=owner.name,
                return_type=return_type,
                is_static="static" in mods,
            )
        )

    def _parse_params(self) -> list[VarDecl]:
        self.expect("(")
        params: list[VarDecl] = []
        while not self.at(")"):
            self._skip_modifiers()
            type_text = self.parse_type()
            if self.at("..."):
                self.advance()
                type_text += "[]"
            if not self.at_kind(IDENTIFIER):
                self._fail("expected parameter name")
            name_tok_idx = self.i
            name = self.advance().text
            while self.at("[") and self.at("]", 1):
                self.advance()
                self.advance()
                type_text += "[]"
            params.append(VarDecl(name, type_text, name_tok_idx))
            if self.at(","):
                self.advance()
        self.expect(")")
        return params

    # -- types ---------------------------------------------------------------

    def parse_type(self) -> str:
        """Consume a type reference; returns its source text. Raises on failure."""
        t = self.peek()
        if t is None:
            self._fail("expected type")
        start_i = self.i
        if t.kind == KEYWORD and t.text in PRIMITIVES:
            self.advance()
        elif t.kind == IDENTIFIER:
            self.advance()
            if self.at("<"):
                self._skip_generic_args()
            while self.at(".") and self.at_kind(IDENTIFIER, 1):
                self.advance()
                self.advance()
                if self.at("<"):
                    self._skip_generic_args()
        else:
            self._fail("expected type")
        while self.at("[") and self.at("]", 1):
            self.advance()
            self.advance()
        self.type_tok_list.extend(range(start_i, self.i))
        first = self.toks[start_i]
        last = self.toks[self.i - 1]
        return self.source[first.start : last.end]

    def _skip_generic_args(self) -> None:
        """Consume a balanced <...> group or fail (so `a < b` stays an expression)."""
        start = self.i
        self.expect("<")
        depth = 1
        while depth > 0:
            t = self.peek()
            if t is None:
                self._fail("unterminated type arguments")
            if t.text in (";", ")", "{", "}") or t.kind not in (IDENTIFIER, KEYWORD, OPERATOR, SEPARATOR):
                self._restore((start, len(self.type_tok_list), len(self.skip_tok_list)))
                self._fail("not type arguments")
            if t.text == "<":
                depth += 1
            elif t.text == ">":
                depth -= 1
            elif t.text == ">>":
                depth -= 2
            elif t.text == ">>>":
                depth -= 3
            elif t.text not in (",", ".", "?", "extends", "super", "[", "]", "&") and t.kind not in (IDENTIFIER, KEYWORD):
                self._restore((start, len(self.type_tok_list), len(self.skip_tok_list)))
                self._fail("not type arguments")
            self.advance()
        if depth < 0:
            self._restore((start, len(self.type_tok_list), len(self.skip_tok_list)))
            self._fail("unbalanced type arguments")
        self.type_tok_list.extend(range(start, self.i))

    # -- statements ----------------------------------------------------------

    def _parse_statement_list(self, depth: int, stop_at_brace: bool) -> list[Stmt]:
        out: list[Stmt] = []
        while True:
            if stop_at_brace and self.at("}"):
                return out
            if self.peek() is None:
                if stop_at_brace:
                    self._fail("expected '}'")
                return out
            out.append(self._parse_statement_recovering(depth))

    def _parse_statement_recovering(self, depth: int) -> Stmt:
        snap = self._snapshot()
        try:
            return self.parse_statement(depth)
        except ParseError:
            if not self.file_mode:
                raise
            self._restore(snap)
            return self._opaque_statement(depth)

    def _opaque_statement(self, depth: int) -> Stmt:
        tok_start = self.i
        level = 0  # ( ) [ ]
        braces = 0
        while True:
            t = self.peek()
            if t is None:
                self._fail("unterminated statement")
            if braces == 0 and level == 0 and t.text == "}":
                break  # the enclosing block's closing brace
            self.advance()
            if t.text in ("(", "["):
                level += 1
            elif t.text in (")", "]"):
                level -= 1
            elif t.text == "{":
                braces += 1
            elif t.text == "}":
                braces -= 1
                if braces == 0 and level == 0:
                    if self.at(";"):
                        self.advance()
                    break
            elif t.text == ";" and level == 0 and braces == 0:
                break
        if self.i == tok_start:
            self._fail("cannot recover statement")
        return self._mk("opaque", tok_start, depth)

    def _mk(self, kind: str, tok_start: int, depth: int, containers: list[list[Stmt]] | None = None,
            decls: list[VarDecl] | None = None, label: str | None = None) -> Stmt:
        first = self.toks[tok_start]
        last = self.toks[self.i - 1]
        return Stmt(
            kind=kind,
            start=first.start,
            end=last.end,
            tok_start=tok_start,
            tok_end=self.i,
            depth=depth,
            containers=containers or [],
            decls=decls or [],
            label=label,
        )

    def _parse_body(self, depth: int) -> list[Stmt]:
        """A control-statement body: either a braced group or one statement."""
        if self.at("{"):
            self.advance()
            stmts = self._parse_statement_list(depth, stop_at_brace=True)
            self.expect("}")
            return stmts
        return [self._parse_statement_recovering(depth)]

    def parse_statement(self, depth: int) -> Stmt:
        t = self.peek()
        if t is None:
            self._fail("expected statement")
        tok_start = self.i

        if t.text == ";":
            self.advance()
            return self._mk("empty", tok_start, depth)
        if t.text == "{":
            self.advance()
            inner = self._parse_statement_list(depth + 1, stop_at_brace=True)
            self.expect("}")
            return self._mk("block", tok_start, depth, containers=[inner])

        if t.kind == KEYWORD:
            handler = {
                "if": self._parse_if,
                "while": self._parse_while,
                "do": self._parse_do,
                "for": self._parse_for,
                "switch": self._parse_switch,
                "try": self._parse_try,
                "return": self._parse_return,
                "throw": self._parse_throw,
                "break": self._parse_break_continue,
                "continue": self._parse_break_continue,
                "synchronized": self._parse_synchronized,
                "assert": self._parse_assert,
            }.get(t.text)
            if handler is not None:
                return handler(tok_start, depth)
            if t.text == "final" or (t.text in PRIMITIVES and t.text != "void"):
                decl = self._try_local_decl(tok_start, depth)
                if decl is not None:
                    return decl
                self._fail(f"expected declaration after '{t.text}'")

        # Labeled statement: IDENT ':' STATEMENT (but not '::' or ternary).
        if t.kind == IDENTIFIER and self.at(":", 1):
            self.skip_tok_list.append(self.i)
            self.advance()
            self.advance()
            inner = self.parse_statement(depth)
            widened = self._mk(inner.kind, tok_start, depth, containers=inner.containers,
                               decls=inner.decls, label=t.text)
            return widened

        if t.kind == IDENTIFIER:
            decl = self._try_local_decl(tok_start, depth)
            if decl is not None:
                return decl

        self.parse_expression()
        self.expect(";")
        return self._mk("expr", tok_start, depth)

    def _try_local_decl(self, tok_start: int, depth: int) -> Stmt | None:
        snap = self._snapshot()
        try:
            self._skip_modifiers()
            type_text = self.parse_type()
            if not self.at_kind(IDENTIFIER):
                raise ParseError("not a declaration", 0, 0)
            after = self.peek(1)
            if after is None or after.text not in ("=", ";", ",", "["):
                raise ParseError("not a declaration", 0, 0)
            decls = self._parse_declarators(type_text)
            self.expect(";")
            return self._mk("decl", tok_start, depth, decls=decls)
        except ParseError:
            self._restore(snap)
            return None

    def _parse_declarators(self, type_text: str) -> list[VarDecl]:
        decls: list[VarDecl] = []
        while True:
            if not self.at_kind(IDENTIFIER):
                self._fail("expected variable name")
            name_tok_idx = self.i
            name = self.advance().text
            suffix = ""
            while self.at("[") and self.at("]", 1):
                self.advance()
                self.advance()
                suffix += "[]"
            decls.append(VarDecl(name, type_text + suffix, name_tok_idx))
            if self.at("="):
                self.advance()
                self._parse_var_init()
            if self.at(","):
                self.advance()
                continue
            return decls

    def _parse_var_init(self) -> None:
        if self.at("{"):
            self._parse_array_init()
        else:
            self.parse_expression()

    def _parse_array_init(self) -> None:
        self.expect("{")
        while not self.at("}"):
            if self.peek() is None:
                self._fail("unterminated array initializer")
            if self.at("{"):
                self._parse_array_init()
            else:
                self.parse_expression()
            if self.at(","):
                self.advance()
        self.expect("}")

    def _parse_if(self, tok_start: int, depth: int) -> Stmt:
        self.advance()
        self.expect("(")
        self.parse_expression()
        self.expect(")")
        then_part = self._parse_body(depth + 1)
        else_part: list[Stmt] = []
        if self.at("else"):
            self.advance()
            else_part = self._parse_body(depth + 1)
        return self._mk("if", tok_start, depth, containers=[then_part, else_part])

    def _parse_while(self, tok_start: int, depth: int) -> Stmt:
        self.advance()
        self.expect("(")
        self.parse_expression()
        self.expect(")")
        body = self._parse_body(depth + 1)
        return self._mk("while", tok_start, depth, containers=[body])

    def _parse_do(self, tok_start: int, depth: int) -> Stmt:
        self.advance()
        body = self._parse_body(depth + 1)
        self.expect("while")
        self.expect("(")
        self.parse_expression()
        self.expect(")")
        self.expect(";")
        return self._mk("do", tok_start, depth, containers=[body])

    def _parse_for(self, tok_start: int, depth: int) -> Stmt:
        self.advance()
        self.expect("(")
        # Enhanced for: [final] Type name ':' expr
        snap = self._snapshot()
        decls: list[VarDecl] = []
        kind = "for"
        try:
            self._skip_modifiers()
            type_text = self.parse_type()
            if not self.at_kind(IDENTIFIER):
                raise ParseError("not foreach", 0, 0)
            name_tok_idx = self.i
            name = self.advance().text
            if not self.at(":"):
                raise ParseError("not foreach", 0, 0)
            self.advance()
            self.parse_expression()
            self.expect(")")
            decls = [VarDecl(name, type_text, name_tok_idx)]
            kind = "foreach"
        except ParseError:
            self._restore(snap)
            decls = self._parse_for_init()
            self.expect(";")
            if not self.at(";"):
                self.parse_expression()
            self.expect(";")
            if not self.at(")"):
                self.parse_expression()
                while self.at(","):
                    self.advance()
                    self.parse_expression()
            self.expect(")")
        body = self._parse_body(depth + 1)
        return self._mk(kind, tok_start, depth, containers=[body], decls=decls)

    def _parse_for_init(self) -> list[VarDecl]:
        if self.at(";"):
            return []
        snap = self._snapshot()
        try:
            self._skip_modifiers()
            type_text = self.parse_type()
            if not self.at_kind(IDENTIFIER):
                raise ParseError("not a declaration", 0, 0)
            after = self.peek(1)
            if after is None or after.text not in ("=", ",", ";", ":", "["):
                raise ParseError("not a declaration", 0, 0)
            return self._parse_declarators(type_text)
        except ParseError:
            self._restore(snap)
            self.parse_expression()
            while self.at(","):
                self.advance()
                self.parse_expression()
            return []

    def _parse_switch(self, tok_start: int, depth: int) -> Stmt:
        self.advance()
        self.expect("(")
        self.parse_expression()
        self.expect(")")
        self.expect("{")
        sections: list[list[Stmt]] = []
        current: list[Stmt] | None = None
        while not self.at("}"):
            if self.peek() is None:
                self._fail("unterminated switch")
            if self.at("case"):
                if current:
                    sections.append(current)
                current = []
                self.advance()
                self._parse_binary(0)
                while self.at(","):
                    self.advance()
                    self._parse_binary(0)
                self.expect(":")
                continue
            if self.at("default"):
                if current:
                    sections.append(current)
                current = []
                self.advance()
                self.expect(":")
                continue
            if current is None:
                self._fail("statement before first switch label")
            current.append(self._parse_statement_recovering(depth + 1))
        if current:
            sections.append(current)
        self.expect("}")
        return self._mk("switch", tok_start, depth, containers=sections)

    def _parse_try(self, tok_start: int, depth: int) -> Stmt:
        self.advance()
        decls: list[VarDecl] = []
        if self.at("("):
            self.advance()
            while not self.at(")"):
                self._skip_modifiers()
                type_text = self.parse_type()
                if not self.at_kind(IDENTIFIER):
                    self._fail("expected resource name")
                name_tok_idx = self.i
                name = self.advance().text
                decls.append(VarDecl(name, type_text, name_tok_idx))
                self.expect("=")
                self.parse_expression()
                if self.at(";"):
                    self.advance()
            self.expect(")")
        containers: list[list[Stmt]] = []
        self.expect("{")
        containers.append(self._parse_statement_list(depth + 1, stop_at_brace=True))
        self.expect("}")
        saw_handler = bool(decls)
        while self.at("catch"):
            saw_handler = True
            self.advance()
            self.expect("(")
            self._skip_modifiers()
            self.parse_type()
            while self.at("|"):
                self.advance()
                self.parse_type()
            if not self.at_kind(IDENTIFIER):
                self._fail("expected exception name")
            name_tok_idx = self.i
            name = self.advance().text
            decls.append(VarDecl(name, "Throwable", name_tok_idx))
            self.expect(")")
            self.expect("{")
            containers.append(self._parse_statement_list(depth + 1, stop_at_brace=True))
            self.expect("}")
        if self.at("finally"):
            saw_handler = True
            self.advance()
            self.expect("{")
            containers.append(self._parse_statement_list(depth + 1, stop_at_brace=True))
            self.expect("}")
        if not saw_handler:
            self._fail("try without catch or finally")
        return self._mk("try", tok_start, depth, containers=containers, decls=decls)

    def _parse_return(self, tok_start: int, depth: int) -> Stmt:
        self.advance()
        if not self.at(";"):
            self.parse_expression()
        self.expect(";")
        return self._mk("return", tok_start, depth)

    def _parse_throw(self, tok_start: int, depth: int) -> Stmt:
        self.advance()
        self.parse_expression()
        self.expect(";")
        return self._mk("throw", tok_start, depth)

    def _parse_break_continue(self, tok_start: int, depth: int) -> Stmt:
        kind = self.advance().text
        label = None
        if self.at_kind(IDENTIFIER):
            self.skip_tok_list.append(self.i)
            label = self.advance().text
        self.expect(";")
        return self._mk(kind, tok_start, depth, label=label)

    def _parse_synchronized(self, tok_start: int, depth: int) -> Stmt:
        self.advance()
        self.expect("(")
        self.parse_expression()
        self.expect(")")
        self.expect("{")
        body = self._parse_statement_list(depth + 1, stop_at_brace=True)
        self.expect("}")
        return self._mk("synchronized", tok_start, depth, containers=[body])

    def _parse_assert(self, tok_start: int, depth: int) -> Stmt:
        self.advance()
        self._parse_ternary()
        if self.at(":"):
            self.advance()
            self.parse_expression()
        self.expect(";")
        return self._mk("assert", tok_start, depth)

    # -- expressions ---------------------------------------------------------

    def parse_expression(self) -> None:
        self._parse_assignment()

    def _parse_assignment(self) -> None:
        self._parse_ternary()
        t = self.peek()
        if t is not None and t.text in ASSIGN_OPS:
            self.advance()
            self._parse_assignment()

    def _parse_ternary(self) -> None:
        self._parse_binary(0)
        if self.at("?"):
            self.advance()
            self._parse_assignment()
            self.expect(":")
            self._parse_ternary()

    def _parse_binary(self, level: int) -> None:
        if level >= len(_BIN_LEVELS):
            self._parse_unary()
            return
        ops = _BIN_LEVELS[level]
        self._parse_binary(level + 1)
        while True:
            t = self.peek()
            if t is None or t.text not in ops:
                return
            if t.text == "instanceof":
                self.advance()
                self.parse_type()
                if self.at_kind(IDENTIFIER):  # pattern variable
                    self.skip_tok_list.append(self.i)
                    self.advance()
                continue
            if t.kind not in (OPERATOR, KEYWORD):
                return
            self.advance()
            self._parse_binary(level + 1)

    def _parse_unary(self) -> None:
        t = self.peek()
        if t is None:
            self._fail("expected expression")
        if t.text in ("+", "-", "!", "~", "++", "--"):
            self.advance()
            self._parse_unary()
            return
        if t.text == "(" and self._try_cast():
            return
        self._parse_postfix()

    def _try_cast(self) -> bool:
        snap = self._snapshot()
        try:
            self.expect("(")
            type_start = self.peek()
            is_primitive = type_start is not None and type_start.kind == KEYWORD and type_start.text in PRIMITIVES
            self.parse_type()
            self.expect(")")
            nxt = self.peek()
            if nxt is None:
                raise ParseError("not a cast", 0, 0)
            ok = (
                nxt.kind in (IDENTIFIER,)
                or nxt.kind.startswith("literal")
                or nxt.text in ("(", "this", "super", "new", "!", "~")
                or (is_primitive and nxt.text in ("+", "-", "++", "--"))
            )
            if not ok:
                raise ParseError("not a cast", 0, 0)
            self._parse_unary()
            return True
        except ParseError:
            self._restore(snap)
            return False

    def _is_lambda_params(self) -> bool:
        """Cursor on '(': look ahead for a balanced group followed by '->'."""
        j = self.i
        depth = 0
        while j < self.n:
            text = self.toks[j].text
            if text == "(":
                depth += 1
            elif text == ")":
                depth -= 1
                if depth == 0:
                    return j + 1 < self.n and self.toks[j + 1].text == "->"
            elif text in (";", "{", "}"):
                return False
            j += 1
        return False

    def _parse_lambda_tail(self) -> None:
        self.expect("->")
        if self.at("{"):
            self._skip_balanced("{", "}")
        else:
            self.parse_expression()

    def _parse_postfix(self) -> None:
        self._parse_primary()
        while True:
            t = self.peek()
            if t is None:
                return
            if t.text == ".":
                self.advance()
                if self.at("<"):
                    self._skip_generic_args()
                nxt = self.peek()
                if nxt is None:
                    self._fail("expected member name")
                if nxt.kind not in (IDENTIFIER, KEYWORD):
                    self._fail("expected member name")
                self.advance()
                continue
            if t.text == "(":
                self._parse_args()
                continue
            if t.text == "[":
                self.advance()
                self.parse_expression()
                self.expect("]")
                continue
            if t.text in ("++", "--"):
                self.advance()
                continue
            if t.text == "::":
                self.advance()
                nxt = self.peek()
                if nxt is None or nxt.kind not in (IDENTIFIER, KEYWORD):
                    self._fail("expected method reference name")
                self.advance()
                continue
            return

    def _parse_args(self) -> None:
        self.expect("(")
        while not self.at(")"):
            if self.peek() is None:
                self._fail("unterminated arguments")
            self.parse_expression()
            if self.at(","):
                self.advance()
            elif not self.at(")"):
                self._fail("expected ',' or ')'")
        self.expect(")")

    def _parse_primary(self) -> None:
        t = self.peek()
        if t is None:
            self._fail("expected expression")
        if t.kind.startswith("literal"):
            self.advance()
            return
        if t.text == "(":
            if self._is_lambda_params():
                depth = 0
                while True:
                    tok = self.advance()
                    if tok.text == "(":
                        depth += 1
                    elif tok.text == ")":
                        depth -= 1
                        if depth == 0:
                            break
                    elif tok.kind == IDENTIFIER:
                        self.skip_tok_list.append(self.i - 1)
                self._parse_lambda_tail()
                return
            self.advance()
            self.parse_expression()
            self.expect(")")
            return
        if t.kind == IDENTIFIER:
            if self.at("->", 1):
                self.skip_tok_list.append(self.i)
                self.advance()
                self._parse_lambda_tail()
                return
            self.advance()
            return
        if t.text in ("this", "super"):
            self.advance()
            return
        if t.text == "new":
            self.advance()
            self.parse_type()
            if self.at("("):
                self._parse_args()
                if self.at("{"):  # anonymous class body, kept opaque
                    self._skip_balanced("{", "}")
                return
            if self.at("["):
                while self.at("["):
                    self.advance()
                    if not self.at("]"):
                        self.parse_expression()
                    self.expect("]")
                if self.at("{"):
                    self._parse_array_init()
                return
            if self.at("{"):
                self._parse_array_init()
                return
            self._fail("expected constructor arguments")
        if t.kind == KEYWORD and t.text in PRIMITIVES:
            # e.g. int.class
            self.advance()
            return
        self._fail(f"unexpected token '{t.text}'")


def parse_compilation_unit(source: str, path: str = "<source>") -> SyntaxTree:
    tokens = non_comment(tokenize(source))
    parser = _Parser(source, tokens, path, file_mode=True)
    types = parser.parse_unit()
    tree = SyntaxTree(
        source=source,
        path=path,
        tokens=tokens,
        types=types,
        type_toks=frozenset(parser.type_tok_list),
        skip_toks=frozenset(parser.skip_tok_list),
    )
    _assign_method_context(tree)
    return tree


def _assign_method_context(tree: SyntaxTree) -> None:
    def visit(t: TypeDecl, outer_fields: dict[str, str]) -> None:
        fields = dict(outer_fields)
        fields.update({f.name: f.type_text for f in t.fields})
        for m in t.methods:
            m.visible_fields = dict(fields)
            m.tree = tree
        for nested in t.nested:
            visit(nested, fields)

    for t in tree.types:
        visit(t, {})


def parse_fragment(text: str) -> FragmentParse:
    """Validate pasted text as a run of complete Java statements."""
    try:
        tokens = non_comment(tokenize(text))
    except LexError as e:
        return FragmentParse(False, "lex-error", str(e), None)
    if not tokens:
        return FragmentParse(False, "not-code", "no tokens", None)
    parser = _Parser(text, tokens, "<fragment>", file_mode=False)
    try:
        stmts = parser._parse_statement_list(depth=0, stop_at_brace=False)
    except ParseError as e:
        reason = "incomplete-statement" if e.at_eof else "not-code"
        return FragmentParse(False, reason, str(e), None)
    if not stmts:
        return FragmentParse(False, "not-code", "no statements", None)
    tree = SyntaxTree(
        source=text,
        path="<fragment>",
        tokens=tokens,
        types=[],
        type_toks=frozenset(parser.type_tok_list),
        skip_toks=frozenset(parser.skip_tok_list),
    )
    fragment = CodeFragment(
        text=text[stmts[0].start : stmts[-1].end],
        path="<fragment>",
        start=stmts[0].start,
        end=stmts[-1].end,
        statements=stmts,
        method=None,
        tree=tree,
    )
    return FragmentParse(True, None, "", fragment)


def methods_of(tree: SyntaxTree) -> list[MethodDecl]:
    """All method declarations (nested types included) in source order."""
    out: list[MethodDecl] = []

    def visit(t: TypeDecl) -> None:
        out.extend(t.methods)
        for nested in t.nested:
            visit(nested)

    for t in tree.types:
        visit(t)
    out.sort(key=lambda m: m.start)
    return out


def nesting_depth(region) -> int:
    """Maximum statement depth within *region*, relative to its own top level."""
    if isinstance(region, CodeFragment):
        stmts = region.statements
    elif isinstance(region, MethodDecl):
        stmts = region.body
    else:
        stmts = list(region)
    if not stmts:
        return 0
    base = min(s.depth for s in stmts)
    deepest = base
    for s in stmts:
        for node in s.walk():
            if node.depth > deepest:
                deepest = node.depth
    return deepest - base


def fragment_at(tree: SyntaxTree, start: int, end: int) -> CodeFragment | None:
    """The contiguous sibling-statement run covered exactly by [start, end).

    Returns None when the range does not align with a complete run inside
    a single block of some method.
    """
    method = None
    for m in methods_of(tree):
        if m.body_start <= start and end <= m.body_end:
            if method is None or (m.end - m.start) < (method.end - method.start):
                method = m
    if method is None:
        return None
    run = _find_run(method.body, start, end)
    if not run:
        return None
    frag_start = run[0].start
    frag_end = run[-1].end
    # Anything the range covers beyond the run itself must be whitespace;
    # otherwise the range cuts through statement syntax.
    slack = tree.source[start:frag_start] + tree.source[frag_end:end]
    if slack.strip():
        return None
    return CodeFragment(
        text=tree.source[frag_start:frag_end],
        path=tree.path,
        start=frag_start,
        end=frag_end,
        statements=run,
        method=method,
        tree=tree,
    )


def _find_run(container: list[Stmt], start: int, end: int) -> list[Stmt] | None:
    touching = [s for s in container if s.end > start and s.start < end]
    if not touching:
        return None
    inside = [s for s in touching if s.start >= start and s.end <= end]
    if inside and len(inside) == len(touching):
        return inside
    if len(touching) == 1:
        for c in touching[0].containers:
            run = _find_run(c, start, end)
            if run:
                return run
    return None


def statement_count(stmts: list[Stmt]) -> int:
    """All statements in the given run, nested ones included."""
    return sum(1 for s in stmts for _ in s.walk())
