"""Token-bag clone detection between a pasted fragment and file methods.

Identifiers and literals are abstracted away (ID / LIT_*), which makes
matching invariant under consistent renaming; the bag (multiset) view
additionally tolerates statement reordering. Exact matches are contiguous
occurrences of the abstracted fragment inside an abstracted method body.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .tokens import (
    COMMENT,
    IDENTIFIER,
    LITERAL_BOOL,
    LITERAL_CHAR,
    LITERAL_FLOAT,
    LITERAL_INT,
    LITERAL_STRING,
    Token,
)
from .syntax import CodeFragment, MethodDecl, SyntaxTree, methods_of, statement_count

_ABSTRACT = {
    IDENTIFIER: "ID",
    LITERAL_INT: "LIT_INT",
    LITERAL_FLOAT: "LIT_FLOAT",
    LITERAL_STRING: "LIT_STR",
    LITERAL_CHAR: "LIT_CHAR",
    LITERAL_BOOL: "LIT_BOOL",
}

DEFAULT_THRESHOLD = 0.8

# Pastes smaller than this are ignored by duplicate search: single
# statements and token snippets would match nearly everything.
MIN_STATEMENTS = 2
MIN_NORM_TOKENS = 4


@dataclass(frozen=True)
class DuplicateMatch:
    method: str
    start: int
    end: int
    similarity: float
    exact: bool


def normalize(tokens: list[Token]) -> list[str]:
    """Abstract a token list: identifiers -> ID, literals -> LIT_*, comments dropped."""
    out: list[str] = []
    for t in tokens:
        if t.kind == COMMENT:
            continue
        out.append(_ABSTRACT.get(t.kind, t.text))
    return out


def token_bag(seq: list[str]) -> Counter:
    return Counter(seq)


def bag_size(bag: Counter) -> int:
    return sum(bag.values())


def similarity(a: Counter, b: Counter) -> float:
    """Multiset overlap over the larger bag size; 0 for two empty bags."""
    size_a = bag_size(a)
    size_b = bag_size(b)
    if size_a == 0 and size_b == 0:
        return 0.0
    overlap = sum(min(count, b[tok]) for tok, count in a.items())
    return overlap / max(size_a, size_b)


_SENTINEL = "\x1f"


def _joined(seq: list[str]) -> str:
    return _SENTINEL + _SENTINEL.join(seq) + _SENTINEL


def is_substring_match(fragment: list[str], method: list[str]) -> bool:
    """True iff *fragment* occurs as a contiguous subsequence of *method*."""
    if not fragment:
        raise ValueError("empty fragment")
    if len(fragment) > len(method):
        return False
    return _joined(fragment) in _joined(method)


def find_occurrences(fragment: list[str], method: list[str]) -> list[int]:
    """Start indices of non-overlapping occurrences, leftmost first."""
    if not fragment:
        raise ValueError("empty fragment")
    hay = _joined(method)
    needle = _joined(fragment)
    out: list[int] = []
    pos = 0
    while True:
        hit = hay.find(needle, pos)
        if hit == -1:
            return out
        out.append(hay.count(_SENTINEL, 0, hit + 1) - 1)
        pos = hit + len(needle) - 1


def method_body_tokens(tree: SyntaxTree, method: MethodDecl) -> list[Token]:
    return tree.tokens[method.body_tok_start : method.body_tok_end]


def fragment_tokens(fragment: CodeFragment) -> list[Token]:
    assert fragment.tree is not None
    return fragment.tree.tokens[fragment.tok_start : fragment.tok_end]


def find_duplicates(fragment: CodeFragment, tree: SyntaxTree,
                    threshold: float = DEFAULT_THRESHOLD) -> list[DuplicateMatch]:
    """Methods of *tree* that duplicate *fragment*: exact normalized-sequence
    matches plus any method whose bag similarity reaches *threshold*.

    The method containing the paste site is searched like any other, so
    self-file duplicates count. Sorted by similarity descending, ties in
    source order.
    """
    if not (0.0 < threshold <= 1.0):
        raise ValueError("threshold must be in (0, 1]")
    frag_seq = normalize(fragment_tokens(fragment))
    if statement_count(fragment.statements) < MIN_STATEMENTS or len(frag_seq) < MIN_NORM_TOKENS:
        return []
    frag_bag = token_bag(frag_seq)
    matches: list[tuple[float, int, DuplicateMatch]] = []
    for method in methods_of(tree):
        seq = normalize(method_body_tokens(tree, method))
        if not seq:
            continue
        sim = similarity(frag_bag, token_bag(seq))
        exact = is_substring_match(frag_seq, seq)
        if exact or sim >= threshold:
            matches.append(
                (sim, method.start,
                 DuplicateMatch(method.name, method.start, method.end, sim, exact))
            )
    matches.sort(key=lambda item: (-item[0], item[1]))
    return [m for _, _, m in matches]
