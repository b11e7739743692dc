"""The fixed 78-slot feature vector computed for a fragment in its method.

Catalog layout (versioned; dataset files and model files carry the
version so they can never silently disagree):

  0..61   per-keyword (total, per-line) pairs over a fixed 31-keyword list
  62..67  fragment size: lines, tokens, tokens/line, non-ws chars,
          chars/line, max relative nesting depth
  68..73  enclosing method: lines, fragment/method line ratio, tokens,
          max nesting depth, parameter count, local variable count
  74..77  coupling: external variable references (total, per line),
          live-in count, live-out count

"Per line" always divides by the fragment's own line count, where a line
counts if it holds at least one non-comment token.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dataflow import analyze_fragment
from .syntax import CodeFragment, MethodDecl, nesting_depth

CATALOG_VERSION = "kw31x2+size6+method6+coupling4/v1"

COUNTED_KEYWORDS = (
    "continue", "for", "new", "switch", "assert", "synchronized", "boolean",
    "do", "if", "this", "break", "double", "throw", "byte", "else", "case",
    "instanceof", "return", "transient", "catch", "int", "short", "try",
    "char", "final", "finally", "long", "strictfp", "float", "super", "while",
)

N_FEATURES = 78


@dataclass(frozen=True)
class CatalogEntry:
    index: int
    name: str
    group: str  # keyword | size | method | coupling
    description: str


def _build_catalog() -> tuple[CatalogEntry, ...]:
    entries: list[CatalogEntry] = []
    for i, kw in enumerate(COUNTED_KEYWORDS):
        entries.append(CatalogEntry(2 * i, f"kw_{kw}_total", "keyword",
                                    f"occurrences of '{kw}' in the fragment"))
        entries.append(CatalogEntry(2 * i + 1, f"kw_{kw}_per_line", "keyword",
                                    f"occurrences of '{kw}' per fragment line"))
    size = [
        ("frag_lines", "fragment lines holding at least one token"),
        ("frag_tokens", "tokens in the fragment"),
        ("frag_tokens_per_line", "tokens per fragment line"),
        ("frag_chars", "non-whitespace characters in the fragment"),
        ("frag_chars_per_line", "non-whitespace characters per fragment line"),
        ("frag_max_depth", "maximum nesting depth relative to the fragment top"),
    ]
    method = [
        ("method_lines", "lines of the enclosing method holding a token"),
        ("frag_method_line_ratio", "fragment lines over method lines"),
        ("method_tokens", "tokens of the enclosing method"),
        ("method_max_depth", "maximum nesting depth of the method body"),
        ("method_params", "parameters of the enclosing method"),
        ("method_locals", "local variables declared in the method body"),
    ]
    coupling = [
        ("ext_refs_total", "references to variables declared outside the fragment"),
        ("ext_refs_per_line", "outside-variable references per fragment line"),
        ("live_in_count", "variables read from the surrounding scope"),
        ("live_out_count", "fragment-assigned variables read afterwards"),
    ]
    idx = 62
    for group, rows in (("size", size), ("method", method), ("coupling", coupling)):
        for name, desc in rows:
            entries.append(CatalogEntry(idx, name, group, desc))
            idx += 1
    return tuple(entries)


CATALOG: tuple[CatalogEntry, ...] = _build_catalog()
assert len(CATALOG) == N_FEATURES


def _fragment_token_slice(fragment: CodeFragment):
    assert fragment.tree is not None
    return fragment.tree.tokens[fragment.tok_start : fragment.tok_end]


def _line_count(tokens) -> int:
    return len({t.line for t in tokens})


def keyword_features(fragment: CodeFragment) -> list[float]:
    tokens = _fragment_token_slice(fragment)
    lines = _line_count(tokens)
    if lines < 1:
        raise ValueError("fragment must span at least one line of tokens")
    counts = {kw: 0 for kw in COUNTED_KEYWORDS}
    for t in tokens:
        if t.kind == "keyword" and t.text in counts:
            counts[t.text] += 1
    out: list[float] = []
    for kw in COUNTED_KEYWORDS:
        total = float(counts[kw])
        out.append(total)
        out.append(total / lines)
    return out


def size_features(fragment: CodeFragment) -> list[float]:
    tokens = _fragment_token_slice(fragment)
    lines = _line_count(tokens)
    if lines < 1:
        raise ValueError("fragment must span at least one line of tokens")
    n_tokens = float(len(tokens))
    chars = float(sum(1 for t in tokens for ch in t.text if not ch.isspace()))
    depth = float(nesting_depth(fragment))
    return [float(lines), n_tokens, n_tokens / lines, chars, chars / lines, depth]


def method_context_features(fragment: CodeFragment, method: MethodDecl) -> list[float]:
    tree = method.tree
    assert tree is not None
    if not (method.body_start <= fragment.start and fragment.end <= method.body_end):
        raise ValueError("fragment lies outside the method")
    method_tokens = tree.tokens[method.tok_start : method.tok_end]
    method_lines = _line_count(method_tokens)
    frag_lines = _line_count(_fragment_token_slice(fragment))
    locals_count = sum(len(s.decls) for s in method.walk_statements())
    return [
        float(method_lines),
        frag_lines / method_lines,
        float(len(method_tokens)),
        float(nesting_depth(method)),
        float(len(method.params)),
        float(locals_count),
    ]


def coupling_features(fragment: CodeFragment, method: MethodDecl) -> list[float]:
    flow = analyze_fragment(fragment, method)
    frag_lines = _line_count(_fragment_token_slice(fragment))
    total = float(flow.external_refs)
    return [total, total / frag_lines, float(len(flow.live_in)), float(len(flow.live_out))]


def extract_features(fragment: CodeFragment, method: MethodDecl) -> list[float]:
    """The full 78-slot vector, groups concatenated in catalog order."""
    vec = (
        keyword_features(fragment)
        + size_features(fragment)
        + method_context_features(fragment, method)
        + coupling_features(fragment, method)
    )
    assert len(vec) == N_FEATURES
    return vec


def catalog_lines() -> list[str]:
    out = [f"# feature catalog {CATALOG_VERSION} ({N_FEATURES} slots)"]
    for e in CATALOG:
        out.append(f"{e.index}\t{e.name}\t{e.group}\t{e.description}")
    return out
