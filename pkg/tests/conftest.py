from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pastewatch.syntax import CodeFragment, MethodDecl, SyntaxTree, methods_of, parse_compilation_unit

FIXTURES = Path(__file__).parent / "fixtures"


def load_corpus() -> list[SyntaxTree]:
    trees = []
    for path in sorted(FIXTURES.glob("*.java")):
        trees.append(parse_compilation_unit(path.read_text(), path=str(path)))
    return trees


@pytest.fixture(scope="session")
def corpus() -> list[SyntaxTree]:
    return load_corpus()


@pytest.fixture(scope="session")
def all_methods(corpus) -> list[MethodDecl]:
    out = []
    for tree in corpus:
        out.extend(methods_of(tree))
    return out


def containers_of(method: MethodDecl):
    yield method.body
    for s in method.walk_statements():
        for c in s.containers:
            if c:
                yield c


def sibling_runs(method: MethodDecl):
    """Every contiguous sibling-statement run in every block of a method."""
    for cont in containers_of(method):
        for i in range(len(cont)):
            for j in range(i + 1, len(cont) + 1):
                yield cont[i:j]


def make_fragment(run, method: MethodDecl) -> CodeFragment:
    tree = method.tree
    return CodeFragment(
        text=tree.source[run[0].start : run[-1].end],
        path=tree.path,
        start=run[0].start,
        end=run[-1].end,
        statements=list(run),
        method=method,
        tree=tree,
    )
