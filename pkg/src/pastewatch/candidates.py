"""Enumeration and scoring of extraction-eligible statement runs.

A candidate is any contiguous run of sibling statements that could be
pulled into a new method: at least two statements, strictly smaller than
the method, no escaping control flow, and at most one live-out variable.
Candidates are ranked by a heuristic balancing split size, nesting-depth
reduction, and variable-coupling penalties.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dataflow import analyze_fragment
from .syntax import CodeFragment, MethodDecl, Stmt, statement_count

_LOOPS = frozenset({"while", "do", "for", "foreach"})


@dataclass(frozen=True)
class ScoreWeights:
    w_length: float = 1.0
    w_depth: float = 1.0
    w_live_in: float = 0.2
    w_live_out: float = 0.4


DEFAULT_WEIGHTS = ScoreWeights()


@dataclass
class Candidate:
    fragment: CodeFragment
    s_f: int  # statements in the fragment, nested included
    s_m: int  # statements in the whole method body
    s_r: int  # remainder: s_m - s_f
    d_m: int  # max depth of the method body
    d_r: int  # max depth of the remainder after extraction
    live_in: frozenset[str]
    live_out: frozenset[str]
    score: float


def _containers_of(method: MethodDecl) -> list[list[Stmt]]:
    out = [method.body]
    for s in method.walk_statements():
        out.extend(c for c in s.containers if c)
    return out


def _contains_escape(run: list[Stmt]) -> bool:
    """True when the run holds a `return`, or a break/continue whose target
    construct lies outside the run."""

    def visit(stmt: Stmt, loops: int, switches: int, labels: frozenset[str]) -> bool:
        if stmt.kind == "return":
            return True
        if stmt.kind in ("break", "continue"):
            if stmt.label is not None:
                return stmt.label not in labels
            if stmt.kind == "break":
                return loops == 0 and switches == 0
            return loops == 0
        next_labels = labels | {stmt.label} if stmt.label else labels
        next_loops = loops + (1 if stmt.kind in _LOOPS else 0)
        next_switches = switches + (1 if stmt.kind == "switch" else 0)
        for c in stmt.containers:
            for child in c:
                if visit(child, next_loops, next_switches, next_labels):
                    return True
        return False

    return any(visit(s, 0, 0, frozenset()) for s in run)


def is_extractable(fragment: CodeFragment, method: MethodDecl) -> bool:
    """Eligibility: 2 <= S_f <= S_m - 1, no escaping control flow, and at
    most one live-out variable."""
    s_f = statement_count(fragment.statements)
    s_m = statement_count(method.body)
    if s_f < 2 or s_f > s_m - 1:
        return False
    if _contains_escape(fragment.statements):
        return False
    return len(analyze_fragment(fragment, method).live_out) <= 1


def score_candidate(s_f: int, s_m: int, d_m: int, d_r: int,
                    n_live_in: int, n_live_out: int,
                    weights: ScoreWeights = DEFAULT_WEIGHTS) -> float:
    s_r = s_m - s_f
    return (
        weights.w_length * min(s_f, s_r) / s_m
        + weights.w_depth * (d_m - d_r) / (d_m + 1)
        - weights.w_live_in * n_live_in
        - weights.w_live_out * n_live_out
    )


def _remainder_depth(method: MethodDecl, run: list[Stmt]) -> int:
    removed = {id(node) for s in run for node in s.walk()}
    depth = run[0].depth  # the call statement replaces the run at its depth
    for s in method.walk_statements():
        if id(s) not in removed and s.depth > depth:
            depth = s.depth
    return depth


def make_candidate(run: list[Stmt], method: MethodDecl,
                   weights: ScoreWeights = DEFAULT_WEIGHTS) -> Candidate | None:
    tree = method.tree
    assert tree is not None
    fragment = CodeFragment(
        text=tree.source[run[0].start : run[-1].end],
        path=tree.path,
        start=run[0].start,
        end=run[-1].end,
        statements=run,
        method=method,
        tree=tree,
    )
    s_f = statement_count(run)
    s_m = statement_count(method.body)
    if s_f < 2 or s_f > s_m - 1 or _contains_escape(run):
        return None
    flow = analyze_fragment(fragment, method)
    if len(flow.live_out) > 1:
        return None
    d_m = max((node.depth for s in method.body for node in s.walk()), default=0)
    d_r = _remainder_depth(method, run)
    return Candidate(
        fragment=fragment,
        s_f=s_f,
        s_m=s_m,
        s_r=s_m - s_f,
        d_m=d_m,
        d_r=d_r,
        live_in=frozenset(flow.live_in),
        live_out=frozenset(flow.live_out),
        score=score_candidate(s_f, s_m, d_m, d_r, len(flow.live_in), len(flow.live_out), weights),
    )


def enumerate_candidates(method: MethodDecl,
                         weights: ScoreWeights = DEFAULT_WEIGHTS) -> list[Candidate]:
    """Every eligible contiguous sibling run in every block of *method*,
    ordered by start offset then length."""
    out: list[Candidate] = []
    for container in _containers_of(method):
        for i in range(len(container)):
            for j in range(i + 1, len(container) + 1):
                cand = make_candidate(container[i:j], method, weights)
                if cand is not None:
                    out.append(cand)
    out.sort(key=lambda c: (c.fragment.start, c.fragment.end))
    return out
