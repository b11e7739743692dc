"""Variable-flow queries over parsed fragments and methods.

The analysis is syntactic and flow-insensitive across branches: every
read counts, and a write kills later reads only when it happened at the
same or a shallower nesting depth (a textual stand-in for dominance in
structured code). Assignment writes take effect at the end of their
right-hand side, so `x = x + 1` still reads the outer `x`.

Field accesses spelled `this.x` count as the variable `x`; so do bare
field names visible from the enclosing class.
"""

from __future__ import annotations

from dataclasses import dataclass

from .tokens import IDENTIFIER, KEYWORD
from .syntax import ASSIGN_OPS, CodeFragment, MethodDecl, Stmt, SyntaxTree

READ = "read"
WRITE = "write"
DECL = "decl"
OCC = "occ"  # one per variable token, for occurrence counting

# Sort ranks so that, at one position, declarations precede reads and
# reads precede writes.
_RANK = {DECL: 0, READ: 1, WRITE: 2, OCC: 3}


@dataclass(frozen=True)
class VarEvent:
    name: str
    kind: str
    depth: int
    pos: int  # token index the event is ordered by

    @property
    def key(self) -> tuple[int, int]:
        return (self.pos, _RANK[self.kind])


@dataclass
class FragmentFlow:
    live_in: set[str]
    live_in_order: list[str]  # live-in names by first exposed read
    live_out: set[str]
    external_refs: int
    declared_inside: set[str]
    written: set[str]


def statement_events(stmts: list[Stmt], tree: SyntaxTree) -> list[VarEvent]:
    """All variable events of a statement run, in evaluation order."""
    decl_pos: dict[int, str] = {}
    for top in stmts:
        for s in top.walk():
            for d in s.decls:
                if d.name_tok >= 0:
                    decl_pos[d.name_tok] = d.name
    events: list[VarEvent] = []
    for top in stmts:
        _walk(top, tree, decl_pos, events)
    events.sort(key=lambda e: e.key)
    return events


def _walk(stmt: Stmt, tree: SyntaxTree, decl_pos: dict[int, str], out: list[VarEvent]) -> None:
    pos = stmt.tok_start
    for child in stmt.children:
        _scan(tree, pos, child.tok_start, stmt.depth, decl_pos, out)
        _walk(child, tree, decl_pos, out)
        pos = child.tok_end
    _scan(tree, pos, stmt.tok_end, stmt.depth, decl_pos, out)


def _scan(tree: SyntaxTree, lo: int, hi: int, depth: int,
          decl_pos: dict[int, str], out: list[VarEvent]) -> None:
    toks = tree.tokens
    for idx in range(lo, hi):
        t = toks[idx]
        if idx in decl_pos:
            name = decl_pos[idx]
            out.append(VarEvent(name, DECL, depth, idx))
            nxt = toks[idx + 1] if idx + 1 < len(toks) else None
            if nxt is not None and nxt.text == "=":
                out.append(VarEvent(name, WRITE, depth, _assign_end(toks, idx + 1)))
            continue
        if t.kind != IDENTIFIER or idx in tree.type_toks or idx in tree.skip_toks:
            continue
        prv = toks[idx - 1] if idx > 0 else None
        nxt = toks[idx + 1] if idx + 1 < len(toks) else None
        if nxt is not None and nxt.text == "(":
            continue  # method name
        if (nxt is not None and nxt.text == "::") or (prv is not None and prv.text == "::"):
            continue  # method reference
        if prv is not None and prv.text == ".":
            before = toks[idx - 2] if idx >= 2 else None
            if not (before is not None and before.kind == KEYWORD and before.text == "this"):
                continue  # member of some other value
        out.append(VarEvent(t.text, OCC, depth, idx))
        if nxt is not None and nxt.text in ASSIGN_OPS:
            if nxt.text != "=":
                out.append(VarEvent(t.text, READ, depth, idx))
            out.append(VarEvent(t.text, WRITE, depth, _assign_end(toks, idx + 1)))
            continue
        if (nxt is not None and nxt.text in ("++", "--")) or (prv is not None and prv.text in ("++", "--")):
            out.append(VarEvent(t.text, READ, depth, idx))
            out.append(VarEvent(t.text, WRITE, depth, idx))
            continue
        out.append(VarEvent(t.text, READ, depth, idx))


def _assign_end(toks, op_idx: int) -> int:
    """Token index where the right-hand side of an assignment ends."""
    level = 0
    j = op_idx + 1
    while j < len(toks):
        text = toks[j].text
        if text in ("(", "[", "{"):
            level += 1
        elif text in (")", "]", "}"):
            if level == 0:
                return j
            level -= 1
        elif text in (";", ",") and level == 0:
            return j
        j += 1
    return j


def visible_outer_decls(fragment: CodeFragment, method: MethodDecl) -> dict[str, str]:
    """Names declared outside the fragment but visible inside it: fields,
    parameters, and locals from enclosing blocks declared before it."""
    tree = method.tree
    vis: dict[str, str] = dict(method.visible_fields)
    vis.update({p.name: p.type_text for p in method.params})
    frag_ids = {id(s) for s in fragment.statements}

    def collect(container: list[Stmt]) -> None:
        if not container:
            return
        if not (container[0].start <= fragment.start and fragment.end <= container[-1].end):
            return
        for s in container:
            if id(s) in frag_ids:
                continue
            if s.end <= fragment.start:
                if s.kind == "decl":
                    vis.update({d.name: d.type_text for d in s.decls})
            elif s.start <= fragment.start and fragment.end <= s.end:
                vis.update({d.name: d.type_text for d in s.decls})
                for c in s.containers:
                    collect(c)

    collect(method.body)
    del tree  # context travels on the method; nothing else needed here
    return vis


def _check_containment(fragment: CodeFragment, method: MethodDecl) -> None:
    if fragment.method is not None and fragment.method is not method:
        raise ValueError("fragment does not belong to this method")
    if not (method.body_start <= fragment.start and fragment.end <= method.body_end):
        raise ValueError("fragment lies outside the method body")


def analyze_fragment(fragment: CodeFragment, method: MethodDecl) -> FragmentFlow:
    _check_containment(fragment, method)
    tree = method.tree
    assert tree is not None

    events = statement_events(fragment.statements, tree)
    declared_inside = {e.name for e in events if e.kind == DECL}
    written = {e.name for e in events if e.kind in (WRITE, DECL)}
    outer = visible_outer_decls(fragment, method)

    killed: dict[str, int] = {}
    exposed_order: list[str] = []
    exposed: set[str] = set()
    external_refs = 0
    for e in events:
        if e.kind == OCC:
            if e.name in outer and e.name not in declared_inside:
                external_refs += 1
            continue
        if e.kind == READ:
            if killed.get(e.name, 1 << 30) > e.depth and e.name not in exposed:
                exposed.add(e.name)
                exposed_order.append(e.name)
        else:
            if e.depth < killed.get(e.name, 1 << 30):
                killed[e.name] = e.depth
    live_in = {x for x in exposed if x in outer and x not in declared_inside}
    live_in_order = [x for x in exposed_order if x in live_in]

    frag_end_key = (fragment.statements[-1].tok_end, 0)
    post = [e for e in statement_events(method.body, tree) if e.key >= frag_end_key]
    post_killed: dict[str, int] = {}
    post_exposed: set[str] = set()
    for e in post:
        if e.kind == OCC:
            continue
        if e.kind == READ:
            if post_killed.get(e.name, 1 << 30) > e.depth:
                post_exposed.add(e.name)
        else:
            if e.depth < post_killed.get(e.name, 1 << 30):
                post_killed[e.name] = e.depth
    live_out = written & post_exposed

    return FragmentFlow(
        live_in=live_in,
        live_in_order=live_in_order,
        live_out=live_out,
        external_refs=external_refs,
        declared_inside=declared_inside,
        written=written,
    )


def live_in(fragment: CodeFragment, method: MethodDecl) -> set[str]:
    """Outside-declared variables the fragment reads before overwriting."""
    return analyze_fragment(fragment, method).live_in


def live_out(fragment: CodeFragment, method: MethodDecl) -> set[str]:
    """Variables the fragment assigns or declares that are read afterwards."""
    return analyze_fragment(fragment, method).live_out
