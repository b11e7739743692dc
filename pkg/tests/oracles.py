"""Independent reference implementations used to pin down semantics.

These deliberately avoid the production code paths: liveness is a
backward iterative fixpoint over a flattened statement-component chain,
candidate enumeration is a raw (container, start, length) scan, and
substring matching is the quadratic scan.
"""

from __future__ import annotations

from pastewatch.syntax import CodeFragment, MethodDecl, Stmt, SyntaxTree
from pastewatch.tokens import IDENTIFIER, KEYWORD

_ASSIGN = {"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="}


# -- flattening into atomic components -------------------------------------


def _gaps(stmt: Stmt) -> list[tuple[int, int]]:
    """Token ranges owned by the statement itself, children excluded."""
    ranges = []
    pos = stmt.tok_start
    for child in stmt.children:
        if pos < child.tok_start:
            ranges.append((pos, child.tok_start))
        pos = child.tok_end
    if pos < stmt.tok_end:
        ranges.append((pos, stmt.tok_end))
    return ranges


def _split_for_header(tree: SyntaxTree, lo: int, hi: int) -> list[tuple[int, int]]:
    """Split a classic for header at its top-level semicolons so the
    init/condition/update parts become separate dataflow nodes."""
    parts = []
    level = 0
    start = lo
    for idx in range(lo, hi):
        text = tree.tokens[idx].text
        if text in ("(", "["):
            level += 1
        elif text in (")", "]"):
            level -= 1
        elif text == ";" and level == 1:
            parts.append((start, idx + 1))
            start = idx + 1
    if start < hi:
        parts.append((start, hi))
    return parts


def flatten(stmts: list[Stmt], tree: SyntaxTree) -> list[tuple[tuple[int, int], int]]:
    """(token range, depth) pairs for every atomic component, textual order."""
    nodes: list[tuple[tuple[int, int], int]] = []

    def visit(stmt: Stmt) -> None:
        pieces: list[tuple[int, object]] = []
        gaps = _gaps(stmt)
        if stmt.kind == "for" and gaps:
            first = gaps[0]
            for rng in _split_for_header(tree, first[0], first[1]):
                pieces.append((rng[0], rng))
            for rng in gaps[1:]:
                pieces.append((rng[0], rng))
        else:
            for rng in gaps:
                pieces.append((rng[0], rng))
        for child in stmt.children:
            pieces.append((child.tok_start, child))
        pieces.sort(key=lambda p: p[0])
        for _, piece in pieces:
            if isinstance(piece, Stmt):
                visit(piece)
            else:
                nodes.append((piece, stmt.depth))

    for s in stmts:
        visit(s)
    return nodes


def _decl_positions(stmts: list[Stmt]) -> dict[int, str]:
    out = {}
    for top in stmts:
        for s in top.walk():
            for d in s.decls:
                if d.name_tok >= 0:
                    out[d.name_tok] = d.name
    return out


def classify(tree: SyntaxTree, rng: tuple[int, int],
             decl_pos: dict[int, str]) -> tuple[set, set, set]:
    """USE / DEF / DECL over one component range; no internal ordering."""
    use: set[str] = set()
    defs: set[str] = set()
    decls: set[str] = set()
    toks = tree.tokens
    for idx in range(*rng):
        t = toks[idx]
        if idx in decl_pos:
            decls.add(decl_pos[idx])
            if idx + 1 < len(toks) and toks[idx + 1].text == "=":
                defs.add(decl_pos[idx])
            continue
        if t.kind != IDENTIFIER or idx in tree.type_toks or idx in tree.skip_toks:
            continue
        nxt = toks[idx + 1] if idx + 1 < len(toks) else None
        prv = toks[idx - 1] if idx > 0 else None
        if nxt is not None and nxt.text == "(":
            continue
        if (nxt is not None and nxt.text == "::") or (prv is not None and prv.text == "::"):
            continue
        if prv is not None and prv.text == ".":
            two_back = toks[idx - 2] if idx >= 2 else None
            if not (two_back is not None and two_back.kind == KEYWORD and two_back.text == "this"):
                continue
        name = t.text
        if nxt is not None and nxt.text in _ASSIGN:
            defs.add(name)
            if nxt.text != "=":
                use.add(name)
        elif (nxt is not None and nxt.text in ("++", "--")) or (prv is not None and prv.text in ("++", "--")):
            use.add(name)
            defs.add(name)
        else:
            use.add(name)
    return use, defs, decls


def backward_pending(nodes, tree: SyntaxTree, decl_pos) -> set[tuple[str, int]]:
    """Iterative backward liveness over the linear component chain.

    The dataflow value is a set of (name, depth) pending reads; a write or
    declaration at depth d kills pending reads at depth >= d.
    """
    facts = [classify(tree, rng, decl_pos) for rng, _ in nodes]
    depths = [d for _, d in nodes]
    n = len(nodes)
    ins: list[set] = [set() for _ in range(n + 1)]
    changed = True
    while changed:
        changed = False
        for i in range(n - 1, -1, -1):
            use, defs, decls = facts[i]
            depth = depths[i]
            value = {(x, d) for (x, d) in ins[i + 1] if not (x in defs | decls and d >= depth)}
            value |= {(x, depth) for x in use}
            if value != ins[i]:
                ins[i] = value
                changed = True
    return ins[0]


def _parents(method: MethodDecl) -> dict[int, list[Stmt]]:
    chain: dict[int, list[Stmt]] = {}

    def visit(stmt: Stmt, above: list[Stmt]) -> None:
        chain[id(stmt)] = above
        for c in stmt.containers:
            for child in c:
                visit(child, above + [stmt])

    for s in method.body:
        visit(s, [])
    return chain


def oracle_visible(fragment: CodeFragment, method: MethodDecl) -> set[str]:
    vis = set(method.visible_fields)
    vis.update(p.name for p in method.params)
    frag_nodes = {id(n) for s in fragment.statements for n in s.walk()}
    parents = _parents(method)

    def encloses(node: Stmt) -> bool:
        return node.start <= fragment.start and fragment.end <= node.end

    for top in method.body:
        for node in top.walk():
            if id(node) in frag_nodes:
                continue
            if encloses(node):
                vis.update(d.name for d in node.decls)
            elif node.end <= fragment.start and node.kind == "decl":
                if all(encloses(anc) for anc in parents[id(node)]):
                    vis.update(d.name for d in node.decls)
    return vis


def oracle_live_in(fragment: CodeFragment, method: MethodDecl) -> set[str]:
    tree = method.tree
    decl_pos = _decl_positions(fragment.statements)
    nodes = flatten(fragment.statements, tree)
    pending = backward_pending(nodes, tree, decl_pos)
    names = {x for x, _ in pending}
    declared = set(decl_pos.values())
    return {x for x in names if x in oracle_visible(fragment, method) and x not in declared}


def oracle_live_out(fragment: CodeFragment, method: MethodDecl) -> set[str]:
    tree = method.tree
    frag_end = fragment.statements[-1].tok_end
    method_decl_pos = _decl_positions(method.body)
    all_nodes = flatten(method.body, tree)
    post = [(rng, d) for rng, d in all_nodes if rng[0] >= frag_end]
    pending = backward_pending(post, tree, method_decl_pos)
    pending_names = {x for x, _ in pending}

    frag_decl_pos = _decl_positions(fragment.statements)
    assigned: set[str] = set(frag_decl_pos.values())
    for rng, _ in flatten(fragment.statements, tree):
        _, defs, decls = classify(tree, rng, frag_decl_pos)
        assigned |= defs | decls
    return assigned & pending_names


# -- candidate enumeration ---------------------------------------------------


def brute_force_runs(method: MethodDecl) -> list[tuple[int, int]]:
    """Every eligible (start, end) span via a raw triple scan, sorted."""
    from pastewatch.candidates import is_extractable

    tree = method.tree
    containers = [method.body]
    for s in method.walk_statements():
        containers.extend(c for c in s.containers if c)
    spans = []
    for cont in containers:
        for start in range(len(cont)):
            for length in range(1, len(cont) - start + 1):
                run = cont[start : start + length]
                frag = CodeFragment(
                    text=tree.source[run[0].start : run[-1].end],
                    path=tree.path,
                    start=run[0].start,
                    end=run[-1].end,
                    statements=run,
                    method=method,
                    tree=tree,
                )
                if is_extractable(frag, method):
                    spans.append((frag.start, frag.end))
    return sorted(spans)


# -- substring scan -----------------------------------------------------------


def naive_substring(fragment: list[str], method: list[str]) -> bool:
    if len(fragment) > len(method):
        return False
    for i in range(len(method) - len(fragment) + 1):
        if method[i : i + len(fragment)] == fragment:
            return True
    return False
