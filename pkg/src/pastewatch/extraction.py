"""Planning the concrete Extract Method rewrite.

A plan inserts one new method after the enclosing one, replaces the
fragment with a call, and replaces every exact duplicate occurrence with
an analogous call whose arguments are resolved from the duplicate's own
identifiers (positional mapping over the abstracted token sequence).
Non-exact duplicates are only reported.
"""

from __future__ import annotations

import re
import textwrap
from dataclasses import dataclass, field

from .clones import (
    DuplicateMatch,
    find_occurrences,
    fragment_tokens,
    method_body_tokens,
    normalize,
)
from .dataflow import analyze_fragment
from .syntax import CodeFragment, MethodDecl, SyntaxTree, methods_of
from .tokens import IDENTIFIER, JAVA_KEYWORDS

_IDENT_RE = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*\Z")


class PlanError(ValueError):
    pass


@dataclass(frozen=True)
class TextEdit:
    path: str
    start: int
    end: int
    new_text: str


@dataclass
class ExtractionPlan:
    name: str
    params: list[tuple[str, str]]  # (name, declared type text)
    return_var: str | None
    return_type: str
    method_text: str
    edits: list[TextEdit]
    reported_only: list[str] = field(default_factory=list)


def apply_edits(source: str, edits: list[TextEdit]) -> str:
    ordered = sorted(edits, key=lambda e: e.start)
    for a, b in zip(ordered, ordered[1:]):
        if a.end > b.start:
            raise ValueError("overlapping edits")
    out = []
    pos = 0
    for e in ordered:
        out.append(source[pos : e.start])
        out.append(e.new_text)
        pos = e.end
    out.append(source[pos:])
    return "".join(out)


def _resolve_types(names: list[str], fragment: CodeFragment, method: MethodDecl,
                   outer: dict[str, str]) -> dict[str, str]:
    inner: dict[str, str] = {}
    for s in fragment.statements:
        for node in s.walk():
            for d in node.decls:
                inner.setdefault(d.name, d.type_text)
    types: dict[str, str] = {}
    for name in names:
        t = inner.get(name) or outer.get(name)
        if t is None or t == "var":
            raise PlanError(f"cannot resolve a declared type for '{name}'")
        types[name] = t
    return types


def _declared_inside(fragment: CodeFragment, name: str) -> bool:
    return any(d.name == name for s in fragment.statements for node in s.walk() for d in node.decls)


def _reindent(text: str, indent: str) -> str:
    dedented = textwrap.dedent(text)
    return "\n".join(indent + ln if ln.strip() else ln for ln in dedented.splitlines())


def _identifier_positions(tokens) -> list[int]:
    return [i for i, t in enumerate(tokens) if t.kind == IDENTIFIER]


def plan_extraction(fragment: CodeFragment, method: MethodDecl, name: str,
                    duplicates: list[DuplicateMatch]) -> ExtractionPlan:
    if not _IDENT_RE.match(name) or name in JAVA_KEYWORDS:
        raise PlanError(f"'{name}' is not a valid method name")
    tree = method.tree
    assert tree is not None

    flow = analyze_fragment(fragment, method)
    if len(flow.live_out) > 1:
        raise ValueError("fragment has more than one live-out variable")
    outer = _visible_types(fragment, method)

    param_names = flow.live_in_order
    return_var = next(iter(flow.live_out)) if flow.live_out else None
    wanted = param_names + ([return_var] if return_var else [])
    types = _resolve_types(wanted, fragment, method, outer)
    params = [(p, types[p]) for p in param_names]
    return_type = types[return_var] if return_var else "void"

    frag_toks = fragment_tokens(fragment)
    frag_seq = normalize(frag_toks)
    frag_ids = _identifier_positions(frag_toks)

    static_kw = "static " if method.is_static else ""
    sig_params = ", ".join(f"{t} {p}" for p, t in params)
    body = _reindent(_fragment_full_text(fragment), "        ")
    ret_line = f"\n        return {return_var};" if return_var else ""
    method_text = (
        f"    private {static_kw}{return_type} {name}({sig_params}) {{\n"
        f"{body}{ret_line}\n"
        f"    }}"
    )

    def call_text(args: list[str], out_var: str | None, declare: bool) -> str:
        call = f"{name}({', '.join(args)})"
        if out_var is None:
            return f"{call};"
        if declare:
            return f"{return_type} {out_var} = {call};"
        return f"{out_var} = {call};"

    edits = [
        TextEdit(tree.path, method.end, method.end, "\n\n" + method_text),
        TextEdit(
            tree.path,
            fragment.start,
            fragment.end,
            call_text([p for p, _ in params], return_var,
                      return_var is not None and _declared_inside(fragment, return_var)),
        ),
    ]

    reported_only: list[str] = []
    by_name = {m.name: m for m in methods_of(tree)}
    for dup in duplicates:
        if not dup.exact:
            reported_only.append(dup.method)
            continue
        target = by_name.get(dup.method)
        if target is None:
            reported_only.append(dup.method)
            continue
        edits.extend(
            _duplicate_call_edits(tree, target, fragment, frag_seq, frag_ids,
                                  param_names, return_var, return_type, name, reported_only)
        )

    _check_disjoint(edits)
    return ExtractionPlan(
        name=name,
        params=params,
        return_var=return_var,
        return_type=return_type,
        method_text=method_text,
        edits=edits,
        reported_only=reported_only,
    )


def _fragment_full_text(fragment: CodeFragment) -> str:
    assert fragment.tree is not None
    src = fragment.tree.source
    line_start = src.rfind("\n", 0, fragment.start) + 1
    prefix = src[line_start : fragment.start]
    if prefix.strip():
        # Fragment starts mid-line; fall back to its exact text.
        return fragment.text
    return prefix + fragment.text


def _visible_types(fragment: CodeFragment, method: MethodDecl) -> dict[str, str]:
    from .dataflow import visible_outer_decls

    return visible_outer_decls(fragment, method)


def _duplicate_call_edits(tree: SyntaxTree, target: MethodDecl, fragment: CodeFragment,
                          frag_seq: list[str], frag_ids: list[int], param_names: list[str],
                          return_var: str | None, return_type: str, name: str,
                          reported_only: list[str]) -> list[TextEdit]:
    body_toks = method_body_tokens(tree, target)
    body_seq = normalize(body_toks)
    frag_toks = fragment_tokens(fragment)

    # Positional identifier mapping: the k-th identifier of the fragment
    # corresponds to the k-th identifier of each occurrence.
    def first_id_index(var: str) -> int:
        for k, tok_idx in enumerate(frag_ids):
            if frag_toks[tok_idx].text == var:
                return k
        raise PlanError(f"variable '{var}' does not appear in the fragment")

    param_slots = [first_id_index(p) for p in param_names]
    return_slot = first_id_index(return_var) if return_var else None

    out: list[TextEdit] = []
    for occ in find_occurrences(frag_seq, body_seq):
        occ_toks = body_toks[occ : occ + len(frag_seq)]
        start, end = occ_toks[0].start, occ_toks[-1].end
        if end > fragment.start and start < fragment.end:
            continue  # the paste site itself; already replaced
        occ_ids = _identifier_positions(occ_toks)
        if len(occ_ids) != len(frag_ids):
            reported_only.append(target.name)
            continue
        args = [occ_toks[occ_ids[k]].text for k in param_slots]
        if return_slot is not None:
            out_name = occ_toks[occ_ids[return_slot]].text
            declare = _declared_inside(fragment, return_var)  # mirrored shape
            if declare:
                call = f"{return_type} {out_name} = {name}({', '.join(args)});"
            else:
                call = f"{out_name} = {name}({', '.join(args)});"
        else:
            call = f"{name}({', '.join(args)});"
        out.append(TextEdit(tree.path, start, end, call))
    return out


def _check_disjoint(edits: list[TextEdit]) -> None:
    spans = sorted((e.start, e.end) for e in edits)
    for (a0, a1), (b0, b1) in zip(spans, spans[1:]):
        if a1 > b0:
            raise PlanError("conflicting edits overlap")
